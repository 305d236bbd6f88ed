"""Seeded random-graph models and edge perturbation.

Every constructor is a pure function of its arguments: the same
parameters and seed always give the same edge set.
"""

import json
import logging
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ParameterError
from .graph import Graph

__all__ = [
    "GeneratorSpec",
    "generate",
    "k_regular_ring",
    "watts_strogatz",
    "rewire_fraction",
    "barabasi_albert",
    "perturb",
]

log = logging.getLogger(__name__)

MODELS = ("KREGULAR", "WS", "BA")


@dataclass(frozen=True)
class GeneratorSpec:
    model: str
    N: int
    k: int = 10
    p: float = 0.0
    m: int = 5
    seed: int = 0

    def __post_init__(self):
        model = self.model.upper()
        object.__setattr__(self, "model", model)
        if model not in MODELS:
            raise ParameterError(f"unknown model {self.model!r}; expected one of {MODELS}")
        if model in ("KREGULAR", "WS"):
            _check_ring(self.N, self.k)
        if model == "WS" and not 0.0 <= self.p <= 1.0:
            raise ParameterError("p must lie in [0, 1]")
        if model == "BA" and not 1 <= self.m < self.N:
            raise ParameterError("BA needs 1 <= m < N")

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        fields = {k: d[k] for k in ("model", "N", "k", "p", "m", "seed") if k in d}
        return cls(**fields)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def generate(spec):
    if spec.model == "KREGULAR":
        return k_regular_ring(spec.N, spec.k, spec.seed)
    if spec.model == "WS":
        return watts_strogatz(spec.N, spec.k, spec.p, spec.seed)
    return barabasi_albert(spec.N, spec.m, spec.seed)


def _check_ring(n, k):
    if k < 0 or k % 2:
        raise ParameterError("ring degree k must be even and non-negative")
    if k >= n:
        raise ParameterError("ring degree k must be smaller than N")


def _ring_edges(n, k):
    return [(u, (u + j) % n) for j in range(1, k // 2 + 1) for u in range(n)]


def k_regular_ring(N, k, seed=None):
    """Ring lattice joining each node to its ``k/2`` neighbours on each side.

    ``seed`` is accepted for a uniform generator signature; the lattice is
    deterministic.
    """
    _check_ring(N, k)
    return Graph.from_edges(N, _ring_edges(N, k))


def _rewire(n, adj, edges, picks, rng):
    """Redirect one endpoint of each picked edge to a uniform non-neighbour.

    ``edges`` is a list of ``(keep, drop)`` pairs mutated in place.
    Returns the number of edges actually rewired.
    """
    done = 0
    for idx in picks:
        u, v = edges[idx]
        if len(adj[u]) >= n - 1:
            log.warning("node %d is saturated; edge left in place", u)
            continue
        for _ in range(n):
            w = int(rng.integers(n))
            if w != u and w not in adj[u]:
                break
        else:
            log.warning("no free target found for edge (%d, %d); skipped", u, v)
            continue
        adj[u].discard(v)
        adj[v].discard(u)
        adj[u].add(w)
        adj[w].add(u)
        edges[idx] = (u, w)
        done += 1
    return done


def _edges_to_graph(n, edges):
    return Graph(n, np.array(edges, dtype=np.int64).reshape(-1, 2))


def _watts_strogatz(N, k, p, seed):
    _check_ring(N, k)
    if not 0.0 <= p <= 1.0:
        raise ParameterError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    edges = _ring_edges(N, k)
    adj = [set() for _ in range(N)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    rewired = 0
    # classic sweep: one lattice "ring" of offsets at a time
    for idx in range(len(edges)):
        if rng.random() < p:
            rewired += _rewire(N, adj, edges, [idx], rng)
    return _edges_to_graph(N, edges), rewired


def watts_strogatz(N, k, p, seed=None):
    """Watts-Strogatz small world: ring lattice, each edge rewired w.p. ``p``.

    The far endpoint of a rewired edge moves to a uniformly chosen node that
    is neither the near endpoint nor already adjacent to it, so the edge
    count stays ``N*k/2``.
    """
    return _watts_strogatz(N, k, p, seed)[0]


def rewire_fraction(g, fraction, seed=None):
    """Rewire exactly ``round(fraction * m)`` distinct edges, WS style.

    Edges are drawn without replacement; for each one a random endpoint is
    kept and the other is redirected to a uniform non-neighbour.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ParameterError("fraction must lie in [0, 1]")
    count = int(round(fraction * g.m))
    if count == 0:
        return g
    rng = np.random.default_rng(seed)
    adj = g.adjacency_sets()
    edges = [(int(u), int(v)) for u, v in g.edges]
    picks = rng.choice(g.m, size=count, replace=False)
    for idx in picks:
        if rng.random() < 0.5:
            edges[idx] = edges[idx][::-1]
    done = _rewire(g.n, adj, edges, picks, rng)
    if done != count:
        log.warning("rewired %d of %d requested edges", done, count)
    return _edges_to_graph(g.n, edges)


def barabasi_albert(N, m, seed=None):
    """Preferential attachment grown from a complete graph on ``m + 1`` nodes.

    Each arriving node links to ``m`` distinct existing nodes chosen with
    probability proportional to their current degree, giving
    ``C(m+1, 2) + m*(N-m-1)`` edges.
    """
    if not 1 <= m < N:
        raise ParameterError("BA needs 1 <= m < N")
    rng = np.random.default_rng(seed)
    edges = [(u, v) for u in range(m + 1) for v in range(u + 1, m + 1)]
    # each node appears once per incident edge end
    stubs = [u for e in edges for u in e]
    for new in range(m + 1, N):
        targets = set()
        while len(targets) < m:
            targets.add(stubs[int(rng.integers(len(stubs)))])
        for t in sorted(targets):
            edges.append((t, new))
            stubs.append(t)
            stubs.append(new)
    return _edges_to_graph(N, edges)


def _sample_non_edges(g, count, rng):
    n = g.n
    total_pairs = n * (n - 1) // 2
    free = total_pairs - g.m
    if count > free:
        raise ParameterError(f"cannot add {count} edges: only {free} non-edges exist")
    existing = g.edge_set()
    if free <= 4 * count:
        # dense regime: enumerate the non-edges
        iu, ju = np.triu_indices(n, k=1)
        mask = ~g.adjacency_matrix(dtype=bool)[iu, ju]
        cand = np.column_stack([iu[mask], ju[mask]])
        pick = rng.choice(len(cand), size=count, replace=False)
        return [tuple(map(int, cand[i])) for i in np.sort(pick)]
    added = set()
    while len(added) < count:
        u, v = (int(x) for x in rng.integers(n, size=2))
        if u == v:
            continue
        e = (u, v) if u < v else (v, u)
        if e in existing or e in added:
            continue
        added.add(e)
    return sorted(added)


def perturb(g, f, seed=None):
    """Delete (``f < 0``) or add (``f > 0``) ``round(|f| * m)`` random edges."""
    if not -1.0 <= f <= 1.0:
        raise ParameterError("perturbation fraction must lie in [-1, 1]")
    count = int(round(abs(f) * g.m))
    if count == 0:
        return g
    rng = np.random.default_rng(seed)
    if f < 0:
        keep = np.sort(rng.choice(g.m, size=g.m - count, replace=False))
        return Graph(g.n, g.edges[keep], g.labels)
    new = _sample_non_edges(g, count, rng)
    return Graph(g.n, np.concatenate([g.edges, np.array(new, dtype=np.int64)]), g.labels)
