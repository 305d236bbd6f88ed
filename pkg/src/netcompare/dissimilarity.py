"""Network dissimilarity measures.

``dne``
    Embedding-distance measure: DeepWalk vectors, per-node histograms of
    Euclidean distances to all other nodes, then a Jensen-Shannon
    comparison of the mean histograms plus the difference in histogram
    heterogeneity.
``dsp``
    Shortest-path measure: mean hop-distance distributions, node
    dispersion, and alpha-centrality of the graph and its complement.
``dc``
    Communicability measure: Jensen-Shannon divergence (base 2) of the
    sorted, normalised entries of ``exp(A)``.
``dm``
    Hybrid of ``dne`` where each node's histogram is blended with its
    hop-distance distribution.

Stochastic measures (``dne``, ``dm``) are averaged over realizations;
each realization embeds each graph with seeds derived from
``(seed, realization, slot)``.
"""

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import sparse

from .divergence import LN2, entropy, generalized_js, js_two, network_js, pad_front, pad_tail
from .embedding import DistanceMatrix, SkipGramConfig, WalkConfig, deepwalk, distance_matrix
from .errors import NumericError, ParameterError
from .expm import expm
from .graph import all_pairs_distances, complement
from .seeding import derive_seed

__all__ = [
    "NodeDistributionSet",
    "SpdDistributionSet",
    "ShortestPathProfile",
    "DissimilarityResult",
    "MeasureParams",
    "MEASURES",
    "embedding_histograms",
    "embedding_profile",
    "js_dissimilarity",
    "d_ne",
    "spd_distributions",
    "nnd",
    "largest_eigenvalue",
    "alpha_centrality_distribution",
    "shortest_path_profile",
    "dsp_from_profiles",
    "d_sp",
    "communicability_matrix",
    "communicability_sequence",
    "dc_from_sequences",
    "d_c",
    "hybrid_distribution",
    "d_m",
    "graph_profile",
    "compare_profiles",
    "dissimilarity",
]

MEASURES = ("dne", "dsp", "dc", "dm")
MAX_DENSE_NODES = 5000


@dataclass(frozen=True)
class NodeDistributionSet:
    """One distribution per node, stacked as rows."""

    rows: np.ndarray

    @property
    def mean(self):
        return self.rows.mean(axis=0)

    @property
    def heterogeneity(self):
        return network_js(self.rows)

    def __len__(self):
        return self.rows.shape[0]


@dataclass(frozen=True)
class SpdDistributionSet:
    """Hop-distance distributions.

    Column ``j`` of row ``i`` (``1 <= j <= diameter``) is the fraction of the
    other nodes at distance ``j`` from node ``i``; column 0 is always zero
    and the last column holds the unreachable fraction.
    """

    rows: np.ndarray
    diameter: int

    @property
    def mean(self):
        return self.rows.mean(axis=0)


@dataclass(frozen=True)
class ShortestPathProfile:
    mean: np.ndarray
    nnd: float
    alpha: np.ndarray
    alpha_complement: np.ndarray


@dataclass
class DissimilarityResult:
    measure: str
    value: float
    std: float = 0.0
    terms: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    seeds: list = field(default_factory=list)
    realizations: int = 1
    values: list = field(default_factory=list)

    def to_dict(self):
        return {
            "measure": self.measure,
            "value": self.value,
            "std": self.std,
            "terms": self.terms,
            "params": self.params,
            "seeds": self.seeds,
            "realizations": self.realizations,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


@dataclass(frozen=True)
class MeasureParams:
    """Everything a measure needs besides the two graphs."""

    measure: str = "dne"
    omega: float = 1.0
    lam: float = 0.5
    bins: int = 10
    w1: float = 0.45
    w2: float = 0.45
    w3: float = 0.1
    alpha_frac: float = 0.95
    walk: WalkConfig = WalkConfig()
    skipgram: SkipGramConfig = SkipGramConfig()

    def __post_init__(self):
        if self.measure not in MEASURES:
            raise ParameterError(f"unknown measure {self.measure!r}; expected one of {MEASURES}")
        if not 0.0 <= self.omega <= 1.0:
            raise ParameterError("omega must lie in [0, 1]")
        if not 0.0 <= self.lam <= 1.0:
            raise ParameterError("lambda must lie in [0, 1]")
        if self.bins < 1:
            raise ParameterError("bins must be >= 1")
        ws = (self.w1, self.w2, self.w3)
        if min(ws) < 0 or abs(sum(ws) - 1.0) > 1e-9:
            raise ParameterError("w1, w2, w3 must be non-negative and sum to 1")
        if not 0.0 < self.alpha_frac < 1.0:
            raise ParameterError("alpha_frac must lie in (0, 1)")

    @property
    def stochastic(self):
        return self.measure in ("dne", "dm")

    def describe(self):
        d = {"measure": self.measure}
        if self.measure in ("dne", "dm"):
            d.update(omega=self.omega, bins=self.bins,
                     dimension=self.skipgram.dimension,
                     walks_per_node=self.walk.walks_per_node,
                     walk_length=self.walk.walk_length,
                     window=self.skipgram.window,
                     negatives=self.skipgram.negatives,
                     epochs=self.skipgram.epochs)
        if self.measure == "dm":
            d["lambda"] = self.lam
        if self.measure == "dsp":
            d.update(w1=self.w1, w2=self.w2, w3=self.w3, alpha_frac=self.alpha_frac)
        return d


def _sqrt01(x):
    return math.sqrt(min(max(x, 0.0), 1.0))


# --- embedding-distance histograms -----------------------------------------

def embedding_histograms(B, L=10):
    """Per-node histograms of distances to every other node.

    Bin ``z`` covers ``((z-1)*delta, z*delta]`` with ``delta = B_max / L``;
    the first bin also includes 0.  The self-distance is excluded, so each
    row is over ``N - 1`` values.  When every distance is zero all mass goes
    to the first bin.
    """
    if isinstance(B, DistanceMatrix):
        b, b_max = B.B, B.b_max
    else:
        b = np.asarray(B, dtype=float)
        b_max = float(b.max()) if b.size else 0.0
    n = b.shape[0]
    if L < 1:
        raise ParameterError("need at least one bin")
    if n < 2:
        raise ParameterError("histograms need at least two nodes")
    off = b[~np.eye(n, dtype=bool)].reshape(n, n - 1)
    if b_max <= 0:
        idx = np.zeros_like(off, dtype=np.int64)
    else:
        delta = b_max / L
        idx = np.clip(np.ceil(off / delta).astype(np.int64) - 1, 0, L - 1)
    rows = np.zeros((n, L))
    for z in range(L):
        rows[:, z] = np.count_nonzero(idx == z, axis=1)
    return NodeDistributionSet(rows / (n - 1))


def embedding_profile(g, L=10, wcfg=WalkConfig(), scfg=SkipGramConfig()):
    emb = deepwalk(g, wcfg, scfg)
    return embedding_histograms(distance_matrix(emb), L)


def js_dissimilarity(h1, h2, omega=1.0):
    """Combine the mean-distribution divergence and heterogeneity gap.

    Returns ``(value, terms)``.  Shorter distribution vectors are
    zero-padded at the tail before comparing means.
    """
    if not 0.0 <= omega <= 1.0:
        raise ParameterError("omega must lie in [0, 1]")
    mu1, mu2 = pad_tail([h1.mean, h2.mean])
    t1 = omega * _sqrt01(js_two(mu1, mu2) / LN2)
    t2 = (1.0 - omega) * abs(_sqrt01(h1.heterogeneity) - _sqrt01(h2.heterogeneity))
    return t1 + t2, {"mean_divergence": t1, "heterogeneity": t2}


def _realization_seeds(seed, r, slot):
    s = derive_seed(seed, r, slot)
    return derive_seed(s, "walk"), derive_seed(s, "skipgram")


def _embed_configs(params, seed, r, slot):
    ws, ss = _realization_seeds(seed, r, slot)
    return replace(params.walk, seed=ws), replace(params.skipgram, seed=ss)


def _aggregate(measure, values, terms, params, seeds):
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise NumericError(f"{measure} produced non-finite values")
    mean_terms = {k: float(np.mean([t[k] for t in terms])) for k in terms[0]}
    return DissimilarityResult(
        measure=measure,
        value=float(values.mean()),
        std=float(values.std()),
        terms=mean_terms,
        params=params,
        seeds=seeds,
        realizations=len(values),
        values=values.tolist(),
    )


def d_ne(g1, g2, omega=1.0, L=10, wcfg=WalkConfig(), scfg=SkipGramConfig(),
         realizations=10, seed=0):
    """Embedding-based dissimilarity, mean and std over ``realizations``."""
    params = MeasureParams("dne", omega=omega, bins=L, walk=wcfg, skipgram=scfg)
    return dissimilarity(g1, g2, params, realizations, seed)


# --- shortest-path measure ---------------------------------------------------

def spd_distributions(g, dist=None):
    n = g.n
    if n < 2:
        raise ParameterError("hop-distance distributions need at least two nodes")
    if dist is None:
        dist = all_pairs_distances(g)
    finite = dist[dist > 0]
    dia = int(finite.max()) if finite.size else 0
    idx = np.where(dist < 0, dia + 1, dist)
    rows = np.zeros((n, dia + 2))
    for i in range(n):
        rows[i] = np.bincount(idx[i], minlength=dia + 2)
    rows[:, 0] = 0.0
    return SpdDistributionSet(rows / (n - 1), dia)


def nnd(g_or_spd):
    """Node dispersion: JS divergence of hop-distance rows over ``log(dia + 1)``."""
    spd = g_or_spd if isinstance(g_or_spd, SpdDistributionSet) else spd_distributions(g_or_spd)
    denom = math.log(spd.diameter + 1)
    if denom <= 0:
        return 0.0
    return min(generalized_js(spd.rows) / denom, 1.0)


def largest_eigenvalue(g, tol=1e-10, max_iter=10_000):
    """Largest adjacency eigenvalue by power iteration on ``A + I``.

    The shift makes the top eigenvalue dominant in magnitude even for
    bipartite graphs, whose spectrum is symmetric.
    """
    if g.m == 0:
        return 0.0
    a = g.csr()
    x = np.ones(g.n) / math.sqrt(g.n)
    lam = 0.0
    for _ in range(max_iter):
        y = a @ x + x
        new = float(x @ y)
        norm = np.linalg.norm(y)
        x = y / norm
        if abs(new - lam) <= tol * max(1.0, abs(new)):
            return new - 1.0
        lam = new
    raise NumericError("power iteration did not converge")


def alpha_centrality_distribution(g, alpha_frac=0.95):
    """Normalised alpha-centrality ``(I - alpha A)^-1 1``, sorted descending.

    ``alpha = alpha_frac / lambda_max`` keeps the system invertible.
    """
    if g.n < 1:
        raise ParameterError("alpha-centrality needs at least one node")
    lam = largest_eigenvalue(g)
    if lam <= 0:
        x = np.ones(g.n)
    else:
        alpha = alpha_frac / lam
        m = sparse.identity(g.n, format="csc") - alpha * g.csr().tocsc()
        if g.n <= 2000:
            x = np.linalg.solve(m.toarray(), np.ones(g.n))
        else:
            from scipy.sparse.linalg import spsolve
            x = spsolve(m, np.ones(g.n))
    if not np.all(np.isfinite(x)):
        raise NumericError("alpha-centrality solve failed")
    x = x / x.sum()
    return np.sort(x)[::-1]


def shortest_path_profile(g, alpha_frac=0.95, dist=None):
    spd = spd_distributions(g, dist)
    return ShortestPathProfile(
        mean=spd.mean,
        nnd=nnd(spd),
        alpha=alpha_centrality_distribution(g, alpha_frac),
        alpha_complement=alpha_centrality_distribution(complement(g), alpha_frac),
    )


def dsp_from_profiles(p1, p2, w1=0.45, w2=0.45, w3=0.1):
    mu1, mu2 = pad_tail([p1.mean, p2.mean])
    t1 = w1 * _sqrt01(js_two(mu1, mu2) / LN2)
    t2 = w2 * abs(math.sqrt(p1.nnd) - math.sqrt(p2.nnd))
    a1, a2 = pad_tail([p1.alpha, p2.alpha])
    c1, c2 = pad_tail([p1.alpha_complement, p2.alpha_complement])
    t3 = 0.5 * w3 * (_sqrt01(js_two(a1, a2) / LN2) + _sqrt01(js_two(c1, c2) / LN2))
    value = t1 + t2 + t3
    return value, {"mean_distance": t1, "dispersion": t2, "alpha_centrality": t3}


def d_sp(g1, g2, w1=0.45, w2=0.45, w3=0.1, alpha_frac=0.95):
    """Shortest-path-based dissimilarity in ``[0, 1]``."""
    params = MeasureParams("dsp", w1=w1, w2=w2, w3=w3, alpha_frac=alpha_frac)
    return dissimilarity(g1, g2, params)


# --- communicability measure -----------------------------------------------------

def communicability_matrix(g):
    """``exp(A)`` for the adjacency matrix ``A``."""
    if g.n > MAX_DENSE_NODES:
        raise ParameterError(f"communicability limited to {MAX_DENSE_NODES} nodes")
    c = expm(g.adjacency_matrix())
    return 0.5 * (c + c.T)


def communicability_sequence(c):
    """Upper-triangle entries (diagonal included), normalised, ascending."""
    c = np.asarray(c, dtype=float)
    iu = np.triu_indices(c.shape[0])
    vals = c[iu]
    total = vals.sum()
    if total <= 0:
        raise NumericError("communicability entries sum to zero")
    return np.sort(vals / total)


def dc_from_sequences(p1, p2):
    a, b = pad_front([p1, p2])
    value = entropy(0.5 * (a + b), base=2) - 0.5 * (entropy(a, base=2) + entropy(b, base=2))
    value = min(max(value, 0.0), 1.0)
    return value, {"communicability_js": value}


def d_c(g1, g2):
    """Communicability-sequence dissimilarity (base-2 Jensen-Shannon)."""
    return dissimilarity(g1, g2, MeasureParams("dc"))


# --- hybrid ---------------------------------------------------------------------

def hybrid_distribution(spd, emb, lam):
    """Per node, normalise ``lam * P_i + (1 - lam) * H_i`` after zero-padding
    the shorter vector at the tail."""
    if not 0.0 <= lam <= 1.0:
        raise ParameterError("lambda must lie in [0, 1]")
    p = spd.rows if isinstance(spd, SpdDistributionSet) else np.asarray(spd, dtype=float)
    h = emb.rows if isinstance(emb, NodeDistributionSet) else np.asarray(emb, dtype=float)
    if p.shape[0] != h.shape[0]:
        raise ParameterError("hybrid needs one distribution of each kind per node")
    if lam == 0.0:
        return NodeDistributionSet(h.copy())
    if lam == 1.0:
        return NodeDistributionSet(p.copy())
    p, h = pad_tail([p, h])
    m = lam * p + (1.0 - lam) * h
    s = m.sum(axis=1, keepdims=True)
    s[s == 0] = 1.0
    return NodeDistributionSet(m / s)


def d_m(g1, g2, lam=0.5, omega=1.0, L=10, wcfg=WalkConfig(), scfg=SkipGramConfig(),
        realizations=10, seed=0):
    """Hybrid dissimilarity; ``lam = 0`` reproduces :func:`d_ne` on equal seeds."""
    params = MeasureParams("dm", omega=omega, lam=lam, bins=L, walk=wcfg, skipgram=scfg)
    return dissimilarity(g1, g2, params, realizations, seed)


# --- generic per-graph profiles ------------------------------------------------

@dataclass
class GraphProfile:
    """Per-graph artifacts a measure compares; only the needed ones are set."""

    embedding: NodeDistributionSet = None
    spd: SpdDistributionSet = None
    shortest_path: ShortestPathProfile = None
    communicability: np.ndarray = None


def graph_profile(g, params, seed=0, realization=0, slot=0):
    """Compute what ``params.measure`` needs to compare ``g``.

    Embedding seeds derive from ``(seed, realization, slot)``.
    """
    prof = GraphProfile()
    if params.measure in ("dne", "dm"):
        wcfg, scfg = _embed_configs(params, seed, realization, slot)
        prof.embedding = embedding_profile(g, params.bins, wcfg, scfg)
    if params.measure == "dm":
        prof.spd = spd_distributions(g)
    if params.measure == "dsp":
        prof.shortest_path = shortest_path_profile(g, params.alpha_frac)
    if params.measure == "dc":
        prof.communicability = communicability_sequence(communicability_matrix(g))
    return prof


def compare_profiles(a, b, params, lam=None):
    """Dissimilarity between two profiles; returns ``(value, terms)``."""
    if params.measure == "dne":
        return js_dissimilarity(a.embedding, b.embedding, params.omega)
    if params.measure == "dm":
        lam = params.lam if lam is None else lam
        return js_dissimilarity(hybrid_distribution(a.spd, a.embedding, lam),
                                hybrid_distribution(b.spd, b.embedding, lam),
                                params.omega)
    if params.measure == "dsp":
        return dsp_from_profiles(a.shortest_path, b.shortest_path,
                                 params.w1, params.w2, params.w3)
    return dc_from_sequences(a.communicability, b.communicability)


def dissimilarity(g1, g2, params, realizations=10, seed=0):
    """Compare two graphs under ``params``.

    Deterministic measures are evaluated once.  For stochastic measures,
    realization ``r`` embeds ``g1`` with seeds from ``(seed, r, 0)`` and
    ``g2`` from ``(seed, r, 1)``.
    """
    if not params.stochastic:
        pa = graph_profile(g1, params)
        pb = graph_profile(g2, params)
        value, terms = compare_profiles(pa, pb, params)
        return _aggregate(params.measure, [value], [terms], params.describe(), [])
    if realizations < 1:
        raise ParameterError("realizations must be >= 1")
    values, terms, seeds = [], [], []
    for r in range(realizations):
        pa = graph_profile(g1, params, seed, r, 0)
        pb = graph_profile(g2, params, seed, r, 1)
        v, t = compare_profiles(pa, pb, params)
        values.append(v)
        terms.append(t)
        seeds.append([derive_seed(seed, r, 0), derive_seed(seed, r, 1)])
    desc = params.describe()
    desc["seed"] = seed
    return _aggregate(params.measure, values, terms, desc, seeds)
