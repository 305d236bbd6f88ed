"""Structural metrics: summary statistics, modularity and correlation."""

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import special

from .errors import ParameterError
from .graph import all_pairs_distances

__all__ = [
    "GraphStats",
    "graph_stats",
    "triangle_counts",
    "local_clustering",
    "modularity",
    "best_modularity",
    "pearson",
]


@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    average_degree: float
    average_path_length: float
    link_density: float
    average_clustering: float
    diameter: int
    component_count: int

    def to_dict(self):
        return asdict(self)


def triangle_counts(g):
    """Number of triangles through each node."""
    if g.m == 0:
        return np.zeros(g.n, dtype=np.int64)
    a = g.csr()
    t = (a @ a).multiply(a).sum(axis=1)
    return (np.asarray(t).ravel() / 2).round().astype(np.int64)


def local_clustering(g):
    """Local clustering coefficients; nodes of degree < 2 get 0."""
    k = g.degrees().astype(float)
    t = triangle_counts(g).astype(float)
    pairs = k * (k - 1) / 2
    out = np.zeros(g.n)
    ok = pairs > 0
    out[ok] = t[ok] / pairs[ok]
    return out


def graph_stats(g):
    """Summary statistics over finite-distance pairs.

    Average path length and diameter ignore unreachable pairs;
    ``component_count`` tells callers whether that happened.
    """
    if g.n < 1:
        raise ParameterError("graph_stats needs at least one node")
    n, m = g.n, g.m
    dist = all_pairs_distances(g)
    off = ~np.eye(n, dtype=bool)
    finite = dist[off & (dist >= 0)]
    avl = float(finite.mean()) if finite.size else 0.0
    dia = int(finite.max()) if finite.size else 0
    # each row's reachable set is its component
    labels = np.argmax(dist >= 0, axis=1)
    components = len(np.unique(labels))
    return GraphStats(
        n=n,
        m=m,
        average_degree=2.0 * m / n,
        average_path_length=avl,
        link_density=2.0 * m / (n * (n - 1)) if n >= 2 else 0.0,
        average_clustering=float(local_clustering(g).mean()),
        diameter=dia,
        component_count=components,
    )


def modularity(g, partition):
    """Newman modularity of ``partition`` (a label per node)."""
    if g.m == 0:
        raise ParameterError("modularity is undefined without edges")
    labels = np.asarray(partition)
    if labels.shape != (g.n,):
        raise ParameterError("partition must label every node")
    _, comm = np.unique(labels, return_inverse=True)
    m = float(g.m)
    u, v = g.edges[:, 0], g.edges[:, 1]
    same = comm[u] == comm[v]
    intra = np.bincount(comm[u][same], minlength=comm.max() + 1)
    dsum = np.bincount(comm, weights=g.degrees(), minlength=comm.max() + 1)
    return float(np.sum(intra / m - (dsum / (2.0 * m)) ** 2))


def _one_level(adj, loops, k, m2, rng):
    """Local-move phase on a weighted graph; returns community per node."""
    n = len(adj)
    comm = np.arange(n)
    tot = k.copy()
    improved = False
    moved = True
    while moved:
        moved = False
        for i in rng.permutation(n):
            ci = comm[i]
            links = {}
            for j, w in adj[i].items():
                cj = comm[j]
                links[cj] = links.get(cj, 0.0) + w
            ki = k[i]
            tot[ci] -= ki
            best_c = ci
            best_gain = links.get(ci, 0.0) - tot[ci] * ki / m2
            for c, w in links.items():
                gain = w - tot[c] * ki / m2
                if gain > best_gain + 1e-12:
                    best_gain, best_c = gain, c
            tot[best_c] += ki
            if best_c != ci:
                comm[i] = best_c
                moved = improved = True
    return comm, improved


def _aggregate(adj, loops, comm):
    _, comm = np.unique(comm, return_inverse=True)
    nc = comm.max() + 1
    new_adj = [dict() for _ in range(nc)]
    new_loops = np.zeros(nc)
    np.add.at(new_loops, comm, loops)
    for i, nbrs in enumerate(adj):
        ci = comm[i]
        for j, w in nbrs.items():
            cj = comm[j]
            if ci == cj:
                new_loops[ci] += w / 2.0
            else:
                new_adj[ci][cj] = new_adj[ci].get(cj, 0.0) + w
    return new_adj, new_loops, comm


def _louvain(g, rng):
    adj = [dict.fromkeys(g.neighbors(i).tolist(), 1.0) for i in range(g.n)]
    loops = np.zeros(g.n)
    node_comm = np.arange(g.n)
    m2 = 2.0 * g.m
    while True:
        k = np.array([sum(nb.values()) for nb in adj]) + 2.0 * loops
        comm, improved = _one_level(adj, loops, k, m2, rng)
        if not improved:
            break
        adj, loops, comm = _aggregate(adj, loops, comm)
        node_comm = comm[node_comm]
    _, node_comm = np.unique(node_comm, return_inverse=True)
    return node_comm


def best_modularity(g, seed=0, restarts=10):
    """Best partition found by Louvain-style optimisation.

    Node visit order is shuffled per restart; the returned ``Q`` is
    recomputed with :func:`modularity` on the returned partition.
    """
    if g.m == 0:
        raise ParameterError("modularity is undefined without edges")
    rng = np.random.default_rng(seed)
    best, best_q = None, -np.inf
    for _ in range(max(1, int(restarts))):
        part = _louvain(g, rng)
        q = modularity(g, part)
        if q > best_q:
            best, best_q = part, q
    trivial = modularity(g, np.zeros(g.n, dtype=np.int64))
    if trivial > best_q:
        best, best_q = np.zeros(g.n, dtype=np.int64), trivial
    return best, best_q


def pearson(x, y):
    """Pearson correlation and two-sided p-value (t distribution, n-2 dof)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ParameterError("pearson needs two vectors of equal length")
    n = len(x)
    if n < 3:
        raise ParameterError("pearson needs at least three observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise ParameterError("pearson is undefined for a constant vector")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    df = n - 2
    if abs(r) == 1.0:
        return r, 0.0
    t2 = r * r * df / (1.0 - r * r)
    # two-sided tail of Student's t via the regularized incomplete beta
    p = float(special.betainc(0.5 * df, 0.5, df / (df + t2)))
    return r, p
