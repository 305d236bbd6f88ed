"""Undirected simple graphs, edge-list I/O and hop distances.

Nodes are dense integers ``0..n-1``.  Edges are kept as a sorted
``(m, 2)`` array with ``u < v`` plus a CSR adjacency view, both
read-only, so a :class:`Graph` can be shared freely.
"""

import io
import logging
from collections import deque

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .errors import EdgeListError, EmptyGraphError, ParameterError

__all__ = [
    "Graph",
    "UNREACHABLE",
    "read_edge_list",
    "write_edge_list",
    "load_graph",
    "save_graph",
    "bfs_distances",
    "all_pairs_distances",
    "complement",
]

log = logging.getLogger(__name__)

UNREACHABLE = -1


def _readonly(a):
    a.setflags(write=False)
    return a


class Graph:
    """Immutable undirected simple graph on nodes ``0..n-1``.

    Parameters
    ----------
    n : int
        Number of nodes, isolated ones included.
    edges : array_like of shape (m, 2)
        Node pairs.  Orientation and order do not matter; duplicates and
        self-loops are rejected (use :meth:`from_edges` to clean input).
    labels : sequence, optional
        Original node identifiers, ``labels[i]`` naming node ``i``.
    """

    __slots__ = ("n", "edges", "indptr", "indices", "labels", "_deg")

    def __init__(self, n, edges=(), labels=None):
        n = int(n)
        if n < 0:
            raise ParameterError("node count must be non-negative")
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= n:
                raise ParameterError("edge endpoint out of range")
            e = np.sort(e, axis=1)
            if np.any(e[:, 0] == e[:, 1]):
                raise ParameterError("self-loops are not allowed")
            e = e[np.lexsort((e[:, 1], e[:, 0]))]
            if np.any(np.all(e[1:] == e[:-1], axis=1)):
                raise ParameterError("duplicate edges are not allowed")
        self.n = n
        self.edges = _readonly(e)
        both = np.concatenate([e, e[:, ::-1]]) if e.size else e
        order = np.lexsort((both[:, 1], both[:, 0])) if e.size else np.zeros(0, np.int64)
        src = both[order, 0]
        self.indices = _readonly(np.ascontiguousarray(both[order, 1]))
        counts = np.bincount(src, minlength=n) if n else np.zeros(0, np.int64)
        self.indptr = _readonly(np.concatenate([[0], np.cumsum(counts)]).astype(np.int64))
        self._deg = _readonly(counts.astype(np.int64))
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise ParameterError("labels must name every node")
        self.labels = labels

    @classmethod
    def from_edges(cls, n, edges, labels=None):
        """Build a graph dropping self-loops and duplicate pairs."""
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                       dtype=np.int64).reshape(-1, 2)
        e = np.sort(e, axis=1)
        e = e[e[:, 0] != e[:, 1]]
        e = np.unique(e, axis=0) if e.size else e
        return cls(n, e, labels)

    @property
    def edge_count(self):
        return len(self.edges)

    @property
    def m(self):
        return len(self.edges)

    def degrees(self):
        return self._deg

    def neighbors(self, i):
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def adjacency_sets(self):
        return [set(self.neighbors(i).tolist()) for i in range(self.n)]

    def edge_set(self):
        return {(int(u), int(v)) for u, v in self.edges}

    def has_edge(self, u, v):
        nb = self.neighbors(u)
        k = np.searchsorted(nb, v)
        return bool(k < len(nb) and nb[k] == v)

    def adjacency_matrix(self, dtype=float):
        """Dense symmetric 0/1 matrix."""
        a = np.zeros((self.n, self.n), dtype=dtype)
        if self.m:
            a[self.edges[:, 0], self.edges[:, 1]] = 1
            a[self.edges[:, 1], self.edges[:, 0]] = 1
        return a

    def csr(self):
        data = np.ones(len(self.indices))
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def relabel(self, perm):
        """Return the graph with node ``i`` renamed ``perm[i]``."""
        perm = np.asarray(perm, dtype=np.int64)
        return Graph(self.n, perm[self.edges] if self.m else self.edges)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((self.n, self.edges.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _parse_header(line):
    body = line[1:].strip().replace(" ", "")
    if body.upper().startswith("N="):
        try:
            return int(body[2:])
        except ValueError:
            return None
    return None


def read_edge_list(stream):
    """Parse a whitespace-separated edge list.

    Lines starting with ``#`` are comments, except a ``# N=<n>`` header
    which fixes the node count and means node ids are the integers
    ``0..n-1``.  Without a header, arbitrary tokens are accepted and
    remapped to dense indices (numerically sorted when every token is an
    integer, first-appearance order otherwise).  Extra columns such as
    weights are ignored.

    Returns the graph; ``self_loops_dropped`` and ``duplicates_dropped``
    counts are logged.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    header_n = None
    pairs = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#") or line.startswith("%"):
            if header_n is None and line.startswith("#"):
                header_n = _parse_header(line)
            continue
        tok = line.split()
        if len(tok) < 2:
            raise EdgeListError(f"expected two node ids, got {line!r}", lineno)
        pairs.append((tok[0], tok[1], lineno))

    if not pairs and header_n is None:
        raise EmptyGraphError("edge list contains no edges")

    if header_n is not None:
        n = header_n
        raw_edges = []
        for a, b, lineno in pairs:
            try:
                u, v = int(a), int(b)
            except ValueError:
                raise EdgeListError("node ids must be integers when '# N=' is given", lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise EdgeListError(f"node id outside 0..{n - 1}", lineno)
            raw_edges.append((u, v))
        labels = None
    else:
        tokens = []
        seen = {}
        for a, b, _ in pairs:
            for t in (a, b):
                if t not in seen:
                    seen[t] = len(seen)
                    tokens.append(t)
        try:
            as_int = [int(t) for t in tokens]
            order = sorted(range(len(tokens)), key=lambda i: as_int[i])
            labels = [as_int[i] for i in order]
        except ValueError:
            order = list(range(len(tokens)))
            labels = list(tokens)
        index = {tokens[i]: k for k, i in enumerate(order)}
        n = len(tokens)
        raw_edges = [(index[a], index[b]) for a, b, _ in pairs]

    loops = sum(1 for u, v in raw_edges if u == v)
    g = Graph.from_edges(n, raw_edges, labels)
    dupes = len(raw_edges) - loops - g.m
    if loops:
        log.warning("dropped %d self-loop(s)", loops)
    if dupes:
        log.info("dropped %d duplicate edge(s)", dupes)
    return g


def write_edge_list(g, stream):
    """Write ``g`` with a ``# N=<n>`` header and one ``u v`` line per edge."""
    stream.write(f"# N={g.n}\n")
    for u, v in g.edges:
        stream.write(f"{u} {v}\n")


def load_graph(path):
    with open(path, encoding="utf-8") as fh:
        return read_edge_list(fh)


def save_graph(g, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_edge_list(g, fh)


def bfs_distances(g, source):
    """Hop distances from ``source``; unreachable nodes get ``UNREACHABLE``."""
    if not 0 <= source < g.n:
        raise ParameterError("source out of range")
    dist = np.full(g.n, UNREACHABLE, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    indptr, indices = g.indptr, g.indices
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in indices[indptr[u]:indptr[u + 1]]:
            if dist[v] == UNREACHABLE:
                dist[v] = du
                queue.append(v)
    return dist


def all_pairs_distances(g):
    """Dense ``(n, n)`` hop-distance matrix with ``UNREACHABLE`` sentinels."""
    if g.n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    d = csgraph.shortest_path(g.csr(), method="D", directed=False, unweighted=True)
    out = np.full(d.shape, UNREACHABLE, dtype=np.int64)
    finite = np.isfinite(d)
    out[finite] = d[finite].astype(np.int64)
    return out


def complement(g):
    """Graph on the same nodes whose edges are exactly the non-edges of ``g``."""
    if g.n < 1:
        raise ParameterError("complement needs at least one node")
    a = g.adjacency_matrix(dtype=bool)
    iu, ju = np.triu_indices(g.n, k=1)
    keep = ~a[iu, ju]
    return Graph(g.n, np.column_stack([iu[keep], ju[keep]]))
