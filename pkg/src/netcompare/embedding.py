"""DeepWalk node embeddings: truncated random walks fed to SkipGram with
negative sampling.

Training runs in float32 by default, as word2vec does; pass
``dtype=np.float64`` in :class:`SkipGramConfig` for full precision.
Returned embeddings are always float64.
"""

import struct
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import pdist, squareform

from . import _kernels
from .errors import InputError, NumericError, ParameterError

__all__ = [
    "WalkConfig",
    "SkipGramConfig",
    "Walks",
    "DistanceMatrix",
    "generate_walks",
    "unigram_table",
    "init_vectors",
    "train_skipgram",
    "skipgram_loss",
    "distance_matrix",
    "deepwalk",
    "save_embedding_text",
    "load_embedding_text",
    "save_embedding_binary",
    "load_embedding_binary",
]


@dataclass(frozen=True)
class WalkConfig:
    walks_per_node: int = 10
    walk_length: int = 60
    seed: int = 0

    def __post_init__(self):
        if self.walks_per_node < 1 or self.walk_length < 1:
            raise ParameterError("walks_per_node and walk_length must be >= 1")


@dataclass(frozen=True)
class SkipGramConfig:
    dimension: int = 128
    window: int = 8
    negatives: int = 5
    epochs: int = 5
    initial_lr: float = 0.025
    min_lr: float = 1e-4
    seed: int = 0
    dtype: type = field(default=np.float32)
    deterministic: bool = True

    def __post_init__(self):
        if self.dimension < 1 or self.window < 1 or self.negatives < 1:
            raise ParameterError("dimension, window and negatives must be >= 1")
        if self.epochs < 0:
            raise ParameterError("epochs must be non-negative")
        if not self.initial_lr > self.min_lr > 0:
            raise ParameterError("need initial_lr > min_lr > 0")


@dataclass(frozen=True)
class Walks:
    """Walk corpus: ``walks[r, :lengths[r]]`` is walk ``r``; padding is -1."""

    walks: np.ndarray
    lengths: np.ndarray
    n_nodes: int

    def __len__(self):
        return len(self.walks)

    def __iter__(self):
        for row, n in zip(self.walks, self.lengths):
            yield row[:n]

    @classmethod
    def from_lists(cls, walks, n_nodes=None):
        walks = [list(map(int, w)) for w in walks]
        if not walks or not any(walks):
            raise InputError("empty walk corpus")
        width = max(len(w) for w in walks)
        arr = np.full((len(walks), width), -1, dtype=np.int64)
        for r, w in enumerate(walks):
            arr[r, :len(w)] = w
        lengths = np.array([len(w) for w in walks], dtype=np.int64)
        if n_nodes is None:
            n_nodes = int(arr.max()) + 1
        return cls(arr, lengths, int(n_nodes))

    def frequencies(self):
        tokens = self.walks[self.walks >= 0]
        return np.bincount(tokens, minlength=self.n_nodes)


@dataclass(frozen=True)
class DistanceMatrix:
    B: np.ndarray
    b_max: float
    b_min: float = 0.0


def generate_walks(g, cfg=WalkConfig()):
    """``walks_per_node`` passes; each pass starts one walk from every node
    in a freshly shuffled order."""
    if g.n < 1:
        raise ParameterError("cannot walk on an empty graph")
    rng = np.random.default_rng(cfg.seed)
    starts = np.concatenate([rng.permutation(g.n) for _ in range(cfg.walks_per_node)])
    walk_seed = int(rng.integers(2**63))
    walks, lengths = _kernels.random_walks(g.indptr, g.indices, starts.astype(np.int64),
                                           cfg.walk_length, walk_seed)
    return Walks(walks, lengths, g.n)


def unigram_table(counts, power=0.75, size=None):
    """Lookup table for negative draws proportional to ``count**power``."""
    counts = np.asarray(counts, dtype=float)
    weights = counts ** power
    if weights.sum() <= 0:
        raise InputError("no tokens to sample negatives from")
    if size is None:
        size = max(100_000, 100 * len(counts))
    slots = np.floor(weights / weights.sum() * size).astype(np.int64)
    # hand leftover slots to the largest remainders so every token with
    # nonzero weight is drawable
    rem = weights / weights.sum() * size - slots
    short = size - slots.sum()
    if short > 0:
        slots[np.argsort(-rem, kind="stable")[:short]] += 1
    slots[(weights > 0) & (slots == 0)] = 1
    return np.repeat(np.arange(len(counts), dtype=np.int64), slots)


def init_vectors(n, cfg):
    """Center vectors uniform in ``[-0.5/d, 0.5/d]``, context vectors zero."""
    rng = np.random.default_rng(cfg.seed)
    d = cfg.dimension
    vin = ((rng.random((n, d)) - 0.5) / d).astype(cfg.dtype)
    vout = np.zeros((n, d), dtype=cfg.dtype)
    return vin, vout


def _as_walks(walks, n_nodes):
    if isinstance(walks, Walks):
        if n_nodes is not None and n_nodes != walks.n_nodes:
            return Walks(walks.walks, walks.lengths, n_nodes)
        return walks
    return Walks.from_lists(walks, n_nodes)


def train_skipgram(walks, cfg=SkipGramConfig(), n_nodes=None, return_context=False):
    """Train SkipGram with negative sampling and return the center vectors.

    Every ``(center, context)`` pair within ``window`` positions of each
    other in a walk is one positive example; ``negatives`` noise nodes per
    pair are drawn from the corpus unigram distribution raised to 3/4.
    """
    corpus = _as_walks(walks, n_nodes)
    if len(corpus) == 0 or corpus.lengths.sum() == 0:
        raise InputError("empty walk corpus")
    vin, vout = init_vectors(corpus.n_nodes, cfg)
    if cfg.epochs > 0:
        table = unigram_table(corpus.frequencies())
        total = _kernels.count_pairs(corpus.lengths, cfg.window) * cfg.epochs
        if total > 0:
            seed = int(np.random.default_rng(cfg.seed).integers(2**63, size=2)[1])
            args = (corpus.walks, corpus.lengths, vin, vout, table, cfg.window,
                    cfg.negatives, cfg.epochs, cfg.initial_lr, cfg.min_lr, total, seed)
            if cfg.deterministic:
                _kernels.train_sequential(*args)
            else:
                _kernels.train_hogwild(*args, 64)
    if not (np.all(np.isfinite(vin)) and np.all(np.isfinite(vout))):
        raise NumericError("SkipGram training diverged")
    emb = vin.astype(np.float64)
    if return_context:
        return emb, vout.astype(np.float64)
    return emb


def skipgram_loss(walks, vin, vout, window, negatives, seed, n_nodes=None):
    """Negative-sampling loss of a corpus with negatives frozen by ``seed``."""
    corpus = _as_walks(walks, n_nodes)
    table = unigram_table(corpus.frequencies())
    return float(_kernels.negative_sampling_loss(corpus.walks, corpus.lengths,
                                                 np.ascontiguousarray(vin),
                                                 np.ascontiguousarray(vout),
                                                 table, window, negatives, seed))


def distance_matrix(emb):
    """Pairwise Euclidean distances between embedding rows."""
    emb = np.asarray(emb, dtype=float)
    if emb.ndim != 2:
        raise ParameterError("embedding must be a 2-d array")
    if not np.all(np.isfinite(emb)):
        raise NumericError("embedding contains non-finite values")
    n = emb.shape[0]
    if n < 2:
        b = np.zeros((n, n))
    else:
        b = squareform(pdist(emb, metric="euclidean"))
    return DistanceMatrix(b, float(b.max()) if b.size else 0.0, 0.0)


def deepwalk(g, wcfg=WalkConfig(), scfg=SkipGramConfig()):
    """Embed every node of ``g`` (isolated nodes included)."""
    walks = generate_walks(g, wcfg)
    return train_skipgram(walks, scfg, n_nodes=g.n)


def save_embedding_text(emb, stream):
    """Header ``N d`` then one row per node at full precision."""
    emb = np.asarray(emb, dtype=float)
    stream.write(f"{emb.shape[0]} {emb.shape[1]}\n")
    for row in emb:
        stream.write(" ".join(repr(float(x)) for x in row))
        stream.write("\n")


def load_embedding_text(stream):
    header = stream.readline().split()
    if len(header) != 2:
        raise InputError("embedding header must be 'N d'")
    n, d = int(header[0]), int(header[1])
    emb = np.zeros((n, d))
    for i in range(n):
        vals = stream.readline().split()
        if len(vals) != d:
            raise InputError(f"embedding row {i} has {len(vals)} values, expected {d}")
        emb[i] = [float(v) for v in vals]
    return emb


_BIN_MAGIC = b"NCEMB001"


def save_embedding_binary(emb, stream):
    """Magic, two little-endian uint64 (N, d), then N*d little-endian float64."""
    emb = np.ascontiguousarray(emb, dtype="<f8")
    stream.write(_BIN_MAGIC)
    stream.write(struct.pack("<QQ", *emb.shape))
    stream.write(emb.tobytes())


def load_embedding_binary(stream):
    if stream.read(len(_BIN_MAGIC)) != _BIN_MAGIC:
        raise InputError("not a binary embedding file")
    n, d = struct.unpack("<QQ", stream.read(16))
    data = stream.read(8 * n * d)
    if len(data) != 8 * n * d:
        raise InputError("truncated embedding file")
    return np.frombuffer(data, dtype="<f8").reshape(n, d).astype(np.float64)
