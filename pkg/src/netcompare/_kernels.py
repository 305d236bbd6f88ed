"""Compiled inner loops for random walks and SkipGram training.

Random numbers come from the 48-bit word2vec linear congruential
generator so that results are bit-identical across platforms.  The
training kernels are generic over float32/float64 embedding arrays.
"""

import numpy as np
from numba import njit, prange

_FAST = {"reassoc", "contract", "nsz", "arcp"}

_LCG_A = np.uint64(25214903917)
_LCG_C = np.uint64(11)


@njit(cache=True, inline="always")
def _lcg(state):
    return state * _LCG_A + _LCG_C


@njit(cache=True)
def splitmix64(x):
    x = np.uint64(x) + np.uint64(0x9E3779B97F4A7C15)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


@njit(cache=True)
def random_walks(indptr, indices, starts, walk_length, seed):
    """One truncated uniform walk per entry of ``starts``.

    Walk ``r`` draws from its own generator seeded by ``(seed, r)``, so the
    output does not depend on evaluation order.  Rows are padded with -1
    after a walk stops at a node without neighbours.
    """
    nw = starts.shape[0]
    walks = np.full((nw, walk_length), -1, dtype=np.int64)
    lengths = np.zeros(nw, dtype=np.int64)
    for r in range(nw):
        state = splitmix64(np.uint64(seed) ^ splitmix64(np.uint64(r)))
        u = starts[r]
        walks[r, 0] = u
        n = 1
        while n < walk_length:
            lo = indptr[u]
            deg = indptr[u + 1] - lo
            if deg == 0:
                break
            state = _lcg(state)
            u = indices[lo + np.int64((state >> np.uint64(16)) % np.uint64(deg))]
            walks[r, n] = u
            n += 1
        lengths[r] = n
    return walks, lengths


@njit(cache=True)
def count_pairs(lengths, window):
    total = 0
    for r in range(lengths.shape[0]):
        n = lengths[r]
        for t in range(n):
            total += min(t, window) + min(n - 1 - t, window)
    return total


@njit(cache=True, fastmath=_FAST, inline="always")
def sgd_pair_step(vin, vout, center, context, negs, nneg, lr, err, hid):
    """One negative-sampling update for a (center, context) pair.

    Ascends ``log s(u_ctx . v_c) + sum_neg log s(-u_neg . v_c)``: each output
    vector moves by ``lr * (label - s(f)) * v_c`` and the center vector by the
    accumulated ``lr * sum (label - s(f)) * u_t``, all gradients taken at the
    pre-step parameters.
    """
    d = vin.shape[1]
    ft = vin.dtype.type
    for z in range(d):
        hid[z] = vin[center, z]
        err[z] = 0.0
    for k in range(nneg + 1):
        if k == 0:
            tgt = context
            label = 1.0
        else:
            tgt = negs[k - 1]
            label = 0.0
        f = ft(0.0)
        for z in range(d):
            f += hid[z] * vout[tgt, z]
        g = ft((label - 1.0 / (1.0 + np.exp(-f))) * lr)
        for z in range(d):
            err[z] += g * vout[tgt, z]
        for z in range(d):
            vout[tgt, z] += g * hid[z]
    for z in range(d):
        vin[center, z] += err[z]


@njit(cache=True, inline="always")
def _draw_negatives(state, table, context, negative, negs):
    nt = np.uint64(table.shape[0])
    nneg = 0
    for _ in range(negative):
        state = _lcg(state)
        t = table[np.int64((state >> np.uint64(16)) % nt)]
        if t == context:
            continue
        negs[nneg] = t
        nneg += 1
    return state, nneg


@njit(cache=True, fastmath=_FAST)
def train_sequential(walks, lengths, vin, vout, table, window, negative,
                     epochs, lr0, lr_min, total, seed):
    """Deterministic single-threaded SkipGram training.

    Pairs are visited walk by walk, position by position, offset by offset.
    The learning rate decays linearly from ``lr0`` to ``lr_min`` over the
    ``total`` pairs of all epochs.
    """
    d = vin.shape[1]
    err = np.zeros(d, dtype=vin.dtype)
    hid = np.zeros(d, dtype=vin.dtype)
    negs = np.zeros(max(negative, 1), dtype=np.int64)
    state = splitmix64(np.uint64(seed))
    done = 0
    for _ in range(epochs):
        for r in range(walks.shape[0]):
            n = lengths[r]
            for t in range(n):
                c = walks[r, t]
                lo = max(0, t - window)
                hi = min(n, t + window + 1)
                for j in range(lo, hi):
                    if j == t:
                        continue
                    lr = lr0 - (lr0 - lr_min) * done / total
                    done += 1
                    o = walks[r, j]
                    state, nneg = _draw_negatives(state, table, o, negative, negs)
                    sgd_pair_step(vin, vout, c, o, negs, nneg, lr, err, hid)
    return done


@njit(cache=True, parallel=True, fastmath=_FAST)
def train_hogwild(walks, lengths, vin, vout, table, window, negative,
                  epochs, lr0, lr_min, total, seed, chunks):
    """Lock-free training over walk chunks; results vary with scheduling."""
    d = vin.shape[1]
    nw = walks.shape[0]
    per_epoch = total // max(epochs, 1)
    for ep in range(epochs):
        for ch in prange(chunks):
            err = np.zeros(d, dtype=vin.dtype)
            hid = np.zeros(d, dtype=vin.dtype)
            negs = np.zeros(max(negative, 1), dtype=np.int64)
            state = splitmix64(np.uint64(seed) ^ splitmix64(np.uint64(ep * chunks + ch)))
            local = 0
            for r in range(ch, nw, chunks):
                n = lengths[r]
                for t in range(n):
                    c = walks[r, t]
                    lo = max(0, t - window)
                    hi = min(n, t + window + 1)
                    for j in range(lo, hi):
                        if j == t:
                            continue
                        progress = ep * per_epoch + local * chunks
                        lr = max(lr_min, lr0 - (lr0 - lr_min) * progress / total)
                        local += 1
                        o = walks[r, j]
                        state, nneg = _draw_negatives(state, table, o, negative, negs)
                        sgd_pair_step(vin, vout, c, o, negs, nneg, lr, err, hid)
    return 0


@njit(cache=True)
def negative_sampling_loss(walks, lengths, vin, vout, table, window, negative, seed):
    """Total negative-sampling loss of a corpus with negatives fixed by ``seed``."""
    d = vin.shape[1]
    negs = np.zeros(max(negative, 1), dtype=np.int64)
    state = splitmix64(np.uint64(seed))
    loss = 0.0
    for r in range(walks.shape[0]):
        n = lengths[r]
        for t in range(n):
            c = walks[r, t]
            lo = max(0, t - window)
            hi = min(n, t + window + 1)
            for j in range(lo, hi):
                if j == t:
                    continue
                o = walks[r, j]
                state, nneg = _draw_negatives(state, table, o, negative, negs)
                for k in range(nneg + 1):
                    tgt = o if k == 0 else negs[k - 1]
                    sign = 1.0 if k == 0 else -1.0
                    f = 0.0
                    for z in range(d):
                        f += vin[c, z] * vout[tgt, z]
                    # -log sigmoid(sign * f), computed stably
                    x = sign * f
                    if x > 0:
                        loss += np.log1p(np.exp(-x))
                    else:
                        loss += -x + np.log1p(np.exp(x))
    return loss
