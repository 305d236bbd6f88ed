"""Entropies and Jensen-Shannon divergences of discrete distributions.

Natural logarithms throughout unless a ``base`` is given; ``0 log 0 = 0``.
"""

import math

import numpy as np

from .errors import ParameterError

__all__ = [
    "entropy",
    "generalized_js",
    "network_js",
    "js_two",
    "pad_tail",
    "pad_front",
]

LN2 = math.log(2.0)


def entropy(p, base=None):
    p = np.asarray(p, dtype=float)
    nz = p[p > 0]
    s = float(-np.sum(nz * np.log(nz)))
    if base is not None:
        s /= math.log(base)
    return max(s, 0.0)


def generalized_js(rows):
    """Jensen-Shannon divergence of ``N`` distributions with equal weights.

    ``J = (1/N) sum_i sum_j H_i(j) log(H_i(j) / mu_j)`` with ``mu`` the row
    mean.  Lies in ``[0, log N]``.
    """
    h = np.asarray(rows, dtype=float)
    if h.ndim != 2:
        raise ParameterError("expected a 2-d array of distributions")
    n = h.shape[0]
    if n == 0:
        return 0.0
    mu = h.mean(axis=0)
    mask = h > 0
    ratio = np.ones_like(h)
    ratio[mask] = h[mask] / np.broadcast_to(mu, h.shape)[mask]
    j = float(np.sum(np.where(mask, h * np.log(ratio), 0.0)) / n)
    return max(j, 0.0)


def network_js(rows):
    """Heterogeneity of a node distribution set, ``J / log(N + 1)`` in ``[0, 1)``."""
    h = np.asarray(rows, dtype=float)
    n = h.shape[0]
    if n <= 1:
        return 0.0
    return generalized_js(h) / math.log(n + 1)


def js_two(p, q):
    """``S((p+q)/2) - (S(p) + S(q))/2``; lies in ``[0, log 2]``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ParameterError(f"length mismatch: {p.shape} vs {q.shape}")
    j = entropy(0.5 * (p + q)) - 0.5 * (entropy(p) + entropy(q))
    return min(max(j, 0.0), LN2)


def pad_tail(vectors, length=None):
    """Zero-pad 1-d vectors (or rows of 2-d arrays) at the end to a common length."""
    arrs = [np.asarray(v, dtype=float) for v in vectors]
    if length is None:
        length = max(a.shape[-1] for a in arrs)
    out = []
    for a in arrs:
        width = [(0, 0)] * (a.ndim - 1) + [(0, length - a.shape[-1])]
        out.append(np.pad(a, width))
    return out


def pad_front(vectors, length=None):
    """Zero-pad at the start, which keeps ascending sequences sorted."""
    arrs = [np.asarray(v, dtype=float) for v in vectors]
    if length is None:
        length = max(a.shape[-1] for a in arrs)
    out = []
    for a in arrs:
        width = [(0, 0)] * (a.ndim - 1) + [(length - a.shape[-1], 0)]
        out.append(np.pad(a, width))
    return out
