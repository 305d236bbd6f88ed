"""Experiment drivers behind the command-line interface.

Each driver is a pure function of its inputs and a master seed.  Graph
realizations, null-model draws, perturbations and embeddings all take
seeds from :func:`netcompare.seeding.derive_seed` keyed by task indices,
so reruns give identical numbers regardless of evaluation order.

Pairwise sweeps compute one profile per (graph, realization) and reuse it
for every pair it takes part in, so emitted matrices are exactly
symmetric.  The diagonal compares realization ``r`` of a grid point with
realization ``r + 1`` (an independent graph and embedding), which shows the
noise floor instead of a trivial zero.
"""

import csv
import io
import json
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import stats as sps

from .dissimilarity import MeasureParams, compare_profiles, graph_profile
from .errors import ParameterError
from .generators import GeneratorSpec, barabasi_albert, generate, k_regular_ring, perturb, rewire_fraction
from .graph import Graph
from .metrics import best_modularity, graph_stats, pearson
from .nullmodels import DkOrder, randomize
from .seeding import derive_seed

__all__ = [
    "SweepResult",
    "CurveResult",
    "GraphFactory",
    "spec_factory",
    "ws_grid",
    "ba_grid",
    "four_models",
    "twelve_node_pair",
    "sweep",
    "nullmodel_curves",
    "perturb_curve",
    "graph_record",
    "pairwise_records",
    "correlation_report",
    "spearman",
    "format_float",
    "dump_json",
]


def format_float(x):
    """17 significant digits: enough for every double to parse back exactly."""
    return format(float(x), ".17g")


@dataclass
class SweepResult:
    """Pairwise dissimilarity matrix over labelled graph ensembles.

    ``values[i, j, r]`` is realization ``r`` of the comparison between
    ensembles ``i`` and ``j``; ``mean`` and ``std`` reduce over ``r``.
    """

    labels: list
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def mean(self):
        return self.values.mean(axis=2)

    @property
    def std(self):
        return self.values.std(axis=2)

    def matrix_csv(self, which="mean"):
        mat = self.mean if which == "mean" else self.std
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow([""] + [str(x) for x in self.labels])
        for label, row in zip(self.labels, mat):
            w.writerow([str(label)] + [format_float(v) for v in row])
        return out.getvalue()

    def to_dict(self):
        return {
            "labels": list(self.labels),
            "mean": self.mean.tolist(),
            "std": self.std.tolist(),
            "meta": self.meta,
        }


@dataclass
class CurveResult:
    """Named columns of equal length indexed by a parameter axis."""

    axis_name: str
    axis: list
    columns: dict
    meta: dict = field(default_factory=dict)

    def to_csv(self):
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        names = list(self.columns)
        w.writerow([self.axis_name] + names)
        for i, x in enumerate(self.axis):
            w.writerow([format_float(x)] + [format_float(self.columns[n][i]) for n in names])
        return out.getvalue()

    def to_dict(self):
        return {
            "axis_name": self.axis_name,
            "axis": list(self.axis),
            "columns": {k: list(map(float, v)) for k, v in self.columns.items()},
            "meta": self.meta,
        }


@dataclass(frozen=True)
class GraphFactory:
    """A labelled graph ensemble: ``build(seed)`` returns one realization."""

    label: str
    build: object


def spec_factory(label, spec):
    return GraphFactory(label, lambda s: generate(replace(spec, seed=s)))


def ws_grid(ps, N=500, k=10):
    return [spec_factory(format(p, "g"), GeneratorSpec("WS", N, k=k, p=p)) for p in ps]


def ba_grid(ms, N=500):
    return [spec_factory(str(m), GeneratorSpec("BA", N, m=m)) for m in ms]


def four_models(N=500, k=10, m=None):
    """K-regular ring, the ring with 1% and 10% of edges rewired, and BA with
    the ring's mean degree."""
    m = k // 2 if m is None else m
    return [
        GraphFactory("Kreg", lambda s: k_regular_ring(N, k)),
        GraphFactory("WSL", lambda s: rewire_fraction(k_regular_ring(N, k), 0.01, s)),
        GraphFactory("WSH", lambda s: rewire_fraction(k_regular_ring(N, k), 0.10, s)),
        GraphFactory("BA", lambda s: barabasi_albert(N, m, s)),
    ]


def twelve_node_pair():
    """Two 12-node, 12-edge graphs: a connected one and one with an isolated node.

    ``g1`` is the 12-cycle.  ``g2`` keeps node 11 isolated and spends its
    12 edges on an 11-cycle over nodes 0..10 plus the chord (0, 5).
    """
    g1 = Graph(12, [(i, (i + 1) % 12) for i in range(12)])
    g2 = Graph(12, [(i, (i + 1) % 11) for i in range(11)] + [(0, 5)])
    return g1, g2


def _check_realizations(realizations):
    if realizations < 1:
        raise ParameterError("realizations must be >= 1")


def sweep(factories, params, realizations=10, seed=0):
    """Pairwise comparison of every ensemble against every other.

    Realization ``r`` of ensemble ``i`` is built from
    ``derive_seed(seed, "graph", i, r)`` and embedded with seeds keyed by
    ``(derive_seed(seed, "embed", i), r)``.
    """
    if not factories:
        raise ParameterError("sweep grid is empty")
    _check_realizations(realizations)
    n = len(factories)
    # a single realization still needs a second one for the diagonal
    depth = max(realizations, 2)
    cache = {}

    def profile(i, r):
        if (i, r) not in cache:
            g = factories[i].build(derive_seed(seed, "graph", i, r))
            cache[i, r] = graph_profile(g, params, derive_seed(seed, "embed", i), r, 0)
        return cache[i, r]

    values = np.zeros((n, n, realizations))
    for r in range(realizations):
        for i in range(n):
            values[i, i, r] = compare_profiles(profile(i, r), profile(i, (r + 1) % depth), params)[0]
            for j in range(i + 1, n):
                v = compare_profiles(profile(i, r), profile(j, r), params)[0]
                values[i, j, r] = values[j, i, r] = v
    meta = {"params": params.describe(), "realizations": realizations, "seed": seed}
    return SweepResult([f.label for f in factories], values, meta)


def nullmodel_curves(g, params, lambdas=(0.0, 0.25, 0.5, 0.75, 1.0), orders=(1.0, 2.0, 2.5),
                     realizations=20, seed=0, swap_budget=None, anneal_steps=None, sink=None):
    """Mean and std of ``D_M(g, dk(g))`` per lambda and dk order.

    Realization ``r`` draws one randomization per order and embeds ``g``
    and every randomized graph once; all lambdas reuse those embeddings.
    Returns the curves plus per-realization values
    ``values[order][r, lambda_index]``.  ``sink(order, r, graph, report)``,
    when given, receives every randomized graph.
    """
    if not orders:
        raise ParameterError("no null-model orders given")
    if not lambdas:
        raise ParameterError("lambda grid is empty")
    _check_realizations(realizations)
    params = replace(params, measure="dm")
    cfgs = [DkOrder(o, swap_budget, anneal_steps) for o in orders]
    values = {c.order: np.zeros((realizations, len(lambdas))) for c in cfgs}
    reports = {c.order: [] for c in cfgs}
    for r in range(realizations):
        base = graph_profile(g, params, seed, r, 0)
        for c in cfgs:
            h, rep = randomize(g, c, derive_seed(seed, "dk", c.order, r))
            reports[c.order].append(rep.to_dict())
            if sink is not None:
                sink(c.order, r, h, rep)
            prof = graph_profile(h, params, seed, r, 1)
            for li, lam in enumerate(lambdas):
                values[c.order][r, li] = compare_profiles(base, prof, params, lam)[0]
    columns = {}
    for c in cfgs:
        name = f"D_M(Dk{c.order:.1f})"
        columns[name] = values[c.order].mean(axis=0)
    for c in cfgs:
        columns[f"std(Dk{c.order:.1f})"] = values[c.order].std(axis=0)
    meta = {"params": params.describe(), "realizations": realizations, "seed": seed,
            "reports": reports}
    return CurveResult("lambda", list(lambdas), columns, meta), values


def perturb_curve(g, fs, params, realizations=10, seed=0):
    """Dissimilarity between ``g`` and edge-perturbed copies per fraction ``f``.

    ``g`` is profiled once per realization; each perturbed copy gets its own
    perturbation seed and embedding seeds.
    """
    if not len(fs):
        raise ParameterError("f grid is empty")
    _check_realizations(realizations)
    fs = [float(f) for f in fs]
    for f in fs:
        if not -1.0 <= f <= 1.0:
            raise ParameterError("perturbation fractions must lie in [-1, 1]")
    values = np.zeros((len(fs), realizations))
    edges = np.zeros((len(fs), realizations), dtype=np.int64)
    base = {}
    for r in range(realizations):
        base[r] = graph_profile(g, params, seed, r, 0)
        for i, f in enumerate(fs):
            h = perturb(g, f, derive_seed(seed, "perturb", i, r))
            edges[i, r] = h.m
            prof = graph_profile(h, params, derive_seed(seed, "perturbed", i), r, 1)
            values[i, r] = compare_profiles(base[r], prof, params)[0]
    columns = {
        "edges": edges.mean(axis=1),
        "mean": values.mean(axis=1),
        "std": values.std(axis=1),
    }
    meta = {"params": params.describe(), "realizations": realizations, "seed": seed}
    return CurveResult("f", fs, columns, meta), values


def graph_record(g, seed=0):
    """Table-style statistics plus the best modularity found."""
    rec = graph_stats(g).to_dict()
    rec["modularity"] = best_modularity(g, seed=seed)[1] if g.m else 0.0
    return rec


def pairwise_records(graphs, realizations=10, seed=0, dne_params=None):
    """D_NE and D_SP for every unordered pair of named graphs."""
    names = list(graphs)
    if len(names) < 2:
        raise ParameterError("need at least two graphs")
    dne_params = dne_params or MeasureParams("dne")
    dsp_params = MeasureParams("dsp")
    factories = [GraphFactory(n, (lambda s, g=graphs[n]: g)) for n in names]
    dne = sweep(factories, dne_params, realizations, seed).mean
    dsp_prof = [graph_profile(graphs[n], dsp_params) for n in names]
    pairs = []
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            pairs.append({
                "a": names[i],
                "b": names[j],
                "dne": float(dne[i, j]),
                "dsp": float(compare_profiles(dsp_prof[i], dsp_prof[j], dsp_params)[0]),
            })
    return pairs


_DELTAS = (("avl", "average_path_length"), ("ld", "link_density"), ("q", "modularity"))


def correlation_report(pairs, stats):
    """Pearson r and p between D_NE and D_SP, |dAvl|, |dLd| and |dQ| over pairs.

    ``pairs`` holds dicts with keys ``a``, ``b``, ``dne`` and ``dsp``;
    ``stats`` maps graph names to :func:`graph_record` dictionaries.
    """
    if len(pairs) < 3:
        raise ParameterError("correlation needs at least 3 pairs")
    dne = [p["dne"] for p in pairs]
    series = {"dsp": [p["dsp"] for p in pairs]}
    for short, key in _DELTAS:
        series[short] = [abs(stats[p["a"]][key] - stats[p["b"]][key]) for p in pairs]
    report = {"pairs": len(pairs)}
    for name, ys in series.items():
        try:
            r, p = pearson(dne, ys)
        except ParameterError:
            # a constant column has no defined correlation
            r, p = None, None
        report[name] = {"r": r, "p": p}
    return report


def spearman(x, y):
    return float(sps.spearmanr(x, y).statistic)


def dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False)
