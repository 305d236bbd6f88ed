import numpy as np
import pytest

from netcompare.errors import ParameterError
from netcompare.generators import barabasi_albert, watts_strogatz
from netcompare.graph import Graph
from netcompare.metrics import local_clustering, triangle_counts
from netcompare.nullmodels import (
    DkOrder,
    clustering_spectrum,
    dk1_randomize,
    dk25_randomize,
    dk2_randomize,
    joint_degree_matrix,
    randomize,
    spectrum_distance,
)

from conftest import complete_graph, cycle_graph, gnp, path_graph, star_graph


def brute_jdm(g):
    deg = g.degrees()
    out = {}
    for u, v in g.edges:
        key = tuple(sorted((int(deg[u]), int(deg[v]))))
        out[key] = out.get(key, 0) + 1
    return out


def jdm_dict(j):
    return {(a, b): int(j[a, b]) for a, b in zip(*np.nonzero(j)) if a <= b}


def test_jdm_small_cases():
    assert joint_degree_matrix(complete_graph(3))[2, 2] == 3
    j = joint_degree_matrix(star_graph(3))
    assert j[1, 3] == j[3, 1] == 3


def test_jdm_matches_edge_scan():
    g = watts_strogatz(100, 4, 0.2, seed=3)
    j = joint_degree_matrix(g)
    assert np.array_equal(j, j.T)
    assert jdm_dict(j) == brute_jdm(g)
    assert np.triu(j).sum() == g.m


def test_clustering_spectrum_examples():
    assert clustering_spectrum(complete_graph(4)) == {3: 1.0}
    assert clustering_spectrum(path_graph(3)) == {1: 0.0, 2: 0.0}


def test_clustering_spectrum_oracle():
    g = gnp(50, 0.2, seed=8)
    adj = g.adjacency_sets()
    deg = g.degrees()
    per_node = []
    for v in range(g.n):
        t = sum(1 for a in adj[v] for b in adj[v] if a < b and b in adj[a])
        k = deg[v]
        per_node.append(2 * t / (k * (k - 1)) if k >= 2 else 0.0)
    per_node = np.array(per_node)
    spec = clustering_spectrum(g)
    for k, value in spec.items():
        assert abs(value - per_node[deg == k].mean()) < 1e-12
    assert set(spec) == set(deg.tolist())


@pytest.mark.parametrize("fn", [dk1_randomize, dk2_randomize, dk25_randomize])
def test_degree_sequence_preserved(fn):
    g = barabasi_albert(300, 3, seed=2)
    h = fn(g, seed=4)
    assert np.array_equal(h.degrees(), g.degrees())
    assert h.m == g.m


@pytest.mark.parametrize("fn", [dk2_randomize, dk25_randomize])
def test_jdm_preserved_exactly(fn):
    g = barabasi_albert(300, 3, seed=5)
    h = fn(g, seed=1)
    assert np.array_equal(joint_degree_matrix(h), joint_degree_matrix(g))
    assert h.edge_set() != g.edge_set()


def test_dk2_on_ws_keeps_jdm():
    g = watts_strogatz(200, 10, 0.3, seed=0)
    h = dk2_randomize(g, seed=7)
    assert brute_jdm(h) == brute_jdm(g)


def test_dk1_randomizes_clustered_graph():
    g = watts_strogatz(300, 10, 0.05, seed=1)
    h = dk1_randomize(g, seed=2)
    assert local_clustering(h).mean() < 0.5 * local_clustering(g).mean()


def test_four_cycle_stays_four_cycle():
    for s in range(10):
        h = dk1_randomize(cycle_graph(4), seed=s)
        assert sorted(h.degrees().tolist()) == [2, 2, 2, 2]
        assert h.m == 4


def test_triangle_has_no_legal_swap():
    g = complete_graph(3)
    h, rep = dk1_randomize(g, seed=0, return_report=True)
    assert h == g
    assert rep.swaps_accepted == 0


def test_star_unchanged_by_dk2():
    g = star_graph(5)
    assert dk2_randomize(g, seed=3) == g


def test_zero_budget_is_identity():
    g = watts_strogatz(100, 6, 0.2, seed=1)
    assert dk1_randomize(g, DkOrder(1.0, swap_budget=0), seed=1) == g
    assert dk2_randomize(g, DkOrder(2.0, swap_budget=0), seed=1) == g
    assert dk25_randomize(g, DkOrder(2.5, swap_budget=0, anneal_steps=0), seed=1) == g


@pytest.mark.parametrize("order", [1.0, 2.0, 2.5])
def test_deterministic(order):
    g = watts_strogatz(150, 6, 0.2, seed=2)
    a, ra = randomize(g, DkOrder(order), seed=9)
    b, rb = randomize(g, DkOrder(order), seed=9)
    assert a.edge_set() == b.edge_set()
    assert ra.to_dict() == rb.to_dict()


def test_too_few_edges():
    with pytest.raises(ParameterError):
        dk1_randomize(Graph(3, [(0, 1)]), seed=0)


def test_bad_order():
    with pytest.raises(ParameterError):
        DkOrder(3.0)


def test_tree_stays_triangle_free():
    g = barabasi_albert(200, 1, seed=3)
    h, rep = dk25_randomize(g, seed=1, return_report=True)
    assert triangle_counts(h).sum() == 0
    assert rep.spectrum_distance == 0.0


@pytest.mark.slow
def test_dk25_spectrum_within_five_percent():
    g = watts_strogatz(500, 10, 0.1, seed=1)
    target = clustering_spectrum(g)
    h, rep = dk25_randomize(g, seed=3, return_report=True)
    dist = spectrum_distance(clustering_spectrum(h), target)
    assert dist == pytest.approx(rep.spectrum_distance)
    assert dist <= 0.05 * sum(target.values())
    assert np.array_equal(joint_degree_matrix(h), joint_degree_matrix(g))


@pytest.mark.slow
def test_metabolic_scale_clustering():
    # clustered heterogeneous graph of metabolic size: BA backbone plus
    # triadic closures
    rng = np.random.default_rng(4)
    base = barabasi_albert(453, 2, seed=4)
    adj = base.adjacency_sets()
    extra = set()
    for v in range(base.n):
        nb = sorted(adj[v])
        if len(nb) >= 2:
            a, b = rng.choice(nb, size=2, replace=False)
            extra.add((min(a, b), max(a, b)))
    g = Graph.from_edges(base.n, np.vstack([base.edges, np.array(sorted(extra))]))
    c0 = local_clustering(g).mean()
    c1 = local_clustering(dk1_randomize(g, seed=1)).mean()
    c25 = local_clustering(dk25_randomize(g, seed=1)).mean()
    assert abs(c25 - c0) <= 0.10 * c0
    assert abs(c1 - c0) > 0.10 * c0
