import math

import numpy as np
import pytest

from iltmoments.combinatorics import REFERENCE_MATRICES
from iltmoments.gammafn import (
    GammaQuery,
    gamma_f1_recurrence,
    gamma_f2_recurrence,
    gamma_value,
    radial_degree,
)
from iltmoments.multigraph import MultiGraph, exact_gamma, graph_from_matrix
from iltmoments.specfun import zeta3

N = 300_000


def within(est, target, k=4.0):
    return abs(est.value - target) <= k * est.error


@pytest.mark.parametrize("method", ["simplex-mc", "sector-mc", "exact-tree-count"])
def test_gamma_at_one_is_exact(class_graphs, method):
    for G in class_graphs.values():
        est = gamma_value(GammaQuery(G, 1, method), 1000, 0)
        assert est.value == 1.0 and est.error == 0.0


def test_query_validation(class_graphs):
    with pytest.raises(ValueError):
        GammaQuery(class_graphs["f1"], -0.5)
    with pytest.raises(ValueError):
        GammaQuery(class_graphs["f1"], 1, "trapezoid")
    with pytest.raises(ValueError):
        gamma_value(GammaQuery(class_graphs["f1"], 1.5, "exact-tree-count"))


def test_radial_degree_positive_for_n_nonnegative(class_graphs):
    # E - L = V - 1 > 0, so no pole is reachable for n >= 0
    for G in class_graphs.values():
        assert radial_degree(G, 0) == G.vertex_count - 1


@pytest.mark.parametrize("method", ["simplex-mc", "sector-mc"])
@pytest.mark.parametrize("label", ["f1", "f2", "f4", "f6"])
def test_gamma_two_is_tree_count(class_graphs, method, label):
    G = class_graphs[label]
    est = gamma_value(GammaQuery(G, 2, method), N, 4)
    assert within(est, float(exact_gamma(G, 2)))


def test_gamma_three_matches_exact(class_graphs):
    est = gamma_value(GammaQuery(class_graphs["f1"], 3, "simplex-mc"), N, 8)
    assert within(est, 80.0)
    exact = gamma_value(GammaQuery(class_graphs["f2"], 3, "exact-tree-count"))
    assert exact.value == 1008.0


def test_f1_at_zero_both_routes(class_graphs):
    G = class_graphs["f1"]
    sector = gamma_value(GammaQuery(G, 0, "sector-mc"), 2_000_000, 1)
    simplex = gamma_value(GammaQuery(G, 0, "simplex-mc"), 2_000_000, 1)
    assert within(sector, 7 * zeta3())
    # the simplex estimator is heavy tailed at n = 0 and switches estimator
    assert simplex.estimator == "median-of-means"
    combined = math.hypot(sector.error, simplex.error)
    assert abs(sector.value - simplex.value) <= 4 * combined


def test_f2_at_zero(class_graphs):
    est = gamma_value(GammaQuery(class_graphs["f2"], 0), 2_000_000, 2)
    assert within(est, 3 * zeta3())


def test_fractional_n(class_graphs):
    G = class_graphs["f1"]
    a = gamma_value(GammaQuery(G, 1.5, "simplex-mc"), N, 3)
    b = gamma_value(GammaQuery(G, 1.5, "sector-mc"), N, 3)
    assert 1.0 < a.value < 4.0
    assert abs(a.value - b.value) <= 4 * math.hypot(a.error, b.error)


def test_recurrence_examples():
    assert gamma_f1_recurrence(0, 123.0) == 1.0
    assert gamma_f1_recurrence(1, 1.0) == pytest.approx(4.0, abs=1e-14)
    assert gamma_f1_recurrence(2, 4.0) == pytest.approx(80.0, abs=1e-12)
    assert gamma_f2_recurrence(0, 1, 1) == pytest.approx(1.0, abs=1e-15)
    assert gamma_f2_recurrence(1, 1, 1) == pytest.approx(12.0, abs=1e-13)
    assert gamma_f2_recurrence(2, 12, 4) == pytest.approx(1008.0, rel=1e-14)


def test_recurrences_against_exact(class_graphs):
    g1 = [float(exact_gamma(class_graphs["f1"], n)) for n in (1, 2, 3, 4)]
    g2 = [float(exact_gamma(class_graphs["f2"], n)) for n in (1, 2, 3, 4)]
    for n in (1, 2, 3):
        assert gamma_f1_recurrence(n, g1[n - 1]) == pytest.approx(g1[n], rel=1e-13)
        assert gamma_f2_recurrence(n, g2[n - 1], g1[n - 1]) == pytest.approx(g2[n], rel=1e-13)


def test_recurrence_at_zero_from_mc(class_graphs):
    g0 = gamma_value(GammaQuery(class_graphs["f1"], 0), 1_000_000, 6)
    # the n = 0 coefficient vanishes, so any Gamma(0) gives Gamma(1)
    assert gamma_f1_recurrence(0, g0.value) == 1.0


def test_edge_relabel_invariance(class_graphs):
    G = class_graphs["f4"]
    perm = list(np.random.default_rng(0).permutation(G.edge_count))
    H = G.relabel(vertex_perm=[2, 0, 3, 1], edge_perm=perm)
    a = gamma_value(GammaQuery(G, 0), N, 10)
    b = gamma_value(GammaQuery(H, 0), N, 11)
    assert abs(a.value - b.value) <= 4 * math.hypot(a.error, b.error)


def test_transpose_equivalent_graphs(class_graphs):
    a = gamma_value(GammaQuery(class_graphs["f5"], 0), N, 20)
    b = gamma_value(GammaQuery(class_graphs["f7"], 0), N, 21)
    assert abs(a.value - b.value) <= 4 * math.hypot(a.error, b.error)


def test_seed_determinism(class_graphs):
    q = GammaQuery(class_graphs["f2"], 0)
    assert gamma_value(q, 100_000, 5) == gamma_value(q, 100_000, 5)
    assert gamma_value(q, 100_000, 5, threads=3) == gamma_value(q, 100_000, 5)


def test_small_graph():
    # two vertices, two parallel edges: P = a1 + a2, Gamma(0) = 1
    G = MultiGraph(2, ((0, 1), (0, 1)))
    est = gamma_value(GammaQuery(G, 0), N, 1)
    assert within(est, 1.0)


def test_graph_from_each_class_at_zero_positive(class_graphs):
    for G in class_graphs.values():
        assert gamma_value(GammaQuery(G, 0), 20_000, 0).value > 0
    assert graph_from_matrix(REFERENCE_MATRICES["f1"]).edge_count == 4
