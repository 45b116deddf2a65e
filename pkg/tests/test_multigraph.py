from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iltmoments.errors import DisconnectedGraphError, MalformedInputError
from iltmoments.multigraph import (
    MultiGraph,
    canonical_form,
    delete_edge,
    edge_orbits,
    exact_gamma,
    gamma_equivalent,
    isomorphic,
    laplacian_tree_count,
    loop_number,
    spanning_trees,
    symanzik,
)

TREES = {"f1": 4, "f2": 12, "f3": 12, "f4": 24, "f5": 32, "f6": 36, "f7": 32, "f8": 36}
ORBITS = {
    "f1": [4], "f2": [6], "f3": [6], "f4": [2, 6],
    "f5": [8], "f6": [4, 4], "f7": [8], "f8": [4, 4],
}


def test_graph_shapes(class_graphs):
    for G in class_graphs.values():
        assert G.edge_count == 2 * G.vertex_count
        degree = [0] * G.vertex_count
        for i, j in G.edges:
            degree[i] += 1
            degree[j] += 1
        assert set(degree) == {4}


@pytest.mark.parametrize("label", list(TREES))
def test_tree_counts(class_graphs, label):
    G = class_graphs[label]
    assert len(spanning_trees(G)) == TREES[label] == laplacian_tree_count(G)


@pytest.mark.parametrize("label", list(TREES))
def test_symanzik_shape(class_graphs, label):
    G = class_graphs[label]
    P = symanzik(G)
    assert len(P) == TREES[label]
    assert P.degree == loop_number(G)
    assert P.index_array.shape == (TREES[label], loop_number(G))


def test_symanzik_evaluation_at_ones(class_graphs):
    for label, G in class_graphs.items():
        P = symanzik(G)
        assert P(np.ones(G.edge_count)) == TREES[label]


def test_symanzik_homogeneous(class_graphs):
    rng = np.random.default_rng(3)
    G = class_graphs["f6"]
    P = symanzik(G)
    a = rng.random((5, G.edge_count))
    assert np.allclose(P(2.5 * a), 2.5 ** P.degree * P(a))


@pytest.mark.parametrize("label", list(ORBITS))
def test_edge_orbits(class_graphs, label):
    sizes = sorted(len(o) for o in edge_orbits(class_graphs[label]))
    assert sizes == ORBITS[label]


def test_exact_gamma_values(class_graphs):
    assert exact_gamma(class_graphs["f1"], 1) == 1
    assert exact_gamma(class_graphs["f1"], 2) == 4
    assert exact_gamma(class_graphs["f1"], 3) == 80
    assert exact_gamma(class_graphs["f2"], 3) == 1008
    assert isinstance(exact_gamma(class_graphs["f2"], 2), Fraction)
    with pytest.raises(ValueError):
        exact_gamma(class_graphs["f1"], 0)


def test_exact_gamma_is_tree_count(class_graphs):
    for label, G in class_graphs.items():
        assert exact_gamma(G, 2) == TREES[label]


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(4)), st.permutations(range(8)))
def test_relabel_invariance(vperm, eperm):
    from iltmoments.combinatorics import REFERENCE_MATRICES
    from iltmoments.multigraph import graph_from_matrix

    G = graph_from_matrix(REFERENCE_MATRICES["f6"])
    H = G.relabel(vperm, eperm)
    assert isomorphic(G, H)
    assert canonical_form(G) == canonical_form(H)
    assert len(spanning_trees(H)) == 36
    assert exact_gamma(H, 3) == exact_gamma(G, 3)


def test_transpose_partners_isomorphic(class_graphs):
    assert isomorphic(class_graphs["f2"], class_graphs["f3"])
    assert isomorphic(class_graphs["f5"], class_graphs["f7"])
    assert isomorphic(class_graphs["f6"], class_graphs["f8"])
    assert not isomorphic(class_graphs["f5"], class_graphs["f6"])


def _diamond_with_pendant(at):
    edges = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (at, 4)]
    return MultiGraph(5, tuple(edges))


def test_gamma_equivalent_but_not_isomorphic():
    # moving a pendant edge between blocks keeps the cycle structure
    G1 = _diamond_with_pendant(1)  # degree-3 vertex
    G2 = _diamond_with_pendant(0)  # degree-2 vertex
    assert not isomorphic(G1, G2)
    assert gamma_equivalent(G1, G2)
    assert exact_gamma(G1, 3) == exact_gamma(G2, 3)


def test_not_gamma_equivalent(class_graphs):
    assert not gamma_equivalent(class_graphs["f4"], class_graphs["f5"])
    assert gamma_equivalent(class_graphs["f6"], class_graphs["f8"])


def test_edges_normalized_and_checked():
    G = MultiGraph(2, ((1, 0), (0, 1)))
    assert G.edges == ((0, 1), (0, 1))
    with pytest.raises(MalformedInputError, match="self-loop"):
        MultiGraph(2, ((0, 0), (0, 1)))
    with pytest.raises(MalformedInputError, match="range"):
        MultiGraph(2, ((0, 2),))
    with pytest.raises(DisconnectedGraphError):
        MultiGraph(4, ((0, 1), (2, 3)))


def test_delete_edge(class_graphs):
    G = class_graphs["f4"]
    H = delete_edge(G, 0)
    assert H.edge_count == 7 and loop_number(H) == 4
    bridge = MultiGraph(3, ((0, 1), (0, 1), (1, 2)))
    with pytest.raises(DisconnectedGraphError):
        delete_edge(bridge, 2)
    with pytest.raises(MalformedInputError):
        delete_edge(G, 8)


def test_tree_enumeration_limit():
    G = MultiGraph(2, ((0, 1),) * 13)
    with pytest.raises(MalformedInputError):
        spanning_trees(G)
