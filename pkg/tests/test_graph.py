import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import connected_graphs
from pairwalk.families import (
    P5w,
    X_double_star,
    Xm_blowup,
    cartesian_power,
    complete,
    complete_bipartite,
    cycle,
    family,
    family_factors,
    hypercube,
    path,
    star,
)
from pairwalk.graph import (
    Graph,
    GraphError,
    bipartition,
    cartesian_product,
    covering_radius,
    cut_edges,
    distance,
    distance_structure,
    incidence_matrix,
    is_edge_cut,
    is_tree,
    line_graph,
    structure,
    unicyclic_parity,
)
from pairwalk.io import connected_graph6, parse_edge_list, parse_graph6, to_edge_list, to_graph6


def test_graph_rejects_loops_duplicates_and_bad_weights():
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 1, -1.0)])
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 5)])
    with pytest.raises(GraphError):
        Graph(0)


def test_edges_are_canonical():
    X = Graph.from_edges(3, [(2, 1), (1, 0)])
    assert X.edges == ((0, 1, 1.0), (1, 2, 1.0))
    assert X.edge_id(2, 1) == 1
    assert not X.is_weighted


def test_families_have_expected_sizes():
    assert (cycle(7).n, cycle(7).m) == (7, 7)
    assert complete(6).m == 15
    assert complete_bipartite(2, 8).m == 16
    assert star(3).n == 4 and star(3).m == 3
    assert hypercube(4).n == 16 and hypercube(4).m == 32
    assert Xm_blowup(3).n == 4 + 4 * 3
    X = X_double_star(12, 8, 24)
    assert X.n == 2 + 12 + 8 + 24
    assert np.allclose(P5w(4).weights, [2, 1, 1, 2])


def test_family_specs():
    assert family("cycle(8)") == cycle(8)
    assert family("K2,4") == complete_bipartite(2, 4)
    assert family("Q3") == hypercube(3)
    P = family("P3 x K2")
    assert P == cartesian_product(path(3), complete(2))
    assert len(family_factors("K2 x K2")) == 2
    with pytest.raises(GraphError):
        family("nonsense(3)")


@given(connected_graphs(max_n=5), connected_graphs(max_n=4))
def test_cartesian_product_matches_networkx(X1, X2):
    P = cartesian_product(X1, X2)
    G = nx.cartesian_product(X1.to_networkx(), X2.to_networkx())
    relabel = {(i, j): i * X2.n + j for i in range(X1.n) for j in range(X2.n)}
    G = nx.relabel_nodes(G, relabel)
    assert {tuple(sorted(e)) for e in G.edges} == {(u, v) for u, v, _ in P.edges}
    # adjacency oracle: A1 (x) I + I (x) A2
    A = np.kron(X1.adjacency(), np.eye(X2.n)) + np.kron(np.eye(X1.n), X2.adjacency())
    assert np.array_equal(P.adjacency(), A)


@given(connected_graphs())
def test_incidence_identities(X):
    R = incidence_matrix(X)
    A = X.adjacency()
    D = np.diag(A.sum(axis=1))
    assert np.array_equal(R @ R.T, D + A)
    L, emap = line_graph(X)
    assert np.array_equal(L.adjacency(), R.T @ R - 2 * np.eye(X.m))
    assert nx.is_isomorphic(L.to_networkx(), nx.line_graph(X.to_networkx()))


@given(connected_graphs())
def test_bipartition_agrees_with_networkx(X):
    bp = bipartition(X)
    assert (bp is not None) == nx.is_bipartite(X.to_networkx())
    if bp is not None:
        B1, B2 = bp
        assert all((u in B1) != (v in B1) for u, v, _ in X.edges)
        assert B1 | B2 == set(range(X.n))


def test_structure_queries():
    assert is_tree(star(4))
    assert unicyclic_parity(cycle(5)) == "odd"
    assert unicyclic_parity(cycle(6)) == "even"
    assert unicyclic_parity(complete(4)) is None
    assert cut_edges(path(4)) == frozenset({0, 1, 2})
    assert cut_edges(cycle(5)) == frozenset()
    C = cycle(6)
    assert is_edge_cut(C, C.edge_id(0, 1), C.edge_id(3, 4))
    info = structure(hypercube(3))
    assert info.is_bipartite and not info.is_tree


def test_distances():
    Q = hypercube(4)
    assert distance(Q, 0, 15) == 4
    assert covering_radius(cycle(8), [0, 4]) == 2
    ds = distance_structure(Q)
    assert ds.diameter == 4
    assert ds.k == (1, 4, 6, 4, 1)
    assert ds.antipodal_class2 and ds.antipodal_identity
    assert not distance_structure(cycle(7)).antipodal_class2


@given(connected_graphs(max_n=9))
def test_graph6_round_trip_and_networkx_agreement(X):
    s = to_graph6(X)
    assert parse_graph6(s) == X
    assert parse_graph6(">>graph6<<" + s) == X
    G = nx.from_graph6_bytes(s.encode())
    assert sorted(G.edges) == sorted((u, v) for u, v, _ in X.edges)


@pytest.mark.parametrize("bad", ["", "A!", "?", "C~~"])
def test_graph6_rejects_malformed(bad):
    with pytest.raises(GraphError):
        parse_graph6(bad)


def test_edge_list_round_trip_with_weights():
    X = P5w(2)
    assert parse_edge_list(to_edge_list(X)) == X
    with pytest.raises(GraphError):
        parse_edge_list("0 1\n1 2 3 4\n")
    with pytest.raises(GraphError):
        parse_edge_list("0 1\n0 1\n")


def test_connected_corpus_counts():
    # connected graphs on 2..6 vertices: 1 + 2 + 6 + 21 + 112
    assert len(connected_graph6(6)) == 142
    assert len(set(connected_graph6(6))) == 142


@given(st.integers(1, 3))
def test_cartesian_power_of_path_size(m):
    X = cartesian_power(path(3), m)
    assert X.n == 3 ** m
