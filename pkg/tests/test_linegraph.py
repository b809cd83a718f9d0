import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import PI, connected_graphs
from pairwalk.families import complete, complete_bipartite, cycle, hypercube, path, star
from pairwalk.graph import GraphError, cartesian_product, incidence_matrix, is_bipartite
from pairwalk.linegraph import (
    F_theta,
    cartesian_null_basis,
    edge_cut_filters,
    expected_columns,
    expected_nullity,
    intertwining_residual,
    line_correspondence,
    line_pst_decision,
    line_pst_scan,
    minus_two_projector,
    minus_two_relation,
    plus_state_pull,
    plus_state_push,
    product_edge,
    vpst_decision,
    vpst_scan,
)
from pairwalk.spectra import decompose_graph
from pairwalk.states import SPairState
from pairwalk.transfer import NONE, SC_ONLY, check_pst, strongly_cospectral


def copies_of_factor1_edge(X1, X2, edge1):
    P = cartesian_product(X1, X2)
    return [k for k in range(P.m) if (lambda pe: pe.factor == 1 and pe.edge == edge1)(product_edge(X1, X2, P, k))]


@given(connected_graphs(max_n=6), st.floats(0, 2 * math.pi))
def test_intertwining_holds(X, t):
    assume(X.m >= 1)
    corr = line_correspondence(X)
    assert intertwining_residual(corr, [t]) < 1e-9


@given(connected_graphs(max_n=7))
def test_minus_two_nullity(X):
    corr = line_correspondence(X)
    R = incidence_matrix(X)
    nullity = X.m - np.linalg.matrix_rank(R.astype(float))
    assert nullity == expected_nullity(X)
    mt = minus_two_projector(corr)
    if nullity == 0:
        assert mt is None
    else:
        assert mt.rank == nullity
        assert np.allclose(R @ mt.F, 0, atol=1e-9)


@given(connected_graphs(max_n=6))
def test_F_theta_matches_line_projectors(X):
    corr = line_correspondence(X)
    for lam in corr.q_dec.eigenvalues:
        if lam > 1e-9:
            assert np.allclose(F_theta(corr, lam), corr.line_dec.projector(lam - 2), atol=1e-8)
    with pytest.raises(ValueError):
        F_theta(corr, 0.0)


def test_k24_line_graph_transfer_and_pull():
    X = complete_bipartite(2, 4)
    corr = line_correspondence(X)
    d = line_pst_decision(corr, (0, 2), (1, 2))
    assert d.is_pst and d.report.time == pytest.approx(PI / 2)
    assert d.structural.is_pst and not d.discrepancies
    pulled = plus_state_pull(corr, d.report)
    assert pulled.phase == pytest.approx(-1.0)
    # Q evolution sends e_a + e_b to -(e_alpha + e_b)
    w = corr.q_dec.evolution(PI / 2) @ SPairState(0, 2, 1.0).vector(X.n)
    assert np.allclose(w, -SPairState(1, 2, 1.0).vector(X.n), atol=1e-9)


def test_cycle4_line_graph_is_cycle4():
    corr = line_correspondence(cycle(4))
    hits = [d for d in line_pst_scan(corr) if d.is_pst]
    assert len(hits) == 2
    assert all(d.report.time == pytest.approx(PI / 2) for d in hits)


def test_push_requires_full_column_rank():
    corr = line_correspondence(cycle(4))
    rep = check_pst(corr.q_dec, corr.plus(0), corr.plus(2))
    with pytest.raises(GraphError):
        plus_state_push(corr, rep)


def test_push_on_a_tree():
    # P3 under Q: e0 + e1 -> e1 + e2 is a plus-state transfer iff vertex transfer on L(P3) = K2
    corr = line_correspondence(path(3))
    rep = check_pst(corr.q_dec, corr.plus(0), corr.plus(1))
    assert rep.is_pst
    pushed = plus_state_push(corr, rep)
    assert pushed.oracle_fidelity == pytest.approx(1.0)


def test_edge_cut_screen():
    corr = line_correspondence(cycle(6))
    assert edge_cut_filters(corr, 0, 3)
    corr = line_correspondence(hypercube(3))
    assert not any(edge_cut_filters(corr, i, j) for i in range(12) for j in range(i + 1, 12))
    with pytest.raises(GraphError):
        edge_cut_filters(line_correspondence(path(4)), 0, 1)
    with pytest.raises(GraphError):
        edge_cut_filters(line_correspondence(cycle(5)), 0, 1)


@given(connected_graphs(max_n=6))
def test_edge_cut_screen_is_necessary(X):
    bip = is_bipartite(X)
    assume((bip and X.m >= X.n) or (not bip and X.m > X.n))
    corr = line_correspondence(X)
    for i in range(X.m):
        for j in range(i + 1, X.m):
            if strongly_cospectral(corr.line_dec, corr.f(i), corr.f(j)) is not None:
                assert edge_cut_filters(corr, i, j)


small_factor = st.sampled_from([complete(2), path(3), cycle(3), cycle(4), star(3), complete(4)])


@given(small_factor, small_factor)
def test_cartesian_null_basis(X1, X2):
    nb = cartesian_null_basis(X1, X2)
    Rc = incidence_matrix(nb.product)
    assert not np.any(Rc @ nb.N_canonical)
    r1, r2 = nb.ranks
    assert nb.columns == expected_columns(X1.n, X1.m, r1, X2.n, X2.m, r2)
    assert nb.columns == expected_nullity(nb.product)
    corr = line_correspondence(nb.product)
    mt = minus_two_projector(corr)
    F = mt.F if mt is not None else np.zeros((nb.product.m,) * 2)
    assert np.allclose(nb.projector(), F, atol=1e-8)


def test_minus_two_relation_on_k2_squared():
    nb = cartesian_null_basis(complete(2), complete(2))
    e1, e2 = copies_of_factor1_edge(complete(2), complete(2), 0)
    assert minus_two_relation(nb, e1, e2) == "+"


def test_vpst_k2_squared_reports_printed_condition_discrepancy():
    K2 = complete(2)
    e1, e2 = copies_of_factor1_edge(K2, K2, 0)
    d = vpst_decision(K2, K2, e1, e2)
    assert d.case == "i" and d.gap_ok and d.condition_i
    assert d.direct_pst and d.report.time == pytest.approx(PI / 2)
    assert not d.printed_iii and d.alternative_iii
    assert d.alternative_pst
    assert any("as printed" in x for x in d.discrepancies)


def test_vpst_star_two_times_k2_fails_gap_test():
    # support {-1, 1} has a gap of exactly 2, so the pair is not strongly cospectral
    X1 = star(2)
    e1, e2 = copies_of_factor1_edge(X1, complete(2), 0)
    d = vpst_decision(X1, complete(2), e1, e2)
    assert d.case == "i" and d.gap_ok is False
    assert d.report.verdict == NONE and not d.direct_sc


def test_vpst_star_three_times_k2_is_cospectral_without_transfer():
    X1 = star(3)
    e1, e2 = copies_of_factor1_edge(X1, complete(2), 0)
    d = vpst_decision(X1, complete(2), e1, e2)
    assert d.case == "i" and d.gap_ok
    assert d.predicted_sc and d.direct_sc and not d.direct_pst
    assert d.report.verdict == SC_ONLY
    assert not d.discrepancies


def test_vpst_scan_covers_all_pairs():
    decisions = vpst_scan(path(3), complete(2))
    m = cartesian_product(path(3), complete(2)).m
    assert len(decisions) == m * (m - 1) // 2
    for d in decisions:
        if d.predicted_sc:
            assert d.direct_sc


def test_bipartite_signature_identity_example():
    X = complete_bipartite(2, 4)
    dq, dl = decompose_graph(X, "Q"), decompose_graph(X, "L")
    for s in (1.0, 2.0):
        q = strongly_cospectral(dq, SPairState(0, 2, s).state(6), SPairState(1, 3, s).state(6))
        lap = strongly_cospectral(dl, SPairState(0, 2, -s).state(6), SPairState(1, 3, -s).state(6))
        assert (q is None) == (lap is None)
