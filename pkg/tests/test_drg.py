import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import PI, nonzero_s
from pairwalk.drg import drg_detect, drg_spair_pst, drg_vertex_pst, k_unimodal
from pairwalk.families import complete, complete_bipartite, cycle, hypercube, path, star
from pairwalk.graph import Graph, GraphError
from pairwalk.spectra import decompose_graph
from pairwalk.states import SPairState
from pairwalk.transfer import PERIODIC, TransferError, fidelity


def petersen():
    G = nx.petersen_graph()
    return Graph.from_edges(10, G.edges)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_hypercube_intersection_array(d):
    data = drg_detect(hypercube(d))
    assert data.is_drg and data.is_antipodal_class2
    b, c = data.intersection_array
    assert b == tuple(d - i for i in range(d))
    assert c == tuple(range(1, d + 1))
    assert all(data.antipode(v) == (2 ** d - 1) ^ v for v in range(2 ** d))
    assert k_unimodal(data)


def test_petersen_is_drg_not_antipodal():
    data = drg_detect(petersen())
    assert data.is_drg and not data.is_antipodal_class2
    assert data.intersection_array == ((3, 2), (1, 1))
    with pytest.raises(GraphError):
        data.antipode(0)
    with pytest.raises(GraphError):
        drg_vertex_pst(petersen(), data)


def test_even_cycle_is_antipodal_and_odd_is_not():
    assert drg_detect(cycle(6)).is_antipodal_class2
    assert not drg_detect(cycle(7)).is_antipodal_class2
    assert drg_detect(complete_bipartite(3, 3)).is_drg


def test_non_regular_and_non_drg():
    with pytest.raises(GraphError):
        drg_detect(path(4))
    with pytest.raises(GraphError):
        drg_detect(star(3))
    # the prism K3 x K2 is regular but not distance-regular
    from pairwalk.graph import cartesian_product

    assert not drg_detect(cartesian_product(complete(3), complete(2))).is_drg


def test_vertex_transfer_on_cubes_and_none_on_c6():
    for d in (2, 3, 4):
        X = hypercube(d)
        vt = drg_vertex_pst(X)
        assert vt.time == pytest.approx(PI / 2)
        Ad = drg_detect(X).distance[d]
        assert np.allclose(decompose_graph(X).evolution(vt.time), vt.phase * Ad, atol=1e-9)
    assert drg_vertex_pst(cycle(6)) is None


def test_cycles_are_rejected_by_spair_rule():
    with pytest.raises(GraphError):
        drg_spair_pst(cycle(4), 0, 1, 2.0)


@given(st.integers(0, 15), st.integers(0, 15), nonzero_s)
def test_q4_spair_rule(a, b, s):
    if a == b:
        return
    X = hypercube(4)
    rep = drg_spair_pst(X, a, b, s)
    if b == 15 ^ a and abs(abs(s) - 1) < 1e-12:
        assert rep.verdict == PERIODIC and not rep.is_pst
    else:
        assert rep.is_pst and rep.time == pytest.approx(PI / 2)
        tgt = SPairState(15 ^ a, 15 ^ b, s) if b != 15 ^ a else SPairState(b, a, s)
        assert rep.target.same_ray(tgt.state(16))
        assert fidelity(decompose_graph(X), PI / 2, rep.source, rep.target) >= 1 - 1e-9


def test_antipodal_pair_with_unit_s_never_reaches_another_pair_state():
    X = hypercube(3)
    dec = decompose_graph(X)
    u = SPairState(0, 7, 1.0).state(8)
    # no transfer: the report carries the minimum period instead
    rep = drg_spair_pst(X, 0, 7, 1.0)
    assert rep.time is not None and fidelity(dec, rep.time, u, u) >= 1 - 1e-9


def test_transfer_error_type():
    assert issubclass(TransferError, RuntimeError)
