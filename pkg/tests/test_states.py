import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import connected_graphs, nonzero_s
from pairwalk.families import cycle, path
from pairwalk.spectra import decompose_graph
from pairwalk.states import (
    RealState,
    SPairState,
    StateError,
    as_state,
    is_fixed,
    parse_state,
    support,
    support_lower_bound_check,
)


@given(st.integers(2, 9).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n - 1), st.integers(0, n - 1))),
       nonzero_s)
def test_spair_vector_is_unit_and_swap_is_same_ray(nab, s):
    n, a, b = nab
    if a == b:
        with pytest.raises(StateError):
            SPairState(a, b, s)
        return
    p = SPairState(a, b, s)
    v = p.vector(n)
    assert math.isclose(np.linalg.norm(v), 1.0)
    assert math.isclose(v[b] / v[a], s)
    assert p.state(n).same_ray(p.swapped().state(n))


def test_spair_rejects_zero_and_nonfinite():
    for s in (0.0, float("inf"), float("nan")):
        with pytest.raises(StateError):
            SPairState(0, 1, s)


def test_realstate_is_immutable_and_normalised():
    u = RealState([3, 4])
    assert np.allclose(u.vector, [0.6, 0.8])
    with pytest.raises(AttributeError):
        u.vector = np.zeros(2)
    with pytest.raises(ValueError):
        u.vector[0] = 1.0
    with pytest.raises(StateError):
        RealState([0, 0])


@pytest.mark.parametrize("text, expect", [
    ("2", [0, 0, 1, 0]),
    ("0+1", [1, 1, 0, 0]),
    ("0-3", [1, 0, 0, -1]),
    ("0+2*1", [1, 2, 0, 0]),
    ("0-1/2*2", [1, 0, -0.5, 0]),
    ("[1, 0, 1, 0]", [1, 0, 1, 0]),
])
def test_parse_state(text, expect):
    u = parse_state(text, 4)
    e = np.array(expect, dtype=float)
    assert np.allclose(u.vector, e / np.linalg.norm(e))


@pytest.mark.parametrize("bad", ["", "x", "0+", "0+0", "9", "[1, 2]", "0+0*1", "[1, 0, 0"])
def test_parse_state_rejects(bad):
    with pytest.raises(StateError):
        parse_state(bad, 4)


def test_as_state_accepts_vectors_and_spairs():
    assert as_state(SPairState(0, 1, 1.0), 3).same_ray(RealState([1, 1, 0]))
    assert as_state(np.array([0, 2.0, 0])).same_ray(RealState.vertex(3, 1))


def test_support_and_fixed_states_on_c4():
    dec = decompose_graph(cycle(4))
    # e0 - e2 is a 0-eigenvector of C4
    assert is_fixed(SPairState(0, 2, -1.0).state(4), dec) == pytest.approx(0.0)
    assert is_fixed(RealState.vertex(4, 0), dec) is None
    assert support(RealState.vertex(4, 0), dec).values == pytest.approx((-2.0, 0.0, 2.0))


@given(connected_graphs(max_n=7), st.data())
def test_support_size_bound(X, data):
    a = data.draw(st.integers(0, X.n - 1))
    b = data.draw(st.integers(0, X.n - 1).filter(lambda v: v != a))
    s = data.draw(nonzero_s)
    for kind in "ALQ":
        chk = support_lower_bound_check(SPairState(a, b, s), decompose_graph(X, kind), X)
        assert chk.ok, (kind, a, b, s, chk)


def test_support_bound_on_long_path():
    X = path(9)
    chk = support_lower_bound_check(SPairState(0, 8, 1.0), decompose_graph(X), X)
    assert chk.bound == 4 and chk.support_size >= 4
