import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from conftest import connected_graphs
from pairwalk.exact import (
    bareiss_det,
    convergents,
    gcd_fractions,
    is_root_of_charpoly,
    rational_approx,
    squarefree_decompose,
)
from pairwalk.families import complete, cycle, hypercube, path
from pairwalk.graph import cartesian_product
from pairwalk.spectra import (
    INCONCLUSIVE,
    INTEGER,
    QUADRATIC,
    HamiltonianKind,
    SpectralError,
    classify,
    decompose,
    decompose_graph,
    hamiltonian,
    ratio_condition,
)


@given(connected_graphs(), st.sampled_from(list("ALQ")))
def test_projectors_form_a_resolution_of_identity(X, kind):
    dec = decompose_graph(X, kind)
    E = dec.projectors
    n = X.n
    assert np.allclose(E.sum(axis=0), np.eye(n), atol=1e-9)
    for i in range(len(dec)):
        assert np.allclose(E[i] @ E[i], E[i], atol=1e-9)
        for j in range(i + 1, len(dec)):
            assert np.allclose(E[i] @ E[j], 0, atol=1e-9)
    assert np.allclose(np.tensordot(dec.eigenvalues, E, axes=1), dec.matrix, atol=1e-9)
    assert np.all(np.diff(dec.eigenvalues) > 0)


@given(connected_graphs(max_n=6), st.floats(-10, 10))
def test_evolution_matches_matrix_exponential(X, t):
    dec = decompose_graph(X)
    U = dec.evolution(t)
    assert np.allclose(U, expm(-1j * t * dec.matrix), atol=1e-9)
    assert np.allclose(U @ U.conj().T, np.eye(X.n), atol=1e-9)


@given(connected_graphs(max_n=6))
def test_laplacian_spectra(X):
    L = decompose_graph(X, HamiltonianKind.L)
    assert abs(L.eigenvalues[0]) < 1e-9
    # one zero eigenvalue per component
    assert np.linalg.matrix_rank(L.projectors[0], tol=1e-6) == 1


def test_hamiltonian_kinds():
    X = path(3)
    A = hamiltonian(X, "A")
    assert np.array_equal(hamiltonian(X, "L"), np.diag([1, 2, 1]) - A)
    assert np.array_equal(hamiltonian(X, "Q"), np.diag([1, 2, 1]) + A)
    assert HamiltonianKind.parse("q") is HamiltonianKind.Q
    with pytest.raises(ValueError):
        HamiltonianKind.parse("x")


def test_cycle_spectrum_oracle():
    for n in range(3, 13):
        expect = sorted({round(2 * math.cos(2 * math.pi * k / n), 9) for k in range(n)})
        got = decompose_graph(cycle(n)).eigenvalues
        assert np.allclose(got, expect, atol=1e-9)


def test_product_spectrum_is_sumset():
    X1, X2 = cycle(5), path(3)
    s1 = decompose_graph(X1).eigenvalues
    s2 = decompose_graph(X2).eigenvalues
    expect = sorted({round(a + b, 8) for a in s1 for b in s2})
    got = decompose_graph(cartesian_product(X1, X2)).eigenvalues
    assert np.allclose(got, expect, atol=1e-8)


def test_decompose_rejects_asymmetric():
    with pytest.raises(ValueError):
        decompose(np.array([[0, 1], [0, 0]]))


def test_classify_integer():
    dec = decompose_graph(hypercube(3))
    c = classify(dec.eigenvalues, dec=dec)
    assert c.kind == INTEGER and c.confirmed
    assert c.g == 2  # differences of {-3,-1,1,3}
    assert classify([3.0]).kind == INTEGER


def test_classify_quadratic_cycle8():
    dec = decompose_graph(cycle(8))
    vals = [-math.sqrt(2), 0.0, math.sqrt(2)]
    c = classify(vals, dec=dec)
    assert c.kind == QUADRATIC and c.delta == 2 and c.c == 0
    assert c.confirmed
    assert c.d == (-2, 0, 2)
    recon = [(c.c + d * math.sqrt(c.delta)) / 2 for d in c.d]
    assert np.allclose(recon, vals)
    # integers and sqrt2 together have no common quadratic form
    assert classify(dec.eigenvalues, dec=dec).kind == INCONCLUSIVE


def test_classify_quadratic_shifted_center():
    # (1 +- sqrt 5)/2 from C5
    vals = [(1 - math.sqrt(5)) / 2, (1 + math.sqrt(5)) / 2]
    c = classify(vals)
    assert c.kind == QUADRATIC and c.delta == 5 and c.c == 1


def test_classify_inconclusive_for_generic_values():
    assert classify([0.0, 1.0, math.pi]).kind == INCONCLUSIVE
    assert classify([0.0, math.sqrt(2), math.sqrt(3)]).kind == INCONCLUSIVE


def test_classify_rejects_near_miss_with_exact_confirmation():
    # integer snap within tolerance but not an eigenvalue of the integer matrix
    dec = decompose_graph(path(3))  # spectrum {-sqrt2, 0, sqrt2}
    assert classify([1 + 1e-7, 2.0]).kind == INTEGER
    assert classify([1 + 1e-7, 2.0], dec=dec).kind == INCONCLUSIVE


def test_ratio_condition():
    assert ratio_condition([-2, 0, 2])
    assert ratio_condition([-math.sqrt(2), 0, math.sqrt(2)])
    assert not ratio_condition([0, 1, math.sqrt(2)])


def test_complete_graph_spectrum():
    dec = decompose_graph(complete(6))
    assert np.allclose(dec.eigenvalues, [-1, 5])


@given(st.fractions(max_denominator=500).filter(lambda f: abs(f) < 1000))
def test_rational_approx_recovers_fractions(f):
    assert rational_approx(float(f), 10**6) == f


def test_rational_approx_rejects_irrationals():
    for x in (math.sqrt(2), math.pi, math.e, math.sqrt(3) - 1):
        assert rational_approx(x, 10**6) is None


def test_convergents_of_sqrt2():
    cs = list(convergents(math.sqrt(2), 6))
    assert cs[:5] == [Fraction(1), Fraction(3, 2), Fraction(7, 5), Fraction(17, 12), Fraction(41, 29)]


@given(st.integers(1, 10**6))
def test_squarefree_decompose(n):
    k, f = squarefree_decompose(n)
    assert k * k * f == n
    assert sympy.factorint(f) == {} or max(sympy.factorint(f).values()) == 1


def test_gcd_fractions():
    assert gcd_fractions([Fraction(1, 2), Fraction(3, 4)]) == Fraction(1, 4)
    assert gcd_fractions([0]) == 0


@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_matches_sympy(M):
    assert bareiss_det(M) == sympy.Matrix(M).det()


def test_is_root_of_charpoly():
    A = [list(map(int, r)) for r in cycle(8).adjacency()]
    assert is_root_of_charpoly(A, (1, 0, -2))  # x^2 - 2
    assert not is_root_of_charpoly(A, (1, 0, -3))
    assert is_root_of_charpoly(A, (1, -2))


def test_spectral_error_type():
    assert issubclass(SpectralError, ArithmeticError)
