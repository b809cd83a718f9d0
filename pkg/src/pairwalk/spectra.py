"""Hamiltonians, grouped spectral decompositions and eigenvalue-set classification."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exact import (
    as_integer_matrix,
    gcd_fractions,
    is_root_of_charpoly,
    rational_approx,
    squarefree_decompose,
)
from .graph import Graph
from .tolerances import DEFAULT, Tolerances


class SpectralError(ArithmeticError):
    """Raised when a decomposition fails its own invariants."""


class HamiltonianKind(str, enum.Enum):
    A = "A"
    L = "L"
    Q = "Q"
    CUSTOM = "custom"

    @classmethod
    def parse(cls, text: str) -> "HamiltonianKind":
        key = text.strip().upper()
        for k in (cls.A, cls.L, cls.Q):
            if key == k.value:
                return k
        raise ValueError(f"unknown Hamiltonian {text!r}; expected one of a, l, q")


def hamiltonian(X: Graph, kind: HamiltonianKind | str = HamiltonianKind.A,
                custom: np.ndarray | None = None) -> np.ndarray:
    """A, L = D - A, Q = D + A (weighted degrees), or a checked custom matrix."""
    kind = HamiltonianKind(kind) if not isinstance(kind, HamiltonianKind) else kind
    if kind is HamiltonianKind.CUSTOM:
        M = np.array(custom, dtype=float)
        if M.shape != (X.n, X.n):
            raise ValueError(f"custom Hamiltonian must be {X.n}x{X.n}")
        if not np.allclose(M, M.T, rtol=0, atol=1e-12):
            raise ValueError("custom Hamiltonian is not symmetric")
        return (M + M.T) / 2
    A = np.array(X.adjacency())
    if kind is HamiltonianKind.A:
        return A
    D = np.diag(A.sum(axis=1))
    return D - A if kind is HamiltonianKind.L else D + A


# --- decomposition -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    matrix: np.ndarray
    eigenvalues: np.ndarray  # distinct, ascending
    projectors: np.ndarray  # (d, n, n)
    group_tol: float
    ambiguous: bool = False
    int_matrix: list | None = field(default=None, repr=False)
    _root_cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def integral(self) -> bool:
        return self.int_matrix is not None

    @property
    def radius(self) -> float:
        return float(np.max(np.abs(self.eigenvalues)))

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def index_of(self, lam: float) -> int:
        k = int(np.argmin(np.abs(self.eigenvalues - lam)))
        if abs(self.eigenvalues[k] - lam) > max(10 * self.group_tol, 1e-9):
            raise KeyError(f"{lam} is not an eigenvalue")
        return k

    def projector(self, lam: float) -> np.ndarray:
        return self.projectors[self.index_of(lam)]

    def components(self, u: np.ndarray) -> np.ndarray:
        """``E_lambda u`` for every eigenvalue, shape (d, n)."""
        return self.projectors @ np.asarray(u)

    def evolution(self, t: float) -> np.ndarray:
        """U(t) = sum_lambda exp(-i t lambda) E_lambda."""
        ph = np.exp(-1j * t * self.eigenvalues)
        return np.tensordot(ph, self.projectors, axes=1)

    def has_root(self, poly: tuple[int, ...]) -> bool | None:
        """Exact test that ``poly`` shares a root with the characteristic polynomial."""
        if self.int_matrix is None:
            return None
        if poly not in self._root_cache:
            self._root_cache[poly] = is_root_of_charpoly(self.int_matrix, poly)
        return self._root_cache[poly]


def decompose(M: np.ndarray, tol: Tolerances | float | None = None) -> SpectralDecomposition:
    """Group eigenvalues of symmetric ``M`` by single linkage and build projectors."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("decompose needs a square matrix")
    if not np.allclose(M, M.T, rtol=0, atol=1e-12):
        raise ValueError("decompose needs a symmetric matrix")
    try:
        w, V = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise SpectralError(f"eigensolver failed: {exc}") from exc
    radius = float(np.max(np.abs(w))) if len(w) else 0.0
    if isinstance(tol, (int, float)):
        gtol = float(tol)
    else:
        gtol = (tol or DEFAULT).group_tol_for(radius)

    gaps = np.diff(w)
    breaks = np.flatnonzero(gaps > gtol)
    ambiguous = bool(np.any((gaps > gtol) & (gaps <= 10 * gtol)))
    bounds = np.concatenate(([0], breaks + 1, [len(w)]))
    eigs, projs = [], []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        Vc = V[:, lo:hi]
        eigs.append(float(np.mean(w[lo:hi])))
        projs.append(Vc @ Vc.T)
    eigs = np.array(eigs)
    projs = np.array(projs)

    n = M.shape[0]
    if not np.allclose(V.T @ V, np.eye(n), rtol=0, atol=1e-9):
        raise SpectralError("eigenvectors are not orthonormal to 1e-9")
    if not np.allclose(projs.sum(axis=0), np.eye(n), rtol=0, atol=1e-9):
        raise SpectralError("projectors do not sum to the identity")
    if not np.allclose(np.tensordot(eigs, projs, axes=1), M, rtol=0, atol=1e-9):
        raise SpectralError("spectral reconstruction residual exceeds 1e-9")
    projs = (projs + projs.transpose(0, 2, 1)) / 2
    projs.flags.writeable = False
    eigs.flags.writeable = False
    return SpectralDecomposition(M, eigs, projs, gtol, ambiguous, as_integer_matrix(M))


def decompose_graph(X: Graph, kind: HamiltonianKind | str = HamiltonianKind.A,
                    tol: Tolerances | None = None) -> SpectralDecomposition:
    return decompose(hamiltonian(X, kind), tol)


# --- classification ----------------------------------------------------------

INTEGER, QUADRATIC, INCONCLUSIVE = "Integer", "Quadratic", "Inconclusive"


@dataclass(frozen=True)
class SupportClassification:
    """Members written as (c + d*sqrt(delta))/2; Integer uses delta = 1, c = 0, d = 2*lambda."""

    kind: str
    members: tuple
    delta: int | None = None
    c: int | None = None
    d: tuple | None = None
    g: Fraction | None = None
    confirmed: bool | None = None  # exact characteristic-polynomial check, None if not run
    reason: str = ""

    @property
    def exact(self) -> bool:
        return self.kind in (INTEGER, QUADRATIC)

    @property
    def sqrt_delta(self) -> float:
        return math.sqrt(self.delta)

    def scaled_difference(self, i: int, j: int) -> Fraction:
        """(lambda_i - lambda_j)/sqrt(delta) as an exact rational."""
        return Fraction(self.d[i] - self.d[j], 2)

    def describe(self) -> str:
        if self.kind == INTEGER:
            return f"Integer(g={self.g})"
        if self.kind == QUADRATIC:
            return f"Quadratic(delta={self.delta}, c={self.c}, g={self.g})"
        return f"Inconclusive({self.reason})"


def _gcd_of(d: Sequence[int]) -> Fraction | None:
    if len(d) < 2:
        return None
    return gcd_fractions(Fraction(x - d[0], 2) for x in d[1:])


def _try_integer(vals: np.ndarray, tol: Tolerances, dec: SpectralDecomposition | None):
    r = np.rint(vals)
    if not np.all(np.abs(vals - r) <= tol.int_tol):
        return None
    ks = [int(x) for x in r]
    confirmed = None
    if dec is not None and dec.integral:
        confirmed = all(dec.has_root((1, -k)) for k in ks)
        if not confirmed:
            return SupportClassification(INCONCLUSIVE, tuple(vals), reason="integer snap not confirmed")
    d = tuple(2 * k for k in ks)
    return SupportClassification(INTEGER, tuple(vals), 1, 0, d, _gcd_of(d), confirmed)


def _try_quadratic(vals: np.ndarray, tol: Tolerances, dec: SpectralDecomposition | None):
    n = len(vals)
    candidates = []
    for i in range(n):
        for j in range(i, n):
            sm = vals[i] + vals[j]
            c = round(sm)
            if abs(sm - c) <= tol.int_tol and c not in candidates:
                candidates.append(int(c))
    for c in candidates:
        sq = (2 * vals - c) ** 2
        r = np.rint(sq)
        if not np.all(np.abs(sq - r) <= tol.int_tol * (1 + np.abs(sq))):
            continue
        delta = None
        ks = []
        ok = True
        for x in r.astype(int):
            if x == 0:
                ks.append(0)
                continue
            k, f = squarefree_decompose(int(x))
            if f == 1 or (delta is not None and f != delta):
                ok = False
                break
            delta = f
            ks.append(k)
        if not ok or delta is None:
            continue
        d = tuple(int(k if 2 * v - c >= 0 else -k) for k, v in zip(ks, vals))
        rs = math.sqrt(delta)
        recon = np.array([(c + di * rs) / 2 for di in d])
        if not np.all(np.abs(recon - vals) <= tol.int_tol):
            continue
        confirmed = None
        if dec is not None and dec.integral:
            confirmed = all(dec.has_root((4, -4 * c, c * c - di * di * delta)) for di in d)
            if not confirmed:
                return SupportClassification(INCONCLUSIVE, tuple(vals), reason="quadratic fit not confirmed")
        return SupportClassification(QUADRATIC, tuple(vals), delta, c, d, _gcd_of(d), confirmed)
    return None


def classify(values: Iterable[float], tol: Tolerances | None = None,
             dec: SpectralDecomposition | None = None) -> SupportClassification:
    """Tag an eigenvalue set as Integer, Quadratic(delta, c) or Inconclusive.

    When ``dec`` comes from an integer matrix the fitted values are confirmed
    exactly against its characteristic polynomial; a failed confirmation
    yields Inconclusive.
    """
    tol = tol or DEFAULT
    vals = np.array(sorted(float(v) for v in values))
    if len(vals) == 0:
        raise ValueError("classify needs a nonempty set")
    for attempt in (_try_integer, _try_quadratic):
        res = attempt(vals, tol, dec)
        if res is not None:
            return res
    return SupportClassification(INCONCLUSIVE, tuple(vals), reason="no integer or quadratic fit")


def ratio_condition(values: Iterable[float], tol: Tolerances | None = None) -> bool:
    """All ratios of differences of ``values`` rational (to the configured bound)."""
    tol = tol or DEFAULT
    vals = sorted(float(v) for v in values)
    if len(vals) <= 2:
        return True
    base = vals[-1] - vals[0]
    return all(rational_approx((v - vals[0]) / base, tol.max_den) is not None for v in vals[1:-1])


def rational_ratios(values: Sequence[float], tol: Tolerances | None = None) -> list[Fraction] | None:
    """(lambda_i - lambda_0)/(lambda_-1 - lambda_0) as fractions, or None."""
    tol = tol or DEFAULT
    vals = sorted(float(v) for v in values)
    if len(vals) < 2:
        return []
    base = vals[-1] - vals[0]
    out = []
    for v in vals[1:]:
        f = rational_approx((v - vals[0]) / base, tol.max_den)
        if f is None:
            return None
        out.append(f)
    return out
