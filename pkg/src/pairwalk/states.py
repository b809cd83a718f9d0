"""Real states on graph vertices, s-pair states, and eigenvalue supports."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import Graph, distance
from .spectra import SpectralDecomposition
from .tolerances import DEFAULT, Tolerances


class StateError(ValueError):
    pass


@dataclass(frozen=True)
class SPairState:
    """(e_a + s e_b)/sqrt(1 + s^2)."""

    a: int
    b: int
    s: float

    def __post_init__(self):
        if self.a == self.b:
            raise StateError("s-pair state needs two distinct vertices")
        if self.s == 0 or not math.isfinite(self.s):
            raise StateError(f"s must be a nonzero real, got {self.s}")

    def vector(self, n: int) -> np.ndarray:
        if not (0 <= self.a < n and 0 <= self.b < n):
            raise StateError(f"vertices ({self.a}, {self.b}) out of range for n={n}")
        v = np.zeros(n)
        v[self.a] = 1.0
        v[self.b] = self.s
        return v / math.sqrt(1.0 + self.s * self.s)

    def state(self, n: int) -> "RealState":
        return RealState(self.vector(n), self)

    def swapped(self) -> "SPairState":
        """The same ray written from b: e_b + (1/s) e_a."""
        return SPairState(self.b, self.a, 1.0 / self.s)

    def __str__(self) -> str:
        return f"e{self.a}{'+' if self.s > 0 else '-'}{_fmt(abs(self.s))}e{self.b}"


def _fmt(x: float) -> str:
    if x == 1:
        return ""
    f = Fraction(x).limit_denominator(1000)
    if abs(float(f) - x) < 1e-12:
        return f"{f}*"
    return f"{x:.6g}*"


class RealState:
    """A real unit vector, optionally remembering the s-pair it came from."""

    __slots__ = ("vector", "pair")

    def __init__(self, vector, pair: SPairState | None = None):
        v = np.array(vector, dtype=float).ravel()
        nrm = np.linalg.norm(v)
        if not np.isfinite(nrm) or nrm == 0:
            raise StateError("state vector must be finite and nonzero")
        if abs(nrm - 1.0) > 1e-12:
            v = v / nrm
        v.flags.writeable = False
        object.__setattr__(self, "vector", v)
        object.__setattr__(self, "pair", pair)

    def __setattr__(self, name, value):
        raise AttributeError("RealState is immutable")

    @classmethod
    def vertex(cls, n: int, a: int) -> "RealState":
        if not 0 <= a < n:
            raise StateError(f"vertex {a} out of range for n={n}")
        v = np.zeros(n)
        v[a] = 1.0
        return cls(v)

    @classmethod
    def spair(cls, n: int, a: int, b: int, s: float) -> "RealState":
        return SPairState(a, b, s).state(n)

    @property
    def n(self) -> int:
        return len(self.vector)

    def density(self) -> np.ndarray:
        return np.outer(self.vector, self.vector)

    def same_ray(self, other: "RealState", tol: float = 1e-9) -> bool:
        return abs(abs(float(self.vector @ other.vector)) - 1.0) <= tol

    def __repr__(self) -> str:
        if self.pair is not None:
            return f"RealState({self.pair})"
        nz = np.flatnonzero(np.abs(self.vector) > 1e-12)
        if len(nz) == 1:
            return f"RealState(e{nz[0]})"
        return f"RealState({np.array2string(self.vector, precision=4)})"


def as_state(u, n: int | None = None) -> RealState:
    if isinstance(u, RealState):
        return u
    if isinstance(u, SPairState):
        if n is None:
            raise StateError("vertex count needed to realise an s-pair state")
        return u.state(n)
    return RealState(u)


# --- supports ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EigenvalueSupport:
    dec: SpectralDecomposition
    indices: tuple  # indices into dec.eigenvalues
    norms: np.ndarray  # ||E_lambda u|| for every eigenvalue of dec

    @property
    def values(self) -> tuple:
        return tuple(float(self.dec.eigenvalues[k]) for k in self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, lam: float) -> bool:
        return any(abs(lam - v) <= max(10 * self.dec.group_tol, 1e-9) for v in self.values)


def support(u, dec: SpectralDecomposition, tol: Tolerances | float | None = None) -> EigenvalueSupport:
    u = as_state(u, dec.n)
    if u.n != dec.n:
        raise StateError(f"state has dimension {u.n}, decomposition has {dec.n}")
    stol = tol if isinstance(tol, float) else (tol or DEFAULT).support_tol
    norms = np.linalg.norm(dec.components(u.vector), axis=1)
    idx = tuple(int(k) for k in np.flatnonzero(norms > stol))
    total = float(np.sum(norms[list(idx)] ** 2))
    if not idx or abs(total - 1.0) > 1e-9 + len(dec) * stol**2:
        raise StateError(f"support weights sum to {total}, expected 1")
    return EigenvalueSupport(dec, idx, norms)


def is_fixed(u, dec: SpectralDecomposition, tol: Tolerances | None = None) -> float | None:
    """The eigenvalue if ``u`` is an eigenvector, else None."""
    sup = support(u, dec, tol)
    return sup.values[0] if len(sup) == 1 else None


@dataclass(frozen=True)
class SupportBound:
    ok: bool
    support_size: int
    bound: int
    fixed: bool


def support_lower_bound_check(p: SPairState, dec: SpectralDecomposition, X: Graph,
                              tol: Tolerances | None = None) -> SupportBound:
    """|support| >= ceil(dist(a, b)/2) unless the state is fixed."""
    sup = support(p.state(dec.n), dec, tol)
    bound = math.ceil(distance(X, p.a, p.b) / 2)
    fixed = len(sup) == 1
    return SupportBound(fixed or len(sup) >= bound, len(sup), bound, fixed)


# --- state literals ----------------------------------------------------------

_SPAIR = re.compile(r"^(\d+)\s*([+-])\s*(?:([^*]+?)\s*\*\s*)?(\d+)$")


def _scalar(tok: str) -> float:
    tok = tok.strip()
    if tok.startswith("(") and tok.endswith(")"):
        tok = tok[1:-1]
    try:
        return float(Fraction(tok))
    except (ValueError, ZeroDivisionError):
        try:
            return float(tok)
        except ValueError:
            raise StateError(f"cannot read scalar {tok!r}") from None


def parse_state(text: str, n: int) -> RealState:
    """Read ``"a"``, ``"a+s*b"`` (also ``"a-b"``, ``"a-2*b"``) or ``"[x0, x1, ...]"``."""
    t = text.strip()
    if t.startswith("["):
        if not t.endswith("]"):
            raise StateError(f"unterminated vector literal {text!r}")
        parts = [p for p in t[1:-1].split(",") if p.strip()]
        vec = [_scalar(p) for p in parts]
        if len(vec) != n:
            raise StateError(f"vector literal has {len(vec)} entries, graph has {n} vertices")
        return RealState(vec)
    if t.isdigit():
        return RealState.vertex(n, int(t))
    m = _SPAIR.match(t)
    if not m:
        raise StateError(f"cannot parse state literal {text!r}")
    a, sign, coef, b = m.groups()
    s = _scalar(coef) if coef else 1.0
    if sign == "-":
        s = -s
    return RealState.spair(n, int(a), int(b), s)
