"""Small exact-arithmetic helpers used to certify floating-point spectra."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator

import numpy as np


def convergents(x: float, max_terms: int = 64) -> Iterator[Fraction]:
    """Continued-fraction convergents of ``x``."""
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    y = x
    for _ in range(max_terms):
        a = math.floor(y)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        yield Fraction(h1, k1)
        frac = y - a
        if frac < 1e-15:
            return
        y = 1.0 / frac
        if not math.isfinite(y):
            return


def rational_approx(x: float, max_den: int = 10**6, tol: float = 1e-9,
                    confidence: float = 1e-6) -> Fraction | None:
    """Recognise ``x`` as a rational ``p/q`` with ``q <= max_den``.

    A convergent is accepted only if it is within ``tol`` of ``x`` and the
    residual is far below what a generic real would leave at that
    denominator (``q**2 * |x - p/q| <= confidence``, i.e. the next partial
    quotient would exceed ``1/confidence``). Without the second test every
    float is "rational" at denominators around ``tol**-0.5``.
    """
    if not math.isfinite(x):
        return None
    for f in convergents(x):
        if f.denominator > max_den:
            return None
        err = abs(x - f.numerator / f.denominator)
        if err <= tol and err * f.denominator**2 <= confidence:
            return f
    return None


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write ``n > 0`` as ``k**2 * f`` with ``f`` square-free; return ``(k, f)``."""
    if n <= 0:
        raise ValueError("squarefree_decompose needs a positive integer")
    k, f = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        k *= p ** (e // 2)
        f *= p ** (e % 2)
        p += 1 if p == 2 else 2
    return k, f * n


def gcd_fractions(values: Iterable[Fraction]) -> Fraction:
    """gcd of rationals: gcd of numerators over lcm of denominators (reduced)."""
    vals = [Fraction(v) for v in values if v != 0]
    if not vals:
        return Fraction(0)
    num = reduce(math.gcd, (abs(v.numerator) for v in vals))
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (v.denominator for v in vals))
    return Fraction(num, den)


def as_integer_matrix(M: np.ndarray, tol: float = 0.0) -> list[list[int]] | None:
    """Entries of ``M`` as Python ints, or None if any entry is not integral."""
    R = np.rint(M)
    if not np.all(np.abs(M - R) <= tol):
        return None
    return [[int(v) for v in row] for row in R]


def bareiss_det(M: list[list[int]]) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    a = [row[:] for row in M]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def is_root_of_charpoly(M: list[list[int]], poly: tuple[int, ...]) -> bool:
    """True iff some eigenvalue of integer ``M`` is a root of ``poly``.

    ``poly`` holds integer coefficients, highest degree first (degree 1 or
    2). The test is ``det(poly(M)) == 0`` evaluated exactly.
    """
    n = len(M)
    if len(poly) == 2:
        p1, p0 = poly
        P = [[p1 * M[i][j] + (p0 if i == j else 0) for j in range(n)] for i in range(n)]
    elif len(poly) == 3:
        p2, p1, p0 = poly
        M2 = [[sum(M[i][k] * M[k][j] for k in range(n) if M[i][k]) for j in range(n)]
              for i in range(n)]
        P = [[p2 * M2[i][j] + p1 * M[i][j] + (p0 if i == j else 0) for j in range(n)]
             for i in range(n)]
    else:
        raise ValueError("only linear and quadratic factors are supported")
    return bareiss_det(P) == 0
