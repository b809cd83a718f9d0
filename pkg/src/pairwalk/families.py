"""Named graph families and a small spec parser for them.

``family("cycle(8)")``, ``family("K2,4")`` and ``family("P3 x K2")`` all work;
see :func:`family` for the accepted forms.
"""

from __future__ import annotations

import math
import re
from functools import reduce

import numpy as np

from .graph import Graph, GraphError, cartesian_product


def _positive(name: str, value, minimum: int = 1) -> int:
    if int(value) != value or value < minimum:
        raise GraphError(f"{name} needs an integer parameter >= {minimum}, got {value!r}")
    return int(value)


def path(n: int) -> Graph:
    n = _positive("path", n)
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    n = _positive("cycle", n, 3)
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    n = _positive("complete", n)
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite(p: int, q: int) -> Graph:
    """K_{p,q}; vertices ``0..p-1`` form the first side."""
    p = _positive("complete_bipartite", p)
    q = _positive("complete_bipartite", q)
    return Graph.from_edges(p + q, [(i, p + j) for i in range(p) for j in range(q)])


def star(n: int) -> Graph:
    """K_{1,n} with centre 0."""
    return complete_bipartite(1, _positive("star", n))


def hypercube(d: int) -> Graph:
    """The d-cube on bit strings; antipodes are bitwise complements."""
    d = _positive("hypercube", d)
    n = 1 << d
    return Graph.from_edges(n, [(v, v ^ (1 << k)) for v in range(n) for k in range(d) if v < v ^ (1 << k)])


def P5w(w: float) -> Graph:
    """Path 0-1-2-3-4 with edge weights (sqrt(w), 1, 1, sqrt(w)).

    For this weighting e_2 - (2/sqrt(w)) e_0 and e_2 - (2/sqrt(w)) e_4 are
    exchanged at time pi/sqrt(w).
    """
    w = float(w)
    if not (math.isfinite(w) and w > 0):
        raise GraphError(f"P5w needs w > 0, got {w}")
    r = math.sqrt(w)
    return Graph.from_edges(5, [(0, 1, r), (1, 2, 1.0), (2, 3, 1.0), (3, 4, r)])


# X(12, 8, 24): two centres sharing 8 leaves, with 12 and 24 private leaves.
DOUBLE_STAR_A, DOUBLE_STAR_B = 0, 1


def X_double_star(private_a: int = 12, shared: int = 8, private_b: int = 24) -> Graph:
    """Centres 0 (degree private_a + shared) and 1 (degree private_b + shared).

    Shared leaves come first (2 .. shared+1), then a's private leaves, then b's.
    """
    private_a = _positive("X_double_star", private_a, 0)
    shared = _positive("X_double_star", shared, 0)
    private_b = _positive("X_double_star", private_b, 0)
    a, b = DOUBLE_STAR_A, DOUBLE_STAR_B
    edges = []
    v = 2
    for _ in range(shared):
        edges += [(a, v), (b, v)]
        v += 1
    for _ in range(private_a):
        edges.append((a, v))
        v += 1
    for _ in range(private_b):
        edges.append((b, v))
        v += 1
    return Graph.from_edges(v, edges)


def blowup_cells(m: int) -> list[list[int]]:
    """Vertex cells of :func:`Xm_blowup` in cycle order (cell k is C8 vertex k)."""
    m = _positive("Xm_blowup", m)
    cells, v = [], 0
    for k in range(8):
        size = m if k % 2 else 1
        cells.append(list(range(v, v + size)))
        v += size
    return cells


def Xm_blowup(m: int) -> Graph:
    """C8 with each odd vertex replaced by m independent copies."""
    cells = blowup_cells(m)
    edges = [(u, v) for k in range(8) for u in cells[k] for v in cells[(k + 1) % 8]]
    return Graph.from_edges(cells[-1][-1] + 1, edges)


def normalized_characteristic(cells: list[list[int]], n: int) -> np.ndarray:
    """n x len(cells) matrix whose column k is the unit indicator of cell k."""
    P = np.zeros((n, len(cells)))
    for k, cell in enumerate(cells):
        P[cell, k] = 1.0 / math.sqrt(len(cell))
    return P


def cartesian_power(X: Graph, m: int) -> Graph:
    m = _positive("cartesian_power", m)
    return reduce(cartesian_product, [X] * m)


# --- spec parser -------------------------------------------------------------

_BUILDERS = {
    "path": path,
    "cycle": cycle,
    "complete": complete,
    "complete_bipartite": complete_bipartite,
    "star": star,
    "hypercube": hypercube,
    "p5w": P5w,
    "x_double_star": X_double_star,
    "xm_blowup": Xm_blowup,
}

_ALIASES = [
    (re.compile(r"^K\{?(\d+),(\d+)\}?$"), complete_bipartite),
    (re.compile(r"^K(\d+)$"), complete),
    (re.compile(r"^C(\d+)$"), cycle),
    (re.compile(r"^P(\d+)$"), path),
    (re.compile(r"^Q(\d+)$"), hypercube),
]


def _number(tok: str):
    tok = tok.strip()
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def _single(spec: str) -> Graph:
    s = spec.strip().replace(" ", "")
    m = re.fullmatch(r"([A-Za-z_0-9]+?)(?:\((.*)\))?", s)
    if m and m.group(1).lower() in _BUILDERS:
        args = [_number(t) for t in m.group(2).split(",")] if m.group(2) else []
        try:
            return _BUILDERS[m.group(1).lower()](*args)
        except TypeError as exc:
            raise GraphError(f"bad arguments in family spec {spec!r}: {exc}") from None
    for pattern, builder in _ALIASES:
        m = pattern.match(s)
        if m:
            return builder(*(int(g) for g in m.groups()))
    raise GraphError(f"unknown family spec {spec!r}")


def family_factors(spec: str) -> list[Graph]:
    """The factors of a product spec (a single graph for a plain spec)."""
    parts = [p for p in re.split(r"\s+x\s+|□", spec.strip()) if p.strip()]
    if not parts:
        raise GraphError("empty family spec")
    return [_single(p) for p in parts]


def family(spec: str) -> Graph:
    """Build a graph from a spec such as ``cycle(8)``, ``K2,4``, ``Q3`` or ``P3 x K2``.

    Products are left-associative and use ``x`` or ``□`` as separator.
    """
    return reduce(cartesian_product, family_factors(spec))
