"""Weighted simple graphs and the structural machinery built on them.

Edges are stored canonically as ``(u, v, w)`` with ``u < v`` and sorted
lexicographically; the position of an edge in that ordering is its edge id.
Incidence-matrix columns and line-graph vertices follow the same ordering.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx
import numpy as np
from scipy.sparse.csgraph import shortest_path


class GraphError(ValueError):
    """Raised when a graph violates an invariant or an operation precondition."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=True)
class Graph:
    n: int
    edges: tuple = ()
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise GraphError(f"vertex count must be a positive integer, got {self.n!r}")
        seen = set()
        canon = []
        for e in self.edges:
            if len(e) == 2:
                u, v, w = e[0], e[1], 1.0
            else:
                u, v, w = e
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={self.n}")
            if not (math.isfinite(w) and w > 0):
                raise GraphError(f"edge ({u}, {v}) has non-positive or non-finite weight {w}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"parallel edge {key}")
            seen.add(key)
            canon.append((key[0], key[1], w))
        canon.sort()
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", tuple(canon))
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.n:
                raise GraphError("labels must have one entry per vertex")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, labels: Sequence[str] | None = None) -> "Graph":
        return cls(n, tuple(edges), tuple(labels) if labels is not None else None)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, _, w in self.edges], dtype=float)

    @property
    def is_weighted(self) -> bool:
        return any(w != 1.0 for _, _, w in self.edges)

    @cached_property
    def _edge_ids(self) -> dict:
        return {(u, v): i for i, (u, v, _) in enumerate(self.edges)}

    def edge_id(self, u: int, v: int) -> int:
        """Canonical index of the edge ``{u, v}``."""
        try:
            return self._edge_ids[(min(u, v), max(u, v))]
        except KeyError:
            raise GraphError(f"{{{u}, {v}}} is not an edge") from None

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._edge_ids

    def endpoints(self, eid: int) -> tuple[int, int]:
        u, v, _ = self.edges[eid]
        return u, v

    @cached_property
    def _adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for u, v, w in self.edges:
            A[u, v] = A[v, u] = w
        return _readonly(A)

    def adjacency(self) -> np.ndarray:
        return self._adjacency

    def degrees(self) -> np.ndarray:
        """Weighted degrees."""
        return self._adjacency.sum(axis=1)

    def valencies(self) -> np.ndarray:
        """Number of neighbours of each vertex (ignores weights)."""
        return (self._adjacency != 0).sum(axis=1)

    def neighbors(self, v: int) -> list[int]:
        return [int(u) for u in np.flatnonzero(self._adjacency[v])]

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_weighted_edges_from(self.edges)
        return G

    def is_connected(self) -> bool:
        return self.n == 1 or nx.is_connected(self.to_networkx())

    def require_connected(self, what: str = "this analysis") -> None:
        if not self.is_connected():
            raise GraphError(f"{what} requires a connected graph")

    def require_unweighted(self, what: str = "this analysis") -> None:
        if self.is_weighted:
            raise GraphError(f"{what} is only defined for unweighted graphs")

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def __repr__(self) -> str:
        tag = ", weighted" if self.is_weighted else ""
        return f"Graph(n={self.n}, m={self.m}{tag})"


# --- constructions ---------------------------------------------------------

def cartesian_product(X1: Graph, X2: Graph) -> Graph:
    """``X1 □ X2`` with vertex ``(i, j)`` numbered ``i * X2.n + j``.

    Product edges carry the weight of the factor edge they come from.
    """
    X1.require_connected("cartesian_product")
    X2.require_connected("cartesian_product")
    n2 = X2.n
    edges = []
    for i in range(X1.n):
        for a, b, w in X2.edges:
            edges.append((i * n2 + a, i * n2 + b, w))
    for a, b, w in X1.edges:
        for j in range(n2):
            edges.append((a * n2 + j, b * n2 + j, w))
    labels = None
    if X1.labels is not None or X2.labels is not None:
        labels = [f"({X1.label(i)},{X2.label(j)})" for i in range(X1.n) for j in range(n2)]
    return Graph.from_edges(X1.n * n2, edges, labels)


def incidence_matrix(X: Graph) -> np.ndarray:
    """The ``n x m`` 0/1 vertex-edge incidence matrix (integer dtype)."""
    X.require_unweighted("incidence_matrix")
    R = np.zeros((X.n, X.m), dtype=np.int64)
    for k, (u, v, _) in enumerate(X.edges):
        R[u, k] = R[v, k] = 1
    return _readonly(R)


def line_graph(X: Graph) -> tuple[Graph, dict]:
    """Line graph of an unweighted connected graph.

    Returns the line graph and the map edge id -> line-graph vertex (the
    identity under canonical ordering, returned explicitly for clarity).
    """
    X.require_unweighted("line_graph")
    X.require_connected("line_graph")
    if X.m == 0:
        raise GraphError("line graph of an edgeless graph is empty")
    R = incidence_matrix(X)
    AL = R.T @ R - 2 * np.eye(X.m, dtype=np.int64)
    edges = [(i, j) for i in range(X.m) for j in range(i + 1, X.m) if AL[i, j]]
    labels = [f"{X.label(u)}-{X.label(v)}" for u, v, _ in X.edges]
    return Graph.from_edges(X.m, edges, labels), {k: k for k in range(X.m)}


# --- structure queries -----------------------------------------------------

def bipartition(X: Graph) -> tuple[frozenset, frozenset] | None:
    """Colour classes of a connected bipartite graph, or None.

    The class containing vertex 0 comes first.
    """
    colour = [-1] * X.n
    for root in range(X.n):
        if colour[root] >= 0:
            continue
        colour[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in X.neighbors(u):
                if colour[v] < 0:
                    colour[v] = 1 - colour[u]
                    queue.append(v)
                elif colour[v] == colour[u]:
                    return None
    side0 = frozenset(v for v in range(X.n) if colour[v] == 0)
    return side0, frozenset(range(X.n)) - side0


def is_bipartite(X: Graph) -> bool:
    return bipartition(X) is not None


def is_tree(X: Graph) -> bool:
    return X.m == X.n - 1 and X.is_connected()


def unicyclic_parity(X: Graph) -> str | None:
    """'odd' or 'even' for a connected unicyclic graph, else None."""
    if X.m != X.n or not X.is_connected():
        return None
    return "even" if is_bipartite(X) else "odd"


def cut_edges(X: Graph) -> frozenset[int]:
    """Edge ids of the bridges of X."""
    return frozenset(X.edge_id(u, v) for u, v in nx.bridges(X.to_networkx()))


def _without(X: Graph, eids: Iterable[int]) -> nx.Graph:
    G = X.to_networkx()
    for k in eids:
        G.remove_edge(*X.endpoints(k))
    return G


def is_edge_cut(X: Graph, e1: int, e2: int) -> bool:
    """True iff deleting edges ``e1`` and ``e2`` disconnects X."""
    return not nx.is_connected(_without(X, {e1, e2}))


def removal_leaves_bipartite_or_disconnected(X: Graph, e1: int, e2: int) -> bool:
    G = _without(X, {e1, e2})
    return not nx.is_connected(G) or nx.is_bipartite(G)


@dataclass(frozen=True)
class StructureInfo:
    bipartition: tuple | None
    is_tree: bool
    unicyclic: str | None
    cut_edges: frozenset

    @property
    def is_bipartite(self) -> bool:
        return self.bipartition is not None


def structure(X: Graph) -> StructureInfo:
    X.require_connected("structure")
    return StructureInfo(bipartition(X), is_tree(X), unicyclic_parity(X), cut_edges(X))


def distance_matrix(X: Graph) -> np.ndarray:
    """Hop distances (weights ignored); ``inf`` between components."""
    D = shortest_path((X.adjacency() != 0).astype(float), unweighted=True, directed=False)
    return D


def distance(X: Graph, a: int, b: int) -> int:
    d = distance_matrix(X)[a, b]
    if not np.isfinite(d):
        raise GraphError(f"vertices {a} and {b} are in different components")
    return int(d)


def covering_radius(X: Graph, vertices: Iterable[int]) -> int:
    """Smallest r such that every vertex is within distance r of the set."""
    X.require_connected("covering_radius")
    D = distance_matrix(X)
    return int(D[list(vertices)].min(axis=0).max())


@dataclass(frozen=True)
class DistanceStructure:
    matrices: tuple  # A_0 .. A_d as int arrays
    k: tuple  # column sums
    diameter: int
    antipodal_class2: bool
    # A_j A_d == A_{d-j} for all j; None unless antipodal_class2
    antipodal_identity: bool | None = None

    def __getitem__(self, j: int) -> np.ndarray:
        return self.matrices[j]


def distance_structure(X: Graph) -> DistanceStructure:
    X.require_connected("distance_structure")
    X.require_unweighted("distance_structure")
    D = distance_matrix(X).astype(int)
    d = int(D.max())
    mats = tuple(_readonly((D == j).astype(np.int64)) for j in range(d + 1))
    k = tuple(int(Aj[:, 0].sum()) for Aj in mats)
    Ad = mats[d]
    antipodal = d > 0 and bool(np.all(Ad.sum(axis=0) == 1))
    identity = None
    if antipodal:
        identity = all(np.array_equal(mats[j] @ Ad, mats[d - j]) for j in range(d + 1))
    return DistanceStructure(mats, k, d, antipodal, identity)
