"""graph6 (short form) and plain edge-list readers and writers."""

from __future__ import annotations

from typing import Iterable

from .graph import Graph, GraphError

_PREFIX = ">>graph6<<"


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 line (at most 62 vertices)."""
    s = text.strip()
    if s.startswith(_PREFIX):
        s = s[len(_PREFIX):]
    if not s:
        raise GraphError("empty graph6 string")
    data = []
    for ch in s:
        v = ord(ch) - 63
        if not 0 <= v <= 63:
            raise GraphError(f"invalid graph6 character {ch!r}")
        data.append(v)
    n = data[0]
    if n == 63:
        raise GraphError("graph6 long form (n > 62) is not supported")
    if n == 0:
        raise GraphError("graph6 graph with no vertices")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[1:]
    if len(body) != need:
        raise GraphError(f"graph6 body has {len(body)} bytes, expected {need} for n={n}")
    bits = [(byte >> (5 - k)) & 1 for byte in body for k in range(6)]
    if any(bits[nbits:]):
        raise GraphError("graph6 padding bits are not zero")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges)


def to_graph6(X: Graph) -> str:
    """Encode an unweighted graph in graph6 short form."""
    X.require_unweighted("graph6")
    if X.n > 62:
        raise GraphError("graph6 short form holds at most 62 vertices")
    bits = [1 if X.has_edge(i, j) else 0 for j in range(1, X.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(X.n + 63)]
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k:k + 6]:
            v = (v << 1) | b
        out.append(chr(v + 63))
    return "".join(out)


def parse_edge_list(text: str, n: int | None = None) -> Graph:
    """Parse ``u v [w]`` lines (0-based, ``#`` starts a comment).

    The vertex count is ``n`` if given, else one more than the largest index.
    """
    edges = []
    seen = set()
    top = -1
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) not in (2, 3):
            raise GraphError(f"line {lineno}: expected 'u v [w]', got {raw!r}")
        try:
            u, v = int(toks[0]), int(toks[1])
            w = float(toks[2]) if len(toks) == 3 else 1.0
        except ValueError:
            raise GraphError(f"line {lineno}: cannot parse {raw!r}") from None
        if u < 0 or v < 0:
            raise GraphError(f"line {lineno}: negative vertex index")
        if w <= 0:
            raise GraphError(f"line {lineno}: weight must be positive, got {w}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphError(f"line {lineno}: duplicate edge {key}")
        seen.add(key)
        top = max(top, u, v)
        edges.append((u, v, w))
    if n is None:
        n = top + 1
    if n < 1:
        raise GraphError("edge list defines no vertices")
    return Graph.from_edges(n, edges)


def to_edge_list(X: Graph) -> str:
    lines = []
    for u, v, w in X.edges:
        lines.append(f"{u} {v}" if w == 1.0 else f"{u} {v} {w!r}")
    return "\n".join(lines) + ("\n" if lines else "")


def read_graph6_lines(lines: Iterable[str]):
    """Yield ``(line_number, Graph | GraphError)`` for each non-blank line."""
    for k, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            yield k, parse_graph6(line)
        except GraphError as exc:
            yield k, exc


def connected_graph6(max_n: int, min_n: int = 2) -> list[str]:
    """graph6 strings of all connected graphs on min_n..max_n vertices (max_n <= 7), atlas order."""
    import networkx as nx

    if max_n > 7:
        raise ValueError("the graph atlas covers at most 7 vertices")
    out = []
    for G in nx.graph_atlas_g():
        n = G.number_of_nodes()
        if min_n <= n <= max_n and nx.is_connected(G):
            out.append(to_graph6(Graph.from_edges(n, G.edges())))
    return out


def connected_graphs(max_n: int, min_n: int = 2) -> list[Graph]:
    return [parse_graph6(s) for s in connected_graph6(max_n, min_n)]
