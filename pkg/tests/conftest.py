import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from pairwalk.graph import Graph
from pairwalk.tolerances import DEFAULT

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def connected_graphs(draw, min_n=2, max_n=7):
    """Random connected simple graphs: a random tree plus random extra edges."""
    n = draw(st.integers(min_n, max_n))
    edges = set()
    for v in range(1, n):
        u = draw(st.integers(0, v - 1))
        edges.add((u, v))
    others = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in edges]
    if others:
        extra = draw(st.lists(st.sampled_from(others), unique=True, max_size=len(others)))
        edges |= set(extra)
    perm = draw(st.permutations(range(n)))
    return Graph.from_edges(n, [(perm[u], perm[v]) for u, v in edges])


nonzero_s = st.one_of(
    st.sampled_from([1.0, -1.0, 2.0, -2.0, 0.5, -0.5, 3.0]),
    st.floats(0.1, 10.0).flatmap(lambda x: st.sampled_from([x, -x])),
)


@pytest.fixture
def tol():
    return DEFAULT


def unit(n, *pairs):
    """sum c e_v, normalised; pairs are (v, c)."""
    v = np.zeros(n)
    for k, c in pairs:
        v[k] += c
    return v / np.linalg.norm(v)


PI = math.pi


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
