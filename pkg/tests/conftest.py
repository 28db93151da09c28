import numpy as np
import pytest
from hypothesis import strategies as st

from spanexcess.graph import Graph, is_connected


@st.composite
def graphs(draw, min_n=1, max_n=9, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for v in range(n) for u in range(v)]
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [e for e, keep in zip(pairs, bits) if keep]
    if connected:
        # a random spanning path guarantees connectivity
        order = draw(st.permutations(range(n)))
        edges += [(min(a, c), max(a, c)) for a, c in zip(order, order[1:])]
    return Graph.from_edges(n, set(edges))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
