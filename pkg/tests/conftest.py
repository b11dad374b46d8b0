import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from zeroerror.graphs import Graph

settings.register_profile(
    "default",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, keep in zip(pairs, mask) if keep])


def random_graph(rng: np.random.Generator, n: int, p: float = 0.5) -> Graph:
    return Graph.from_edges(n, [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p])


def brute_alpha(g: Graph) -> int:
    """Plain branching on the lowest vertex (take it or drop it), no bounding."""
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def best(cand: int) -> int:
        if not cand:
            return 0
        v = (cand & -cand).bit_length() - 1
        return max(best(cand & ~(1 << v)), 1 + best(cand & ~g.rows[v] & ~(1 << v)))

    return best((1 << g.n) - 1)


def brute_chi(g: Graph) -> int:
    if g.n == 0:
        return 0
    for k in range(1, g.n + 1):
        for colors in itertools.product(range(k), repeat=g.n):
            if all(colors[u] != colors[v] for u, v in g.edges()):
                return k
    raise AssertionError("unreachable")


def brute_edge_cover(g: Graph) -> int:
    """Minimum number of cliques covering all edges, by enumerating clique families."""
    edges = g.edges()
    if not edges:
        return 0
    cliques = [c for r in range(2, g.n + 1) for c in itertools.combinations(range(g.n), r) if g.is_clique(c)]
    for k in range(1, len(edges) + 1):
        for fam in itertools.combinations(cliques, k):
            covered = {e for c in fam for e in itertools.combinations(c, 2)}
            if all(e in covered for e in edges):
                return k
    raise AssertionError("unreachable")


@pytest.fixture
def p3():
    return Graph.from_edges(3, [(0, 1), (1, 2)])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
