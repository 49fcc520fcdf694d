import itertools
import random

import pytest

from trackpaths.graph import build_graph

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_graph(rng: random.Random, n: int, p: float, connected_st: bool = True):
    """G(n, p) on 0..n-1 with s=0, t=n-1; retried until s reaches t when asked."""
    while True:
        edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
        g = build_graph(edges, 0, n - 1, vertices=range(n))
        if not connected_st:
            return g
        seen, stack = {0}, [0]
        while stack:
            for w in g.neighbors(stack.pop()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if n - 1 in seen:
            return g


@pytest.fixture
def rng():
    return random.Random(12345)
