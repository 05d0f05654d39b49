import numpy as np
import pytest

from gcl_divergence import synth
from gcl_divergence.embedding import Embedding
from gcl_divergence.graph import Graph, parse_edge_list


@pytest.fixture(scope="session")
def karate():
    return synth.karate()


@pytest.fixture
def two_triangles():
    # triangles {0,1,2} and {3,4,5} joined by the bridge 2-3
    return parse_edge_list("0 1\n1 2\n0 2\n2 3\n3 4\n4 5\n3 5\n")


@pytest.fixture
def path3():
    return parse_edge_list("a b\nb c\n")


@pytest.fixture
def k4():
    return Graph.from_edges(list("abcd"), [(i, j) for i in range(4) for j in range(i + 1, 4)])


def line_embedding(n, name="line"):
    return Embedding(np.arange(n, dtype=float)[:, None], name)


ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, title: str, ok: bool, detail: str) -> bool:
    line = f"criterion {criterion:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
