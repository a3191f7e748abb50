import sys
from pathlib import Path

import pytest

from termgraph import corpus_path, parse_graph, parse_rules

sys.path.insert(0, str(Path(__file__).parent))


def graph(body: str):
    """Parse a bare graph body such as ``"1: f(2); 2: a;"``."""
    return parse_graph("graph G { " + body + " }")


def corpus_rules(name: str):
    return {t.name: t for t in parse_rules(corpus_path(name).read_text())}


def corpus_graph(name: str):
    return parse_graph(corpus_path(name).read_text())


@pytest.fixture
def g1():
    return corpus_graph("g1.tg")


@pytest.fixture
def g2():
    return corpus_graph("g2.tg")


# acceptance summary ---------------------------------------------------------

_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _ACCEPTANCE.append((report.nodeid.split("::", 1)[1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}")
