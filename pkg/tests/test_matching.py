import random

import pytest

from conftest import corpus_rules, graph
from oracles import brute_matchings, random_graph, random_rule
from termgraph import (DomainError, RewriteRule, TermGraph, check_matching,
                       find_matchings)

CIRC = corpus_rules("circular.tgr")
RULE1 = corpus_rules("clone.tgr")["rule1"]


def test_rule1_identity_matching():
    g = graph("1: f(2); 2: a;")
    assert check_matching(RULE1, {"1": "1", "2": "2"}, g) == []
    assert find_matchings(RULE1, g) == [{"1": "1", "2": "2"}]


def test_circular_redex_with_clone_matches():
    g = graph("n: f(n);")
    m = {"n": "n", "m": "n"}
    assert check_matching(CIRC["collapse-clone"], m, g) == []
    assert find_matchings(CIRC["collapse-clone"], g) == [m]


def test_circular_redex_without_clone_rejected():
    g = graph("n: f(n);")
    report = check_matching(CIRC["collapse-plain"], {"n": "n", "m": "n"}, g)
    assert [v.code for v in report] == ["forbidden-collision"]
    assert "outside the domain of sigma" in str(report[0])
    assert find_matchings(CIRC["collapse-plain"], g) == []


def test_no_matching_in_empty_graph():
    assert find_matchings(RULE1, TermGraph()) == []


def test_not_a_morphism_reported():
    g = graph("1: g(2,2); 2: a;")
    report = check_matching(RULE1, {"1": "1", "2": "2"}, g)
    assert [v.code for v in report] == ["not-a-morphism"]


def test_precondition():
    with pytest.raises(DomainError):
        check_matching(RULE1, {"1": "1"}, graph("1: f(2); 2: a;"))


def test_order_is_lexicographic():
    t = RewriteRule("any", graph("x: _;"), graph("x: _;"), {"x": "x"})
    assert find_matchings(t, graph("b: _; a: _; c: a;")) == [
        {"x": "a"}, {"x": "b"}, {"x": "c"}]


def test_agrees_with_brute_force():
    rng = random.Random(2024)
    sig = {"f": 1, "g": 2}
    total = nonempty = 0
    for _ in range(1500):
        t = random_rule(rng, max_lhs=4, max_rhs=3, sig=sig)
        g = random_graph(rng, [f"v{i}" for i in range(rng.randint(1, 5))], sig)
        ours = find_matchings(t, g)
        assert ours == brute_matchings(t, g)
        for m in ours:
            assert check_matching(t, m, g) == []
        total += 1
        nonempty += bool(ours)
    assert nonempty > 150


def test_empty_sigma_matchings_injective():
    rng = random.Random(5)
    for _ in range(500):
        t = random_rule(rng)
        t = RewriteRule(t.name, t.lhs, t.rhs, t.tau, {})
        g = random_graph(rng, [f"v{i}" for i in range(rng.randint(1, 5))])
        for m in find_matchings(t, g):
            assert len(set(m.values())) == len(m)
