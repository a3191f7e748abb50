import random

import pytest

from conftest import corpus_graph, corpus_rules, graph
from termgraph import (Cone, Signature, TermGraph, ValidationError,
                       brute_force_initiality, build_result, check_cone,
                       mediating_morphism)
from termgraph.verify import BudgetError, harness_cones

CLONE = corpus_rules("clone.tgr")
CIRC = corpus_rules("circular.tgr")
FAG = graph("1: f(2); 2: a;")
IDM = {"1": "1", "2": "2"}

FIXTURES = [
    ("clone.tgr", "rule1", "clone.tg"),
    ("clone.tgr", "rule2", "clone.tg"),
    ("clone.tgr", "plain", "clone.tg"),
    ("ite.tgr", "if-true", "ite_true.tg"),
    ("ite.tgr", "if-false", "ite_false.tg"),
    ("insertion.tgr", "insert", "insertion.tg"),
    ("free.tgr", "free-cons", "free.tg"),
    ("free.tgr", "free-last", "free_last.tg"),
    ("free.tgr", "free-single", "free_single.tg"),
    ("circular.tgr", "collapse-clone", "circular.tg"),
    ("naturals.tgr", "clone-succ", "naturals.tg"),
    ("append.tgr", "append-start", "append.tg"),
]


def built(rules, name, gfile, k=0):
    from termgraph import find_matchings
    t = corpus_rules(rules)[name]
    g = corpus_graph(gfile)
    m = find_matchings(t, g)[k]
    return t, m, g, build_result(t, m, g, check=False)


@pytest.mark.parametrize("rules, name, gfile", FIXTURES)
def test_built_result_is_a_cone(rules, name, gfile):
    t, m, g, r = built(rules, name, gfile)
    assert check_cone(t, m, g, Cone.of(r)) == []


@pytest.mark.parametrize("rules, name, gfile", FIXTURES)
def test_mediating_morphisms_to_harness_cones(rules, name, gfile):
    t, m, g, r = built(rules, name, gfile)
    cones = harness_cones(t, m, g, r, count=20, rng=random.Random(1))
    assert len(cones) == 20
    for c in cones:
        eta = mediating_morphism(t, m, g, r, c)
        assert all(eta[r.tau1[x]] == c.tau1[x] for x in g.nodes)
        assert all(eta[r.d[y]] == c.d[y] for y in t.rhs.nodes)


def test_renamed_cone_is_a_cone_and_eta_is_the_renaming():
    t, m, g, r = built("clone.tgr", "rule2", "clone.tg")
    beta = {"1": "x", "2": "y", "3": "z"}
    other = Cone.of(r).rename(beta)
    assert check_cone(t, m, g, other) == []
    assert mediating_morphism(t, m, g, r, other) == beta


def test_identity_to_itself():
    t, m, g, r = built("insertion.tgr", "insert", "insertion.tg")
    eta = mediating_morphism(t, m, g, r, Cone.of(r))
    assert eta == {n: n for n in r.graph.nodes}


def test_junk_extension_gives_non_surjective_eta():
    t, m, g, r = built("clone.tgr", "rule1", "clone.tg")
    h2 = TermGraph(r.graph.nodes | {"j"}, r.graph.labels, r.graph.successors)
    other = Cone(h2, r.tau1, r.d, r.sigma1)
    eta = mediating_morphism(t, m, g, r, other)
    assert "j" not in eta.values()


def test_dropping_a_sigma1_entry_breaks_the_cone():
    t, m, g, r = built("clone.tgr", "rule2", "clone.tg")
    sigma1 = dict(r.sigma1)
    sigma1.pop("3")
    report = check_cone(t, m, g, Cone(r.graph, r.tau1, r.d, sigma1))
    assert "sigma-domain" in {v.code for v in report}


def test_non_cone_rejected_by_mediation():
    t, m, g, r = built("clone.tgr", "rule2", "clone.tg")
    bad = Cone(r.graph, r.tau1, r.d, {})
    with pytest.raises(ValidationError):
        mediating_morphism(t, m, g, r, bad)


def test_context_must_stay_graphic():
    t, m, g, r = built("ite.tgr", "if-true", "ite_true.tg")
    # send the context node 0:h(...) to the unlabeled... there is none, so relabel
    h2 = TermGraph(r.graph.nodes, {**r.graph.labels, "0": "k"}, r.graph.successors)
    report = check_cone(t, m, g, Cone(h2, r.tau1, r.d, r.sigma1))
    assert "tau1-context" in {v.code for v in report}


def test_without_sigma_no_sigma_clause_fires():
    t, m, g, r = built("clone.tgr", "plain", "clone.tg")
    # any sigma1 entry on the plain cone must still be a clone
    report = check_cone(t, m, g, Cone.of(r))
    assert report == [] and r.sigma1 == {}


def test_brute_force_circular():
    t, m, g, r = built("circular.tgr", "collapse-clone", "circular.tg")
    rep = brute_force_initiality(t, m, g, r, 2, Signature({"f": 1}))
    assert rep.ok and rep.cones_checked > 0


def test_brute_force_plain():
    t, m, g, r = built("clone.tgr", "plain", "clone.tg")
    rep = brute_force_initiality(t, m, g, r, 2, Signature({"f": 1, "g": 2, "a": 0}))
    assert rep.ok and rep.cones_checked > 0


def test_brute_force_budget_zero():
    t, m, g, r = built("clone.tgr", "plain", "clone.tg")
    rep = brute_force_initiality(t, m, g, r, 0, Signature({"f": 1}))
    assert rep.ok and rep.cones_checked == 0


def test_brute_force_refuses_large_budget():
    t, m, g, r = built("insertion.tgr", "insert", "insertion.tg")
    with pytest.raises(BudgetError) as exc:
        brute_force_initiality(t, m, g, r, 6, Signature({"cons": 2, "h": 2}))
    assert exc.value.estimate > 2_000_000
