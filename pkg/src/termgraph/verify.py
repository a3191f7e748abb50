"""Independent checks of the categorical side conditions of a rewrite step.

``check_cone`` decides whether a tuple ``(h, tau1, d, sigma1)`` is a cloning
cone over a rule and a matching. ``mediating_morphism`` computes the forced
node map from the built result to another cone and checks that it is a
morphism of cones. ``brute_force_initiality`` enumerates every cone up to a
node budget and checks that each one receives exactly one morphism.

Harness cones used by the self-tests (``harness_cones``) are built from the
result by:

* renaming every node by a random bijection;
* adding an isolated unlabeled junk node;
* adding a labeled junk node pointing into the graph;
* collapsing two nodes (an unlabeled node onto any other node, keeping
  sigma1 well defined), kept only when the collapse is again a cone.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import DomainError, ValidationError, Violation
from .graph import (NodeMap, Signature, TermGraph, graphic_at, is_graphic_on,
                    is_tau_clone, underlies_morphism)
from .rules import RewriteRule, check_rule_morphism, validate_rule


@dataclass(frozen=True)
class Cone:
    h: TermGraph
    tau1: Dict[str, str]
    d: Dict[str, str]
    sigma1: Dict[str, str] = field(default_factory=dict)

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def of(cls, result) -> "Cone":
        return cls(result.graph, dict(result.tau1), dict(result.d), dict(result.sigma1))

    def rename(self, beta: Mapping[str, str]) -> "Cone":
        return Cone(self.h.rename(beta),
                    {k: beta[v] for k, v in self.tau1.items()},
                    {k: beta[v] for k, v in self.d.items()},
                    {beta[k]: v for k, v in self.sigma1.items()})


def _total_into(f: Mapping[str, str], src: TermGraph, dst: TermGraph) -> bool:
    return set(f) == set(src.nodes) and all(v in dst.nodes for v in f.values())


def check_cone(t: RewriteRule, m: NodeMap, g: TermGraph, c: Cone) -> List[Violation]:
    """Every violated cloning-cone condition; empty means ``c`` is a cone."""
    report: List[Violation] = []
    h = c.h
    if not _total_into(c.tau1, g, h):
        return [Violation("tau1-not-total", "tau1 is not a total function graph -> result")]
    if not _total_into(c.d, t.rhs, h):
        return [Violation("d-not-total", "d is not a total function rhs -> result")]
    for n1, q in sorted(c.sigma1.items()):
        if n1 not in h.nodes or q not in g.nodes:
            return [Violation("sigma1-range", f"sigma1 entry {n1} -> {q} is out of range")]

    if not underlies_morphism(c.d, t.rhs, h):
        bad = [n for n in t.rhs.sorted_nodes() if not graphic_at(c.d, t.rhs, h, n)]
        report.append(Violation(
            "d-not-morphism", f"d is not graphic at rhs node(s) {', '.join(bad)}", tuple(bad)))
    t1 = RewriteRule("step", g, h, c.tau1, c.sigma1)
    for v in validate_rule(t1):
        report.append(Violation("result-rule", f"(g, h, tau1, sigma1) is not a rule: {v}", v.nodes))
    if not report:
        for p in t.lhs.sorted_nodes():
            if c.d[t.tau[p]] != c.tau1[m[p]]:
                report.append(Violation(
                    "square", f"d(tau({p})) != tau1(m({p}))", (p,)))
        for n in sorted(t.sigma):
            if c.d[n] not in c.sigma1:
                report.append(Violation(
                    "sigma-domain",
                    f"d({n}) = {c.d[n]} is not in the domain of sigma1", (n,)))
            elif c.sigma1[c.d[n]] != m[t.sigma[n]]:
                report.append(Violation(
                    "sigma-square", f"sigma1(d({n})) != m(sigma({n}))", (n,)))
        if not report and not check_rule_morphism(m, c.d, t, t1):
            report.append(Violation("rule-morphism", "(m, d) is not a rule morphism"))
    gamma = sorted(g.nodes - set(m.values()))
    bad = [n for n in gamma if not graphic_at(c.tau1, g, h, n)]
    if bad:
        report.append(Violation(
            "tau1-context", f"tau1 is not graphic at context node(s) {', '.join(bad)}",
            tuple(bad)))
    for n1, q in sorted(c.sigma1.items()):
        if not is_tau_clone(n1, q, c.tau1, g, h):
            report.append(Violation(
                "sigma1-clone", f"{n1} is not a τ1-clone of {q}", (n1, q)))
    return report


class MediationError(Exception):
    def __init__(self, report: Sequence[Violation]):
        self.report = list(report)
        super().__init__("; ".join(map(str, self.report)))


def mediating_morphism(t: RewriteRule, m: NodeMap, g: TermGraph, built,
                       other: Cone) -> Dict[str, str]:
    """The unique cone morphism from ``built`` to ``other``.

    Every node of the built result is ``tau1(x)`` or ``d(y)``, so its image
    is forced to be ``other.tau1(x)`` or ``other.d(y)``. Raises
    :class:`MediationError` naming the first failed clause.
    """
    report = check_cone(t, m, g, other)
    if report:
        raise ValidationError(report, "not a cloning cone")
    h, h2 = built.graph, other.h
    forced: Dict[str, set] = {x: set() for x in h.nodes}
    for x, y in built.tau1.items():
        forced[y].add(other.tau1[x])
    for x, y in built.d.items():
        forced[y].add(other.d[x])
    eta: Dict[str, str] = {}
    for x in h.sorted_nodes():
        images = forced[x]
        if not images:
            raise MediationError([Violation("not-forced", f"{x} is outside image(tau1) ∪ image(d)", (x,))])
        if len(images) > 1:
            raise MediationError([Violation(
                "not-well-defined", f"images of {x} disagree: {sorted(images)}", (x,))])
        eta[x] = next(iter(images))

    dec = built.decomposition
    regions = (
        ("context", {built.tau1[n] for n in dec.gamma}),
        ("rhs", {built.d[n] for n in dec.delta_nodes}),
        ("clone", set(built.sigma1)),
        ("all", set(h.nodes)),
    )
    for name, nodes in regions:
        if not is_graphic_on(eta, h, h2, nodes):
            bad = sorted(n for n in nodes if not graphic_at(eta, h, h2, n))
            raise MediationError([Violation(
                "not-graphic", f"eta is not graphic on the {name} region at {bad}", tuple(bad))])
    for n1, q in sorted(built.sigma1.items()):
        if eta[n1] not in other.sigma1:
            raise MediationError([Violation(
                "sigma1-domain", f"eta({n1}) = {eta[n1]} is not in the domain of sigma1'", (n1,))])
        if other.sigma1[eta[n1]] != q:
            raise MediationError([Violation(
                "sigma1-square", f"sigma1'(eta({n1})) != sigma1({n1})", (n1,))])
    return eta


def is_cone_morphism(eta: NodeMap, built, other: Cone) -> bool:
    h, h2 = built.graph, other.h
    if not underlies_morphism(eta, h, h2):
        return False
    if any(eta[y] != other.tau1[x] for x, y in built.tau1.items()):
        return False
    if any(eta[y] != other.d[x] for x, y in built.d.items()):
        return False
    return all(eta[n1] in other.sigma1 and other.sigma1[eta[n1]] == q
               for n1, q in built.sigma1.items())


def harness_cones(t: RewriteRule, m: NodeMap, g: TermGraph, built, count: int = 20,
                  rng: Optional[random.Random] = None) -> List[Cone]:
    """``count`` cones derived from ``built`` (see the module docstring)."""
    rng = rng or random.Random(0)
    base = Cone.of(built)
    h = base.h
    nodes = h.sorted_nodes()
    out: List[Cone] = []
    junk = "junk"
    while junk in h.nodes:
        junk += "'"
    kinds = ["rename", "junk", "labeled-junk", "collapse"]
    attempts = 0
    while len(out) < count and attempts < 20 * count:
        attempts += 1
        kind = kinds[attempts % len(kinds)]
        if kind == "rename":
            fresh = [f"v{i}" for i in range(len(nodes))]
            rng.shuffle(fresh)
            out.append(base.rename(dict(zip(nodes, fresh))))
            continue
        if kind == "junk":
            h2 = TermGraph(h.nodes | {junk}, h.labels, h.successors)
            out.append(Cone(h2, base.tau1, base.d, base.sigma1))
            continue
        if kind == "labeled-junk":
            if not nodes:
                continue
            h2 = TermGraph(h.nodes | {junk}, {**h.labels, junk: "junk"},
                           {**h.successors, junk: (rng.choice(nodes),)})
            out.append(Cone(h2, base.tau1, base.d, base.sigma1))
            continue
        unlabeled = [n for n in nodes if not h.is_labeled(n)]
        if not unlabeled or len(nodes) < 2:
            continue
        x = rng.choice(unlabeled)
        y = rng.choice([n for n in nodes if n != x])
        collapsed = _collapse(base, x, y)
        if collapsed is not None and not check_cone(t, m, g, collapsed):
            out.append(collapsed)
    return out


def _collapse(c: Cone, x: str, y: str) -> Optional[Cone]:
    """Identify unlabeled node ``x`` with ``y``; None if sigma1 would clash."""
    if x in c.sigma1 and y in c.sigma1 and c.sigma1[x] != c.sigma1[y]:
        return None
    f = {n: (y if n == x else n) for n in c.h.nodes}
    h2 = TermGraph(c.h.nodes - {x},
                   {n: s for n, s in c.h.labels.items()},
                   {n: tuple(f[s] for s in ss) for n, ss in c.h.successors.items()})
    sigma1 = {f[n]: q for n, q in c.sigma1.items()}
    return Cone(h2, {k: f[v] for k, v in c.tau1.items()},
                {k: f[v] for k, v in c.d.items()}, sigma1)


@dataclass
class InitialityReport:
    cones_checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


class BudgetError(DomainError):
    def __init__(self, estimate: int, limit: int):
        self.estimate = estimate
        super().__init__(
            f"brute-force search space has about {estimate} candidates (limit {limit})")


def _graphs_over(names: Sequence[str], sig: Signature) -> Iterator[TermGraph]:
    options = [None] + [(s, args) for s in sig.symbols()
                        for args in itertools.product(names, repeat=sig.arity(s))]
    for choice in itertools.product(options, repeat=len(names)):
        labels = {n: o[0] for n, o in zip(names, choice) if o is not None}
        succ = {n: o[1] for n, o in zip(names, choice) if o is not None}
        yield TermGraph(frozenset(names), labels, succ)


def search_space_size(t: RewriteRule, m: NodeMap, g: TermGraph,
                      node_budget: int, sig: Signature) -> int:
    n_gamma = len(g.nodes - set(m.values()))
    total = 0
    for k in range(node_budget + 1):
        per_node = 1 + sum(k ** sig.arity(s) for s in sig.symbols())
        total += per_node ** k * k ** len(t.rhs.nodes) * k ** n_gamma * (len(g.nodes) + 1) ** k
    return total


def brute_force_initiality(t: RewriteRule, m: NodeMap, g: TermGraph, built,
                           node_budget: int, sig: Signature,
                           limit: int = 2_000_000) -> InitialityReport:
    """Check initiality of ``built`` against every cone with few nodes.

    Enumerates every graph over ``sig`` with at most ``node_budget`` nodes,
    every ``d'`` and ``tau1'`` making the square commute and every partial
    ``sigma1'``; each candidate passing :func:`check_cone` must receive
    exactly one cone morphism, and it must equal :func:`mediating_morphism`.
    """
    estimate = search_space_size(t, m, g, node_budget, sig)
    if estimate > limit:
        raise BudgetError(estimate, limit)
    report = InitialityReport()
    rhs_nodes = t.rhs.sorted_nodes()
    g_nodes = g.sorted_nodes()
    matched = set(m.values())
    gamma = [n for n in g_nodes if n not in matched]
    h_nodes = built.graph.sorted_nodes()
    for k in range(node_budget + 1):
        names = [f"h{i}" for i in range(k)]
        for h2 in _graphs_over(names, sig):
            for d_img in itertools.product(names, repeat=len(rhs_nodes)):
                d2 = dict(zip(rhs_nodes, d_img))
                if not underlies_morphism(d2, t.rhs, h2):
                    continue
                forced: Dict[str, str] = {}
                if any(forced.setdefault(m[p], d2[t.tau[p]]) != d2[t.tau[p]] for p in t.lhs.nodes):
                    continue
                for g_img in itertools.product(names, repeat=len(gamma)):
                    tau1 = {**forced, **dict(zip(gamma, g_img))}
                    for s_img in itertools.product([None] + g_nodes, repeat=k):
                        sigma1 = {n: q for n, q in zip(names, s_img) if q is not None}
                        cone = Cone(h2, tau1, d2, sigma1)
                        if check_cone(t, m, g, cone):
                            continue
                        report.cones_checked += 1
                        _check_initial(t, m, g, built, cone, h_nodes, names, report)
    return report


def _check_initial(t, m, g, built, cone: Cone, h_nodes, names, report) -> None:
    try:
        eta = mediating_morphism(t, m, g, built, cone)
    except MediationError as exc:
        report.failures.append(f"{cone.h!r}: {exc}")
        return
    morphisms = [dict(zip(h_nodes, img))
                 for img in itertools.product(names, repeat=len(h_nodes))
                 if is_cone_morphism(dict(zip(h_nodes, img)), built, cone)]
    if morphisms != [eta]:
        report.failures.append(
            f"{cone.h!r}: {len(morphisms)} cone morphisms, mediating {eta}")
