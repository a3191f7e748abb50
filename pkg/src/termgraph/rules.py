"""Rewrite rules ``(lhs, rhs, tau, sigma)`` and their well-formedness."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional

from .errors import Violation
from .graph import (NodeMap, Signature, TermGraph, is_tau_clone,
                    underlies_morphism, validate_graph)


@dataclass(frozen=True)
class RewriteRule:
    """A rule with a left- and right-hand side.

    ``tau`` is total from lhs nodes to rhs nodes and says where the incoming
    edges of each lhs node are redirected. ``sigma`` is partial from rhs
    nodes to lhs nodes and marks rhs nodes that are clones of (the images
    of) lhs nodes.
    """

    name: str
    lhs: TermGraph
    rhs: TermGraph
    tau: Mapping[str, str]
    sigma: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "tau", dict(self.tau))
        object.__setattr__(self, "sigma", dict(self.sigma))

    __hash__ = None  # type: ignore[assignment]


def validate_rule(t: RewriteRule, sig: Optional[Signature] = None) -> List[Violation]:
    """Every violated rule condition; an empty list means ``t`` is valid."""
    report: List[Violation] = []
    if sig is None:
        try:
            sig = Signature.infer([t.lhs, t.rhs])
        except ValueError as exc:
            report.append(Violation("arity-mismatch", f"rule {t.name}: {exc}"))
    for side, g in (("lhs", t.lhs), ("rhs", t.rhs)):
        for v in validate_graph(g, sig):
            report.append(Violation(v.code, f"{side}: {v.message}", v.nodes))
    if report:
        return report

    L, R = t.lhs, t.rhs
    for n in sorted(L.nodes - set(t.tau)):
        report.append(Violation("tau-not-total", f"tau is undefined at lhs node {n}", (n,)))
    for n in sorted(set(t.tau) - L.nodes):
        report.append(Violation("tau-domain", f"tau is defined at {n}, not an lhs node", (n,)))
    for n in sorted(set(t.tau) & L.nodes):
        if t.tau[n] not in R.nodes:
            report.append(Violation(
                "tau-range", f"tau({n}) = {t.tau[n]} is not an rhs node", (n, t.tau[n])))
    for n in sorted(t.sigma):
        q = t.sigma[n]
        if n not in R.nodes:
            report.append(Violation("sigma-domain", f"sigma is defined at {n}, not an rhs node", (n,)))
        elif q not in L.nodes:
            report.append(Violation(
                "sigma-range", f"sigma({n}) = {q} is not an lhs node", (n, q)))
    if report:
        return report

    for n in sorted(t.sigma):
        q = t.sigma[n]
        if R.is_labeled(n) and not is_tau_clone(n, q, t.tau, L, R):
            report.append(Violation(
                "not-a-clone", f"{n} is labeled but not a τ-clone of {q}", (n, q)))
    return report


def check_rule_morphism(m: NodeMap, d: NodeMap, t: RewriteRule, t1: RewriteRule) -> bool:
    """Whether ``(m, d)`` is a morphism of rules from ``t`` to ``t1``."""
    if not (underlies_morphism(m, t.lhs, t1.lhs) and underlies_morphism(d, t.rhs, t1.rhs)):
        return False
    for p in t.lhs.nodes:
        if d[t.tau[p]] != t1.tau[m[p]]:
            return False
    for n, q in t.sigma.items():
        if d[n] not in t1.sigma or t1.sigma[d[n]] != m[q]:
            return False
    return True


def identity_rule(name: str, g: TermGraph) -> RewriteRule:
    """The rule ``(g, g, id, id)``: every node is a clone of itself."""
    ident: Dict[str, str] = {n: n for n in g.nodes}
    return RewriteRule(name, g, g, ident, dict(ident))
