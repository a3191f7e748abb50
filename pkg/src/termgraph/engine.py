"""Single rewrite steps and leftmost-rule / first-match normalization."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .errors import InvariantError, ValidationError
from .graph import NodeMap, TermGraph, validate_graph
from .matching import check_matching, find_matchings
from .pushout import StepResult, build_result
from .rules import RewriteRule, validate_rule


def rewrite_step(t: RewriteRule, m: NodeMap, g: TermGraph, verify: bool = True) -> StepResult:
    """Apply ``t`` at matching ``m``; rejects invalid rules and matchings."""
    report = validate_rule(t)
    if report:
        raise ValidationError(report, f"rule {t.name}")
    report = validate_graph(g)
    if report:
        raise ValidationError(report, "graph")
    report = check_matching(t, m, g)
    if report:
        raise ValidationError(report, f"matching of rule {t.name}")
    result = build_result(t, m, g, check=verify)
    if verify:
        from .verify import Cone, MediationError, mediating_morphism
        try:
            eta = mediating_morphism(t, m, g, result, Cone.of(result))
        except MediationError as exc:
            raise InvariantError(f"result is not initial over itself: {exc}") from exc
        if any(k != v for k, v in eta.items()):
            raise InvariantError("mediating morphism to itself is not the identity")
    return result


@dataclass(frozen=True)
class Strategy:
    max_steps: int = 1000

    def __post_init__(self) -> None:
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")


@dataclass
class TraceStep:
    rule: str
    matching: Dict[str, str]
    source: TermGraph
    result: StepResult


@dataclass
class Trace:
    initial: TermGraph
    final: TermGraph
    steps: List[TraceStep] = field(default_factory=list)
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.steps)


def first_redex(rules: Sequence[RewriteRule], g: TermGraph):
    for t in rules:
        ms = find_matchings(t, g)
        if ms:
            return t, ms[0]
    return None


def normalize(rules: Sequence[RewriteRule], g: TermGraph,
              strategy: Optional[Strategy] = None, verify: bool = False) -> Trace:
    """Rewrite with the first rule that matches, at its first matching.

    Stops at a normal form or after ``strategy.max_steps`` steps; in the
    latter case ``truncated`` is set when a redex is still present.
    """
    strategy = strategy or Strategy()
    for t in rules:
        report = validate_rule(t)
        if report:
            raise ValidationError(report, f"rule {t.name}")
    trace = Trace(initial=g, final=g)
    current = g
    while True:
        redex = first_redex(rules, current)
        if redex is None:
            break
        if len(trace.steps) >= strategy.max_steps:
            trace.truncated = True
            break
        t, m = redex
        result = rewrite_step(t, m, current, verify=verify)
        trace.steps.append(TraceStep(t.name, m, current, result))
        current = result.graph
    trace.final = current
    return trace
