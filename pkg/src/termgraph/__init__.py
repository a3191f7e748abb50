"""Termgraph rewriting where each step is a cloning pushout."""

from importlib import resources

from .engine import Strategy, Trace, normalize, rewrite_step
from .errors import (DomainError, InvariantError, ParseError, ValidationError,
                     Violation)
from .graph import (Signature, TermGraph, find_isomorphism, is_graphic_on,
                    is_isomorphic, is_tau_clone, underlies_morphism,
                    validate_graph)
from .matching import check_matching, find_matchings
from .pushout import (Decomposition, SetPushout, StepResult, build_result,
                      decompose, induce_sigma1, set_pushout)
from .rules import RewriteRule, check_rule_morphism, identity_rule, validate_rule
from .textio import (parse_graph, parse_rules, parse_workspace, render_graph,
                     render_rules)
from .verify import (Cone, brute_force_initiality, check_cone,
                     mediating_morphism)


def corpus_path(name: str):
    """Path of a file shipped in the rule and graph corpus."""
    return resources.files(__name__).joinpath("corpus", name)


__all__ = [
    "Cone", "Decomposition", "DomainError", "InvariantError", "ParseError",
    "RewriteRule", "SetPushout", "Signature", "StepResult", "Strategy",
    "TermGraph", "Trace", "ValidationError", "Violation",
    "brute_force_initiality", "build_result", "check_cone", "check_matching",
    "check_rule_morphism", "corpus_path", "decompose", "find_isomorphism",
    "find_matchings", "induce_sigma1", "is_graphic_on", "is_isomorphic",
    "is_tau_clone", "mediating_morphism", "normalize", "parse_graph",
    "identity_rule", "parse_rules", "parse_workspace", "render_graph", "render_rules",
    "rewrite_step", "set_pushout", "underlies_morphism", "validate_graph",
    "validate_rule",
]
