"""Matchings of a rule's left-hand side into a graph.

A matching is a graph morphism ``m : lhs -> g`` that may identify two
distinct lhs nodes only when both are sent by ``tau`` into the domain of
``sigma`` and ``sigma`` sends them back to the same lhs node.
"""

from __future__ import annotations

from itertools import combinations
from typing import Dict, List

from .errors import DomainError, Violation
from .graph import NodeMap, TermGraph, graphic_at
from .rules import RewriteRule


def collision_allowed(t: RewriteRule, p: str, q: str) -> bool:
    """Whether lhs nodes ``p`` and ``q`` may share an image."""
    a, b = t.tau[p], t.tau[q]
    return a in t.sigma and b in t.sigma and t.sigma[a] == t.sigma[b]


def check_matching(t: RewriteRule, m: NodeMap, g: TermGraph) -> List[Violation]:
    L = t.lhs
    for p in L.nodes:
        if p not in m or m[p] not in g.nodes:
            raise DomainError(f"matching does not map lhs node {p} into the graph")
    report: List[Violation] = []
    for p in L.sorted_nodes():
        if not graphic_at(m, L, g, p):
            report.append(Violation(
                "not-a-morphism",
                f"lhs node {p} ({L.label(p)}) is not preserved at {m[p]}", (p, m[p])))
    for p, q in combinations(L.sorted_nodes(), 2):
        if m[p] == m[q] and not collision_allowed(t, p, q):
            if t.tau[p] not in t.sigma or t.tau[q] not in t.sigma:
                why = "tau image outside the domain of sigma"
            else:
                why = "sigma sends their tau images to different nodes"
            report.append(Violation(
                "forbidden-collision",
                f"lhs nodes {p} and {q} both map to {m[p]}: {why}", (p, q)))
    return report


def find_matchings(t: RewriteRule, g: TermGraph) -> List[Dict[str, str]]:
    """All matchings of ``t`` into ``g`` in lexicographic order.

    Lhs nodes are assigned in sorted order and graph nodes are tried in
    sorted order, so the n-th matching is reproducible.
    """
    L = t.lhs
    order = L.sorted_nodes()
    targets = g.sorted_nodes()
    # successor constraints touching each lhs node: (parent, position)
    parents: Dict[str, List[tuple]] = {p: [] for p in order}
    for p, ss in L.successors.items():
        for i, s in enumerate(ss):
            parents[s].append((p, i))

    m: Dict[str, str] = {}
    out: List[Dict[str, str]] = []

    def fits(p: str, c: str) -> bool:
        if p in L.labels:
            if g.labels.get(c) != L.labels[p]:
                return False
            for s, x in zip(L.successors[p], g.successors[c]):
                target = c if s == p else m.get(s)
                if target is not None and target != x:
                    return False
        for parent, i in parents[p]:
            if parent in m and g.successors[m[parent]][i] != c:
                return False
        for q, img in m.items():
            if img == c and not collision_allowed(t, p, q):
                return False
        return True

    def search(k: int) -> None:
        if k == len(order):
            out.append(dict(m))
            return
        p = order[k]
        for c in targets:
            if fits(p, c):
                m[p] = c
                search(k + 1)
                del m[p]

    search(0)
    return out
