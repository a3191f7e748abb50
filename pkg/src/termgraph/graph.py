"""Termgraphs, graphic functions and isomorphism search.

A termgraph has a finite set of nodes. Labeled nodes carry an operation
symbol and an ordered tuple of successors whose length is the symbol's
arity; unlabeled nodes carry nothing and play the role of variables.

Node functions between graphs are plain ``dict`` objects mapping node
identifiers to node identifiers. Partial functions are dicts whose key set
is the domain.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import (Collection, Dict, Iterable, Iterator, List, Mapping,
                    Optional, Sequence, Tuple, Union)

from .errors import DomainError, Violation

NodeMap = Mapping[str, str]

UNLABELED = "_"


@dataclass(frozen=True)
class Signature:
    """Operation symbols with their arities."""

    arities: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "arities", dict(self.arities))
        for sym, ar in self.arities.items():
            if not sym or sym == UNLABELED:
                raise ValueError(f"invalid symbol {sym!r}")
            if ar < 0:
                raise ValueError(f"negative arity for {sym!r}")

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.arities

    def arity(self, symbol: str) -> int:
        return self.arities[symbol]

    def symbols(self) -> List[str]:
        return sorted(self.arities)

    @classmethod
    def infer(cls, graphs: Iterable["TermGraph"]) -> "Signature":
        """Signature from first use; raises ValueError on conflicting arities."""
        arities: Dict[str, int] = {}
        for g in graphs:
            for n in sorted(g.labels):
                sym, ar = g.labels[n], len(g.successors[n])
                if arities.setdefault(sym, ar) != ar:
                    raise ValueError(
                        f"symbol {sym!r} used with arities {arities[sym]} and {ar}")
        return cls(arities)


NodeSpec = Union[None, str, Tuple[str, Sequence[str]]]


@dataclass(frozen=True)
class TermGraph:
    """An immutable termgraph.

    ``labels`` maps each labeled node to its symbol and ``successors`` maps
    each labeled node to its successor tuple. The constructor only
    normalizes containers; structural checks live in :func:`validate_graph`
    so that ill-formed input can be reported rather than rejected.
    """

    nodes: frozenset = field(default_factory=frozenset)
    labels: Mapping[str, str] = field(default_factory=dict)
    successors: Mapping[str, Tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "labels", dict(self.labels))
        object.__setattr__(
            self, "successors",
            {n: tuple(s) for n, s in self.successors.items()})

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def build(cls, spec: Mapping[str, NodeSpec]) -> "TermGraph":
        """Build from ``{node: None | symbol | (symbol, successors)}``.

        >>> TermGraph.build({"1": ("f", ["2"]), "2": "a"}).labels["2"]
        'a'
        """
        labels: Dict[str, str] = {}
        succ: Dict[str, Tuple[str, ...]] = {}
        for n, s in spec.items():
            if s is None or s == UNLABELED:
                continue
            if isinstance(s, str):
                labels[n], succ[n] = s, ()
            else:
                labels[n], succ[n] = s[0], tuple(s[1])
        return cls(frozenset(spec), labels, succ)

    @property
    def labeled(self) -> frozenset:
        return frozenset(self.labels)

    def is_labeled(self, n: str) -> bool:
        return n in self.labels

    def label(self, n: str) -> Optional[str]:
        return self.labels.get(n)

    def succ(self, n: str) -> Tuple[str, ...]:
        return self.successors.get(n, ())

    def sorted_nodes(self) -> List[str]:
        return sorted(self.nodes)

    def key(self) -> tuple:
        """Hashable canonical form (node names included)."""
        return tuple((n, self.labels.get(n), self.successors.get(n))
                     for n in sorted(self.nodes))

    def rename(self, beta: NodeMap) -> "TermGraph":
        """Image of the graph under an injective renaming ``beta``."""
        return TermGraph(
            frozenset(beta[n] for n in self.nodes),
            {beta[n]: sym for n, sym in self.labels.items()},
            {beta[n]: tuple(beta[s] for s in ss)
             for n, ss in self.successors.items()})

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[str]:
        return iter(self.sorted_nodes())

    def __repr__(self) -> str:
        parts = []
        for n in self.sorted_nodes():
            if n in self.labels:
                ss = self.successors[n]
                args = f"({','.join(ss)})" if ss else ""
                parts.append(f"{n}:{self.labels[n]}{args}")
            else:
                parts.append(f"{n}:_")
        return "TermGraph{" + "; ".join(parts) + "}"


def validate_graph(g: TermGraph, sig: Optional[Signature] = None) -> List[Violation]:
    """List every violated termgraph invariant; empty means valid.

    Without a signature, arities are only checked for consistency within
    the graph itself.
    """
    report: List[Violation] = []
    for n in sorted(set(g.labels) | set(g.successors)):
        if n not in g.nodes:
            report.append(Violation(
                "unknown-node", f"labeled node {n} is not a node of the graph", (n,)))
    if set(g.labels) != set(g.successors):
        for n in sorted(set(g.labels) ^ set(g.successors)):
            report.append(Violation(
                "domain-mismatch",
                f"node {n} has a label or a successor list but not both", (n,)))
    seen: Dict[str, Tuple[int, str]] = {}
    for n in sorted(g.labels):
        sym = g.labels[n]
        ss = g.successors.get(n, ())
        if sig is not None:
            if sym not in sig:
                report.append(Violation(
                    "unknown-symbol", f"node {n}: unknown symbol {sym!r}", (n,)))
            elif sig.arity(sym) != len(ss):
                report.append(Violation(
                    "arity-mismatch",
                    f"node {n}: symbol {sym!r} has arity {sig.arity(sym)} "
                    f"but {len(ss)} successors", (n,)))
        else:
            first = seen.setdefault(sym, (len(ss), n))
            if first[0] != len(ss):
                report.append(Violation(
                    "arity-mismatch",
                    f"node {n}: symbol {sym!r} has {len(ss)} successors but "
                    f"{first[0]} at node {first[1]}", (n, first[1])))
        for i, s in enumerate(ss, 1):
            if s not in g.nodes:
                report.append(Violation(
                    "dangling-successor",
                    f"node {n}: successor {i} ({s}) is not a node", (n, s)))
    return report


def _check_node_function(gamma: NodeMap, g: TermGraph, h: TermGraph) -> None:
    for n in g.nodes:
        if n not in gamma:
            raise DomainError(f"node function undefined at {n}")
        if gamma[n] not in h.nodes:
            raise DomainError(f"image {gamma[n]} of {n} is not a node of the target")


def graphic_at(gamma: NodeMap, g: TermGraph, h: TermGraph, n: str,
               strict: bool = False) -> bool:
    """Whether ``gamma`` preserves label and successors at node ``n``."""
    p = gamma[n]
    if n not in g.labels:
        return not strict or p not in h.labels
    if p not in h.labels or h.labels[p] != g.labels[n]:
        return False
    return h.successors[p] == tuple(gamma[s] for s in g.successors[n])


def is_graphic_on(gamma: NodeMap, g: TermGraph, h: TermGraph,
                  nodes: Collection[str], strict: bool = False) -> bool:
    """Whether ``gamma`` is (strictly) graphic at every node of ``nodes``.

    Successors of the checked nodes may lie outside ``nodes``; ``gamma``
    must be total on ``g``.
    """
    if not set(nodes) <= g.nodes:
        raise DomainError("node set is not included in the source graph")
    _check_node_function(gamma, g, h)
    return all(graphic_at(gamma, g, h, n, strict) for n in nodes)


def underlies_morphism(gamma: NodeMap, g: TermGraph, h: TermGraph) -> bool:
    return is_graphic_on(gamma, g, h, g.nodes)


def is_tau_clone(p: str, q: str, tau: NodeMap, g: TermGraph, h: TermGraph) -> bool:
    """Whether node ``p`` of ``h`` is a ``tau``-clone of node ``q`` of ``g``."""
    if (p in h.labels) != (q in g.labels):
        return False
    if q not in g.labels:
        return True
    return (h.labels[p] == g.labels[q]
            and h.successors[p] == tuple(tau[s] for s in g.successors[q]))


def compose(outer: NodeMap, inner: NodeMap) -> Dict[str, str]:
    """``outer ∘ inner`` on the domain of ``inner`` (partial-function style)."""
    return {x: outer[y] for x, y in inner.items() if y in outer}


def is_injective(f: NodeMap) -> bool:
    return len(set(f.values())) == len(f)


def _indegrees(g: TermGraph) -> Counter:
    c: Counter = Counter()
    for ss in g.successors.values():
        c.update(ss)
    return c


def find_isomorphism(g: TermGraph, h: TermGraph) -> Optional[Dict[str, str]]:
    """First bijection (in lexicographic search order) that is an isomorphism.

    Nodes of ``g`` are assigned in sorted order and candidates in ``h`` are
    tried in sorted order, so the result is deterministic.
    """
    if len(g.nodes) != len(h.nodes) or len(g.labels) != len(h.labels):
        return None
    if Counter(g.labels.values()) != Counter(h.labels.values()):
        return None
    gin, hin = _indegrees(g), _indegrees(h)
    order = g.sorted_nodes()
    targets = h.sorted_nodes()

    def shape(graph: TermGraph, indeg: Counter, n: str) -> tuple:
        return (graph.labels.get(n), len(graph.successors.get(n, ())), indeg[n])

    cands = {n: [c for c in targets if shape(h, hin, c) == shape(g, gin, n)]
             for n in order}
    # predecessors of each g-node as (parent, position) pairs
    preds: Dict[str, List[Tuple[str, int]]] = {n: [] for n in order}
    for n, ss in g.successors.items():
        for i, s in enumerate(ss):
            preds[s].append((n, i))

    beta: Dict[str, str] = {}
    used: set = set()

    def consistent(n: str, c: str) -> bool:
        if n in g.labels:
            for s, t in zip(g.successors[n], h.successors[c]):
                if s == n:
                    if t != c:
                        return False
                elif s in beta and beta[s] != t:
                    return False
        for parent, i in preds[n]:
            if parent in beta and h.successors[beta[parent]][i] != c:
                return False
        return True

    def search(k: int) -> bool:
        if k == len(order):
            return True
        n = order[k]
        for c in cands[n]:
            if c in used or not consistent(n, c):
                continue
            beta[n] = c
            used.add(c)
            if search(k + 1):
                return True
            del beta[n]
            used.discard(c)
        return False

    if not search(0):
        return None
    inverse = {v: k for k, v in beta.items()}
    if not (is_graphic_on(beta, g, h, g.nodes, strict=True)
            and is_graphic_on(inverse, h, g, h.nodes, strict=True)):
        return None  # pragma: no cover - search only builds isomorphisms
    return beta


def is_isomorphic(g: TermGraph, h: TermGraph) -> bool:
    return find_isomorphism(g, h) is not None
