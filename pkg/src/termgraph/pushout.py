"""The cloning pushout, built explicitly from a pushout of node sets.

The construction has three stages:

1. :func:`set_pushout` glues ``nodes(g)`` and ``nodes(rhs)`` along
   ``m(p) ~ tau(p)`` for every lhs node ``p`` (union-find over the disjoint
   union) and returns the two quotient maps ``tau1`` and ``delta``.
2. :func:`decompose` splits the carrier into the untouched context
   ``tau1(gamma)``, the plain rhs nodes ``delta(delta_nodes)`` and the
   clones ``delta(sigma_nodes)``, and checks the bijectivity claims.
3. :func:`build_result` labels each region: context nodes copy ``g``
   through ``tau1``, plain rhs nodes copy ``rhs`` through ``delta`` and
   clones copy the matched lhs node they clone, through ``tau1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Tuple

from .errors import InvariantError
from .graph import NodeMap, TermGraph, is_graphic_on, is_injective
from .rules import RewriteRule


class UnionFind:
    """Disjoint sets with path compression and union by size."""

    def __init__(self, items: Iterable[Hashable] = ()):
        self.parent: Dict[Hashable, Hashable] = {}
        self.size: Dict[Hashable, int] = {}
        for x in items:
            self.add(x)

    def add(self, x: Hashable) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x: Hashable) -> Hashable:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: Hashable, b: Hashable) -> Hashable:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra

    def classes(self) -> List[List[Hashable]]:
        groups: Dict[Hashable, List[Hashable]] = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return list(groups.values())


@dataclass(frozen=True)
class SetPushout:
    carrier: FrozenSet[str]
    tau1: Dict[str, str]
    delta: Dict[str, str]

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Decomposition:
    gamma: FrozenSet[str]
    sigma_nodes: FrozenSet[str]
    delta_nodes: FrozenSet[str]


@dataclass(frozen=True)
class StepResult:
    """A rewrite step: the result graph and the maps of the cloning cone."""

    graph: TermGraph
    tau1: Dict[str, str]
    d: Dict[str, str]
    sigma1: Dict[str, str]
    decomposition: Decomposition

    __hash__ = None  # type: ignore[assignment]

    @property
    def d_injective(self) -> bool:
        """True when ``d`` is injective, i.e. a matching of the rhs."""
        return is_injective(self.d)


def _name_classes(classes: List[List[Tuple[str, str]]]) -> Dict[int, str]:
    """Deterministic names for quotient classes.

    Classes holding an rhs node take the smallest rhs name; graph-only
    classes are singletons and keep their graph name. Rhs-derived names
    that clash with a kept graph name get primes appended until fresh.
    """
    names: Dict[int, str] = {}
    kept = set()
    rhs_named = []
    for i, cls in enumerate(classes):
        rhs = sorted(n for side, n in cls if side == "R")
        if rhs:
            rhs_named.append((rhs[0], i))
        else:
            (_, n), = cls
            names[i] = n
            kept.add(n)
    taken = kept | {base for base, _ in rhs_named}
    for base, i in sorted(rhs_named):
        name = base
        if name in kept:
            name += "'"
            while name in taken:
                name += "'"
            taken.add(name)
        names[i] = name
    return names


def set_pushout(tau: NodeMap, m: NodeMap, graph_nodes: Iterable[str],
                rhs_nodes: Iterable[str]) -> SetPushout:
    """Pushout of ``tau: L -> R`` and ``m: L -> G`` in sets."""
    if set(tau) != set(m):
        raise ValueError("tau and m must share the lhs node set as domain")
    graph_nodes, rhs_nodes = sorted(graph_nodes), sorted(rhs_nodes)
    uf = UnionFind([("G", n) for n in graph_nodes] + [("R", n) for n in rhs_nodes])
    for p in sorted(tau):
        uf.union(("G", m[p]), ("R", tau[p]))
    classes = uf.classes()
    names = _name_classes(classes)
    of: Dict[Tuple[str, str], str] = {}
    for i, cls in enumerate(classes):
        for x in cls:
            of[x] = names[i]
    return SetPushout(
        carrier=frozenset(names.values()),
        tau1={n: of[("G", n)] for n in graph_nodes},
        delta={n: of[("R", n)] for n in rhs_nodes})


def decompose(t: RewriteRule, m: NodeMap, g: TermGraph, po: SetPushout) -> Decomposition:
    """Split the carrier and check the partition and bijectivity claims."""
    gamma = frozenset(g.nodes - set(m.values()))
    sigma_nodes = frozenset(t.sigma)
    delta_nodes = frozenset(t.rhs.nodes - sigma_nodes)
    img_gamma = {po.tau1[n] for n in gamma}
    img_delta = {po.delta[n] for n in delta_nodes}
    img_sigma = {po.delta[n] for n in sigma_nodes}

    if len(img_gamma) != len(gamma):
        raise InvariantError("tau1 is not injective on the context nodes")
    owner: Dict[str, str] = {}
    for n in sorted(delta_nodes):
        x = po.delta[n]
        if x in owner:
            raise InvariantError(
                f"delta identifies rhs nodes {owner[x]} and {n} outside the clone domain")
        owner[x] = n
    for a, b, what in ((img_gamma, img_delta, "context/rhs"),
                       (img_gamma, img_sigma, "context/clone"),
                       (img_delta, img_sigma, "rhs/clone")):
        both = a & b
        if both:
            raise InvariantError(f"{what} regions overlap at {sorted(both)}")
    if img_gamma | img_delta | img_sigma != po.carrier:
        raise InvariantError("carrier is not covered by the three regions")
    first: Dict[str, str] = {}
    for n in sorted(sigma_nodes):
        x = po.delta[n]
        other = first.setdefault(x, n)
        if t.sigma[other] != t.sigma[n]:
            raise InvariantError(
                f"clone nodes {other} and {n} are identified but clone "
                f"{t.sigma[other]} and {t.sigma[n]}; was the matching checked?")
    return Decomposition(gamma, sigma_nodes, delta_nodes)


def induce_sigma1(t: RewriteRule, m: NodeMap, po: SetPushout,
                  dec: Decomposition) -> Dict[str, str]:
    """The partial map from clone nodes of the result back to ``g``."""
    sigma1: Dict[str, str] = {}
    for n in sorted(dec.sigma_nodes):
        x = po.delta[n]
        q = m[t.sigma[n]]
        if sigma1.setdefault(x, q) != q:
            raise InvariantError(f"sigma1 is not well defined at {x}")
    return sigma1


def build_result(t: RewriteRule, m: NodeMap, g: TermGraph, check: bool = True) -> StepResult:
    """Build the cloning pushout of ``t`` and ``m``.

    With ``check`` the result is re-validated as a cloning cone.
    """
    po = set_pushout(t.tau, m, g.nodes, t.rhs.nodes)
    dec = decompose(t, m, g, po)
    sigma1 = induce_sigma1(t, m, po, dec)
    tau1, delta = po.tau1, po.delta

    labels: Dict[str, str] = {}
    succ: Dict[str, Tuple[str, ...]] = {}

    def put(node: str, sym: str, args: Tuple[str, ...], region: str) -> None:
        if node in labels and (labels[node], succ[node]) != (sym, args):
            raise InvariantError(f"label conflict at {node} ({region} region)")
        labels[node], succ[node] = sym, args

    for n in sorted(dec.gamma):
        if g.is_labeled(n):
            put(tau1[n], g.labels[n], tuple(tau1[s] for s in g.successors[n]), "context")
    for n in sorted(dec.delta_nodes):
        if t.rhs.is_labeled(n):
            put(delta[n], t.rhs.labels[n],
                tuple(delta[s] for s in t.rhs.successors[n]), "rhs")
    for n1, q1 in sorted(sigma1.items()):
        if g.is_labeled(q1):
            put(n1, g.labels[q1], tuple(tau1[s] for s in g.successors[q1]), "clone")

    h = TermGraph(po.carrier, labels, succ)
    if not is_graphic_on(delta, t.rhs, h, t.rhs.nodes):
        raise InvariantError("delta does not underlie a graph morphism rhs -> result")
    result = StepResult(h, dict(tau1), dict(delta), sigma1, dec)
    if check:
        from .verify import Cone, check_cone
        report = check_cone(t, m, g, Cone.of(result))
        if report:
            raise InvariantError("result is not a cloning cone: "
                                 + "; ".join(map(str, report)))
    return result


def square_commutes(t: RewriteRule, m: Mapping[str, str], result: StepResult) -> bool:
    return all(result.tau1[m[p]] == result.d[t.tau[p]] for p in t.lhs.nodes)
