"""Independent oracles and random instance generators for the test suite.

Nothing here reuses the search or quotient code under test: matchings and
isomorphisms are found by exhaustive enumeration, and the no-cloning
pushout is computed with connected components instead of union-find.
"""

from __future__ import annotations

import itertools
import random
from typing import Dict, List, Optional, Sequence

from termgraph.graph import TermGraph
from termgraph.rules import RewriteRule

SIG = {"f": 1, "g": 2, "a": 0}


def brute_matchings(t: RewriteRule, g: TermGraph) -> List[Dict[str, str]]:
    L = t.lhs
    order = sorted(L.nodes)
    out = []
    for img in itertools.product(sorted(g.nodes), repeat=len(order)):
        m = dict(zip(order, img))
        ok = True
        for p in order:
            if p in L.labels:
                c = m[p]
                if g.labels.get(c) != L.labels[p] or \
                        g.successors[c] != tuple(m[s] for s in L.successors[p]):
                    ok = False
                    break
        if not ok:
            continue
        for p, q in itertools.combinations(order, 2):
            if m[p] == m[q]:
                a, b = t.tau[p], t.tau[q]
                if not (a in t.sigma and b in t.sigma and t.sigma[a] == t.sigma[b]):
                    ok = False
                    break
        if ok:
            out.append(m)
    return out


def brute_isomorphism(g: TermGraph, h: TermGraph) -> Optional[Dict[str, str]]:
    gs, hs = sorted(g.nodes), sorted(h.nodes)
    if len(gs) != len(hs):
        return None
    for perm in itertools.permutations(hs):
        beta = dict(zip(gs, perm))
        if all((n in g.labels) == (beta[n] in h.labels) for n in gs) and all(
                h.labels[beta[n]] == g.labels[n]
                and h.successors[beta[n]] == tuple(beta[s] for s in g.successors[n])
                for n in g.labels):
            return beta
    return None


def plain_pushout(t: RewriteRule, m: Dict[str, str], g: TermGraph):
    """The no-cloning construction: graph H, tau1 and d.

    Requires an empty sigma and an injective matching. Classes of the
    glued node set are found as connected components of the bipartite
    graph with an edge ``m(p) -- tau(p)`` for every lhs node ``p``.
    """
    assert not t.sigma and len(set(m.values())) == len(m)
    adj: Dict[tuple, set] = {("G", n): set() for n in g.nodes}
    adj.update({("R", n): set() for n in t.rhs.nodes})
    for p in t.lhs.nodes:
        a, b = ("G", m[p]), ("R", t.tau[p])
        adj[a].add(b)
        adj[b].add(a)
    seen, comps = set(), []
    for start in sorted(adj):
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(comp)
    context = {n for side, n in itertools.chain(*comps) if side == "G"} - set(m.values())
    name: Dict[tuple, str] = {}
    r_comps = []
    for comp in comps:
        rs = sorted(n for side, n in comp if side == "R")
        if rs:
            r_comps.append((rs[0], comp))
        else:
            name[comp[0]] = comp[0][1]
    used = set(context) | {base for base, _ in r_comps}
    for base, comp in sorted(r_comps):
        nm = base
        if nm in context:
            nm += "'"
            while nm in used:
                nm += "'"
            used.add(nm)
        for x in comp:
            name[x] = nm
    tau1 = {n: name[("G", n)] for n in g.nodes}
    d = {n: name[("R", n)] for n in t.rhs.nodes}
    labels, succ = {}, {}
    for n in context:
        if n in g.labels:
            labels[tau1[n]] = g.labels[n]
            succ[tau1[n]] = tuple(tau1[s] for s in g.successors[n])
    for n in t.rhs.labels:
        labels[d[n]] = t.rhs.labels[n]
        succ[d[n]] = tuple(d[s] for s in t.rhs.successors[n])
    return TermGraph(frozenset(name.values()), labels, succ), tau1, d


# random instances -------------------------------------------------------

def random_graph(rng: random.Random, names: Sequence[str], sig=SIG,
                 p_unlabeled: float = 0.35) -> TermGraph:
    labels, succ = {}, {}
    syms = sorted(sig)
    for n in names:
        if rng.random() < p_unlabeled:
            continue
        s = rng.choice(syms)
        labels[n] = s
        succ[n] = tuple(rng.choice(names) for _ in range(sig[s]))
    return TermGraph(frozenset(names), labels, succ)


def random_rule(rng: random.Random, max_lhs: int = 4, max_rhs: int = 4,
                sig=SIG) -> RewriteRule:
    lhs_names = [f"l{i}" for i in range(rng.randint(1, max_lhs))]
    rhs_names = [f"r{i}" for i in range(rng.randint(1, max_rhs))]
    L = random_graph(rng, lhs_names, sig)
    R = random_graph(rng, rhs_names, sig)
    tau = {p: rng.choice(rhs_names) for p in lhs_names}
    labels, succ = dict(R.labels), dict(R.successors)
    sigma = {}
    for n in rhs_names:
        if rng.random() < 0.5:
            q = rng.choice(lhs_names)
            if n not in labels:
                sigma[n] = q
            elif q in L.labels and rng.random() < 0.7:
                # turn n into a tau-clone of q
                labels[n] = L.labels[q]
                succ[n] = tuple(tau[s] for s in L.successors[q])
                sigma[n] = q
    R = TermGraph(R.nodes, labels, succ)
    return RewriteRule("random", L, R, tau, sigma)


def random_host(rng: random.Random, t: RewriteRule, extra: int = 3, sig=SIG) -> TermGraph:
    """A graph containing an instance of the lhs, plus random context."""
    syms = sorted(sig)
    names = [f"g{p}" for p in sorted(t.lhs.nodes)]
    names += [f"c{i}" for i in range(rng.randint(0, extra))]
    labels, succ = {}, {}
    for p in t.lhs.nodes:
        if p in t.lhs.labels:
            labels[f"g{p}"] = t.lhs.labels[p]
            succ[f"g{p}"] = tuple(f"g{s}" for s in t.lhs.successors[p])
    for n in names:
        if n not in labels and rng.random() < 0.6:
            s = rng.choice(syms)
            labels[n] = s
            succ[n] = tuple(rng.choice(names) for _ in range(sig[s]))
    return TermGraph(frozenset(names), labels, succ)
