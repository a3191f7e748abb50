"""Reading and writing graphs (``.tg``) and rule files (``.tgr``).

Grammar::

    file   := (sig | graph | rule)*
    sig    := "sig" "{" (SYMBOL "/" INT ";")* "}"
    graph  := "graph" NAME "{" body "}"
    body   := (ID ":" (SYMBOL "(" ID ("," ID)* ")" | SYMBOL | "_") ";")*
    rule   := "rule" NAME "{" "lhs" "{" body "}" "rhs" "{" body "}"
              "tau" "{" (ID "->" ID ";")* "}" ["sigma" "{" (ID "->" ID ";")* "}"] "}"

``#`` starts a comment running to the end of the line. Without a ``sig``
block, arities are inferred from the first use of each symbol and every
later use must agree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import ParseError, ValidationError, Violation
from .graph import UNLABELED, Signature, TermGraph
from .rules import RewriteRule, validate_rule

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<punct>[{}(),;:/])
  | (?P<word>(?:[A-Za-z0-9_+*'.•]|-(?!>))+)
""", re.VERBOSE)

@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = mt.lastgroup
        if kind == "nl":
            line, start = line + 1, mt.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, mt.group(), line, pos - start + 1))
        pos = mt.end()
    tokens.append(Token("eof", "", line, pos - start + 1))
    return tokens


@dataclass
class _Use:
    symbol: str
    arity: int
    token: Token


@dataclass
class Workspace:
    signature: Signature
    graphs: Dict[str, TermGraph] = field(default_factory=dict)
    rules: List[RewriteRule] = field(default_factory=list)
    pinned: bool = False

    def rule(self, name: str) -> RewriteRule:
        for t in self.rules:
            if t.name == name:
                return t
        raise KeyError(name)


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.uses: List[_Use] = []
        self.pins: Dict[str, Tuple[int, Token]] = {}

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        tok = self.tok
        if tok.text != text or tok.kind == "eof":
            found = tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        self.i += 1
        return tok

    def word(self, what: str) -> Token:
        tok = self.tok
        if tok.kind != "word":
            raise self.error(f"expected {what}, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        return self.tok.kind in ("word", "punct", "arrow") and self.tok.text == text

    def body(self) -> TermGraph:
        self.expect("{")
        nodes: Dict[str, Token] = {}
        labels: Dict[str, str] = {}
        succ: Dict[str, Tuple[str, ...]] = {}
        refs: List[Token] = []
        while not self.at("}"):
            node = self.word("node identifier")
            if node.text in nodes:
                raise self.error(f"duplicate node {node.text}", node)
            nodes[node.text] = node
            self.expect(":")
            sym = self.word("symbol or '_'")
            if sym.text in (UNLABELED, "•"):
                pass
            else:
                args: List[Token] = []
                if self.at("("):
                    self.i += 1
                    args.append(self.word("successor identifier"))
                    while self.at(","):
                        self.i += 1
                        args.append(self.word("successor identifier"))
                    self.expect(")")
                labels[node.text] = sym.text
                succ[node.text] = tuple(a.text for a in args)
                refs.extend(args)
                self.uses.append(_Use(sym.text, len(args), sym))
            self.expect(";")
        self.expect("}")
        for ref in refs:
            if ref.text not in nodes:
                raise self.error(f"undeclared successor {ref.text}", ref)
        return TermGraph(frozenset(nodes), labels, succ)

    def mapping(self, what: str) -> List[Tuple[Token, Token]]:
        self.expect("{")
        pairs = []
        seen: Dict[str, Token] = {}
        while not self.at("}"):
            src = self.word("node identifier")
            self.expect("->")
            dst = self.word("node identifier")
            self.expect(";")
            if src.text in seen:
                raise self.error(f"{what} is defined twice at {src.text}", src)
            seen[src.text] = src
            pairs.append((src, dst))
        self.expect("}")
        return pairs

    def sig_block(self) -> None:
        self.expect("{")
        while not self.at("}"):
            sym = self.word("symbol")
            self.expect("/")
            ar = self.word("arity")
            if not ar.text.isdigit():
                raise self.error(f"arity must be a natural number, found {ar.text!r}", ar)
            if sym.text in self.pins and self.pins[sym.text][0] != int(ar.text):
                raise self.error(f"symbol {sym.text} pinned twice with different arities", sym)
            self.pins[sym.text] = (int(ar.text), sym)
            self.expect(";")
        self.expect("}")

    def rule_block(self) -> tuple:
        self.expect("{")
        self.expect("lhs")
        lhs = self.body()
        self.expect("rhs")
        rhs = self.body()
        self.expect("tau")
        tau = self.mapping("tau")
        sigma: list = []
        if self.at("sigma"):
            self.i += 1
            sigma = self.mapping("sigma")
        self.expect("}")
        return lhs, rhs, tau, sigma

    def parse(self) -> Tuple[Dict[str, TermGraph], List[Tuple[Token, tuple]]]:
        graphs: Dict[str, TermGraph] = {}
        rules: List[Tuple[Token, tuple]] = []
        names = set()
        while self.tok.kind != "eof":
            kw = self.word("'graph', 'rule' or 'sig'")
            if kw.text == "sig":
                self.sig_block()
            elif kw.text in ("graph", "rule"):
                name = self.word(f"{kw.text} name")
                if (kw.text, name.text) in names:
                    raise self.error(f"duplicate {kw.text} {name.text}", name)
                names.add((kw.text, name.text))
                if kw.text == "graph":
                    graphs[name.text] = self.body()
                else:
                    rules.append((name, self.rule_block()))
            else:
                raise self.error(f"expected 'graph', 'rule' or 'sig', found {kw.text!r}", kw)
        return graphs, rules

    def signature(self, base: Optional[Signature]) -> Tuple[Signature, bool]:
        """Check every symbol use; returns the signature and whether pinned."""
        pinned: Dict[str, int] = {s: a for s, (a, _) in self.pins.items()}
        if base is not None:
            for s, a in base.arities.items():
                pinned.setdefault(s, a)
        is_pinned = bool(self.pins) or base is not None
        arities: Dict[str, Tuple[int, Token]] = {}
        report: List[Violation] = []
        for use in self.uses:
            where = f"{use.token.line}:{use.token.col}"
            if is_pinned:
                if use.symbol not in pinned:
                    report.append(Violation(
                        "unknown-symbol", f"{where}: symbol {use.symbol!r} is not in the signature"))
                elif pinned[use.symbol] != use.arity:
                    report.append(Violation(
                        "arity-mismatch",
                        f"{where}: symbol {use.symbol!r} has arity {pinned[use.symbol]} "
                        f"but is used with {use.arity} arguments"))
            else:
                first = arities.setdefault(use.symbol, (use.arity, use.token))
                if first[0] != use.arity:
                    report.append(Violation(
                        "arity-mismatch",
                        f"{where}: symbol {use.symbol!r} used with {use.arity} arguments, "
                        f"but with {first[0]} at {first[1].line}:{first[1].col}"))
        if report:
            raise ValidationError(report, "signature")
        if is_pinned:
            return Signature(pinned), True
        return Signature({s: a for s, (a, _) in arities.items()}), False


def parse_workspace(text: str, sig: Optional[Signature] = None) -> Workspace:
    """Parse a file holding any mix of ``sig``, ``graph`` and ``rule`` blocks.

    Rules are validated; a failing rule raises :class:`ValidationError`.
    """
    p = _Parser(text)
    graphs, raw_rules = p.parse()
    signature, pinned = p.signature(sig)
    rules: List[RewriteRule] = []
    for name, (lhs, rhs, tau, sigma) in raw_rules:
        rule = RewriteRule(name.text, lhs, rhs,
                           {a.text: b.text for a, b in tau},
                           {a.text: b.text for a, b in sigma})
        report = validate_rule(rule, signature)
        if report:
            raise ValidationError(report, f"{name.line}:{name.col}: rule {name.text}")
        rules.append(rule)
    return Workspace(signature, graphs, rules, pinned)


def parse_graph(text: str, sig: Optional[Signature] = None) -> TermGraph:
    """Parse a text holding exactly one ``graph`` block."""
    ws = parse_workspace(text, sig)
    if len(ws.graphs) != 1 or ws.rules:
        raise ParseError(f"expected exactly one graph, found {len(ws.graphs)} "
                         f"graph(s) and {len(ws.rules)} rule(s)")
    return next(iter(ws.graphs.values()))


def parse_rules(text: str, sig: Optional[Signature] = None) -> List[RewriteRule]:
    return parse_workspace(text, sig).rules


def _body(g: TermGraph, indent: str = "") -> List[str]:
    items = []
    for n in g.sorted_nodes():
        if n in g.labels:
            ss = g.successors[n]
            args = f"({','.join(ss)})" if ss else ""
            items.append(f"{n}: {g.labels[n]}{args};")
        else:
            items.append(f"{n}: _;")
    return items


def _inline(items: List[str]) -> str:
    return "{ " + " ".join(items) + " }" if items else "{ }"


def render_graph(g: TermGraph, format: str = "tg", name: str = "G") -> str:
    """Canonical ``tg`` text or Graphviz ``dot`` for a graph."""
    if format == "tg":
        return f"graph {name} {_inline(_body(g))}\n"
    if format == "dot":
        return render_dot(g, name)
    raise ValueError(f"unknown format {format!r}")


def _dot_id(n: str) -> str:
    return '"' + n.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(g: TermGraph, name: str = "G") -> str:
    lines = [f"digraph {_dot_id(name)} {{"]
    for n in g.sorted_nodes():
        label = f"{n}:{g.labels[n]}" if n in g.labels else f"{n}:•"
        lines.append(f"  {_dot_id(n)} [label={_dot_id(label)}];")
    for n in g.sorted_nodes():
        for i, s in enumerate(g.succ(n), 1):
            lines.append(f"  {_dot_id(n)} -> {_dot_id(s)} [label=\"{i}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _map(f: Dict[str, str]) -> str:
    return _inline([f"{k} -> {f[k]};" for k in sorted(f)])


def render_rule(t: RewriteRule) -> str:
    return (f"rule {t.name} {{\n"
            f"  lhs {_inline(_body(t.lhs))}\n"
            f"  rhs {_inline(_body(t.rhs))}\n"
            f"  tau {_map(t.tau)}\n"
            f"  sigma {_map(t.sigma)}\n"
            f"}}\n")


def render_rules(rules: List[RewriteRule], sig: Optional[Signature] = None) -> str:
    parts = []
    if sig is not None:
        entries = " ".join(f"{s}/{sig.arity(s)};" for s in sig.symbols())
        parts.append(f"sig {{ {entries} }}\n" if entries else "sig { }\n")
    parts.extend(render_rule(t) for t in rules)
    return "\n".join(parts)
