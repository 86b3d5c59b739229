"""Line-oriented text formats for predilators, dendrograms, orders, trees and games.

Predilator::

    # comments start with '#'
    predilator
    term a arity=1 sigma=0
    term b arity=1 sigma=0
    dist a b 0

The header line is required, terms are listed in increasing term order, and
every pair of distinct terms needs a ``dist`` line (either orientation).

Dendrogram: one s-expression per root, ``(eE child ...)`` for a non-terminal
with ecode E and ``*`` for a terminal; nodes are numbered in pre-order.
Trekkable files instead hold ``node <id> parent=<id|-> e=<nat|->`` lines.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .dendrogram import Dendrogram
from .errors import ParseError
from .hierarchy import DecidableTree, table_tree, tree_from_spec
from .orders import FiniteOrder
from .predilator import AppliedElement, Predilator

_TOKEN = re.compile(r"[^\s#(),=]+")
_INT = re.compile(r"-?\d+")


def _lines(text: str) -> Iterator[tuple[int, list[tuple[int, str]]]]:
    """Yield (line number, [(column, token)]) for non-blank lines."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", body)]
        if toks:
            yield lineno, toks


def _atom(tok: str):
    return int(tok) if _INT.fullmatch(tok) else tok


def term_token(t) -> str:
    s = str(t)
    if isinstance(t, int) or (isinstance(t, str) and _TOKEN.fullmatch(t) and not _INT.fullmatch(t)):
        return s
    return re.sub(r"[\s#(),=]+", "_", s).strip("_") or "_"


def _nat(tok: str, line: int, col: int, what: str) -> int:
    if not tok.isdigit():
        raise ParseError(f"{what} must be a natural number, got {tok!r}", line, col)
    return int(tok)


# -- predilators -------------------------------------------------------------------


def parse_predilator(text: str) -> Predilator:
    terms: list = []
    arity: dict = {}
    sigma: dict = {}
    dist: dict = {}
    seen_header = False
    last_line = 0
    for line, toks in _lines(text):
        head_col, head = toks[0]
        last_line = line
        if not seen_header:
            if head != "predilator" or len(toks) != 1:
                raise ParseError("expected header 'predilator'", line, head_col)
            seen_header = True
            continue
        if head == "term":
            if len(toks) < 3:
                raise ParseError("expected: term <name> arity=<n> [sigma=<i,j,...>]", line, head_col)
            col, name_tok = toks[1]
            if not _TOKEN.fullmatch(name_tok):
                raise ParseError(f"bad term name {name_tok!r}", line, col)
            name = _atom(name_tok)
            if name in arity:
                raise ParseError(f"term {name!r} declared twice", line, col)
            fields = {}
            for col, tok in toks[2:]:
                key, eq, val = tok.partition("=")
                if not eq or key not in ("arity", "sigma") or key in fields:
                    raise ParseError(f"unexpected field {tok!r}", line, col)
                fields[key] = (col + len(key) + 1, val)
            if "arity" not in fields:
                raise ParseError("missing arity", line, head_col)
            col, val = fields["arity"]
            k = _nat(val, line, col, "arity")
            terms.append(name)
            arity[name] = k
            if "sigma" in fields:
                col, val = fields["sigma"]
                parts = [] if val in ("", "-") else val.split(",")
                sigma[name] = tuple(_nat(p, line, col, "sigma entry") for p in parts)
        elif head == "dist":
            if len(toks) != 4:
                raise ParseError("expected: dist <name> <name> <m>", line, head_col)
            s, t = _atom(toks[1][1]), _atom(toks[2][1])
            for (col, tok), v in zip(toks[1:3], (s, t)):
                if v not in arity:
                    raise ParseError(f"unknown term {tok!r}", line, col)
            if s == t or (s, t) in dist or (t, s) in dist:
                raise ParseError(f"distance for {s!r}, {t!r} given twice or for a single term", line, head_col)
            col, tok = toks[3]
            dist[(s, t)] = _nat(tok, line, col, "distance")
        else:
            raise ParseError(f"unknown directive {head!r}", line, head_col)
    if not seen_header:
        raise ParseError("expected header 'predilator'", 1, 1)
    for s, t in itertools.combinations(terms, 2):
        if (s, t) not in dist and (t, s) not in dist:
            raise ParseError(f"no distance for {s!r}, {t!r}", last_line + 1, 1)
    return Predilator.build(terms, arity, sigma, dist)


def format_predilator(P: Predilator) -> str:
    out = ["predilator"]
    for t in P.terms:
        sig = ",".join(map(str, P.sigma[t])) or "-"
        out.append(f"term {term_token(t)} arity={P.arity[t]} sigma={sig}")
    for s, t in itertools.combinations(P.terms, 2):
        out.append(f"dist {term_token(s)} {term_token(t)} {P.p(s, t)}")
    return "\n".join(out) + "\n"


def parse_applied(text: str, P: Predilator | None = None) -> AppliedElement:
    """``name(a,b,...)``."""
    m = re.fullmatch(r"\s*([^\s(),]+)\s*\(([^()]*)\)\s*", text)
    if not m:
        raise ParseError(f"expected name(args), got {text!r}", 1, 1)
    args = tuple(int(a) for a in m.group(2).split(",") if a.strip()) if m.group(2).strip() else ()
    term = _atom(m.group(1))
    if P is not None and term not in P:
        raise ParseError(f"unknown term {m.group(1)!r}", 1, 1)
    return AppliedElement(term, args)


# -- dendrograms -------------------------------------------------------------------


@dataclass
class _Reader:
    text: str
    pos: int = 0

    def where(self) -> tuple[int, int]:
        before = self.text[: self.pos]
        return before.count("\n") + 1, self.pos - (before.rfind("\n") + 1) + 1

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, *self.where())

    def skip(self) -> None:
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self.pos += 1
            elif c.isspace():
                self.pos += 1
            else:
                break

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""


def parse_dendrogram(text: str) -> Dendrogram:
    if re.search(r"^\s*node\b", text, re.MULTILINE):
        return parse_trekkable(text)
    r = _Reader(text)
    roots: list = []
    children: dict = {}
    ecode: dict = {}
    counter = itertools.count()

    def node():
        c = r.peek()
        if c == "*":
            r.pos += 1
            x = next(counter)
            children[x] = ()
            return x
        if c != "(":
            raise r.error("expected '(' or '*'")
        r.pos += 1
        r.skip()
        m = re.compile(r"e(\d+)").match(r.text, r.pos)
        if not m:
            raise r.error("expected ecode eN")
        r.pos = m.end()
        x = next(counter)
        ecode[x] = int(m.group(1))
        kids = []
        while r.peek() not in (")", ""):
            kids.append(node())
        if r.peek() != ")":
            raise r.error("unclosed '('")
        r.pos += 1
        children[x] = tuple(kids)
        return x

    while r.peek():
        roots.append(node())
    return Dendrogram(tuple(roots), children, ecode)


def format_dendrogram(d: Dendrogram) -> str:
    def sexp(x) -> str:
        if d.is_terminal(x):
            return "*"
        return "(" + " ".join([f"e{d.ecode[x]}"] + [sexp(y) for y in d.children[x]]) + ")"

    return "\n".join(sexp(x) for x in d.roots) + "\n"


def preorder_labels(d: Dendrogram) -> Dendrogram:
    """Relabel nodes 0, 1, ... in pre-order (what the s-expression reader produces)."""
    return d.relabel({x: i for i, x in enumerate(d.nodes)})


def parse_trekkable(text: str) -> Dendrogram:
    roots: list = []
    children: dict = {}
    ecode: dict = {}
    parent_of: dict = {}
    for line, toks in _lines(text):
        col, head = toks[0]
        if head != "node" or len(toks) != 4:
            raise ParseError("expected: node <id> parent=<id|-> e=<nat|->", line, col)
        col, tok = toks[1]
        x = _nat(tok, line, col, "node id")
        if x in parent_of:
            raise ParseError(f"node {x} listed twice", line, col)
        col, tok = toks[2]
        if not tok.startswith("parent="):
            raise ParseError("expected parent=<id|->", line, col)
        p = tok[len("parent="):]
        parent = None if p == "-" else _nat(p, line, col + 7, "parent id")
        col, tok = toks[3]
        if not tok.startswith("e="):
            raise ParseError("expected e=<nat|->", line, col)
        e = tok[2:]
        if e != "-":
            ecode[x] = _nat(e, line, col + 2, "ecode")
        parent_of[x] = parent
        children.setdefault(x, [])
        if parent is None:
            roots.append(x)
        else:
            children.setdefault(parent, []).append(x)
    return Dendrogram(tuple(roots), {x: tuple(c) for x, c in children.items()}, ecode)


def format_trekkable(d: Dendrogram) -> str:
    out = []
    for x in sorted(d.nodes):
        p = d.parent[x]
        e = d.ecode.get(x)
        out.append(f"node {x} parent={'-' if p is None else p} e={'-' if e is None else e}")
    return "\n".join(out) + "\n"


# -- orders, trees, game configs ------------------------------------------------------


def parse_order(text: str) -> FiniteOrder:
    labels = []
    for line, toks in _lines(text):
        for col, tok in toks:
            v = _atom(tok)
            if v in labels:
                raise ParseError(f"label {tok!r} repeated", line, col)
            labels.append(v)
    return FiniteOrder(labels)


def format_order(order: FiniteOrder) -> str:
    return "".join(f"{term_token(x)}\n" for x in order.labels)


def _seq(tok: str, line: int, col: int) -> tuple:
    if tok == "-":
        return ()
    return tuple(_nat(v, line, col, "sequence entry") for v in tok.split(","))


def parse_tree_table(text: str, name: str = "table") -> DecidableTree:
    """Lines ``member <s> <t>`` with comma-separated entries, ``-`` for the empty sequence."""
    pairs = []
    for line, toks in _lines(text):
        col, head = toks[0]
        if head != "member" or len(toks) != 3:
            raise ParseError("expected: member <s> <t>", line, col)
        s = _seq(toks[1][1], line, toks[1][0])
        t = _seq(toks[2][1], line, toks[2][0])
        if len(s) != len(t):
            raise ParseError("member sequences must have equal length", line, toks[1][0])
        pairs.append((s, t))
    return table_tree(pairs, name)


def load_tree(spec: str, base: Path | None = None) -> DecidableTree:
    """A builtin name, or ``table:<path>``."""
    if spec.startswith("table:"):
        path = Path(spec[len("table:"):])
        if base is not None and not path.is_absolute():
            path = base / path
        return parse_tree_table(path.read_text(encoding="utf-8"), name=spec)
    return tree_from_spec(spec)


GAME_KEYS = ("mode", "tree", "target", "depth", "alphabet", "selector")


def parse_game_config(text: str) -> dict:
    """``key = value`` lines; returns the raw fields after checking names and numbers."""
    fields: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        key, eq, value = body.partition("=")
        key = key.strip()
        col = len(body) - len(body.lstrip()) + 1
        if not eq:
            raise ParseError("expected key = value", lineno, col)
        if key not in GAME_KEYS:
            raise ParseError(f"unknown key {key!r}", lineno, col)
        value = value.strip()
        vcol = body.index("=") + 2
        if key in ("depth", "alphabet"):
            value = _nat(value, lineno, vcol, key)
        if key == "mode":
            value = value.upper()
            if value not in ("ORDINAL", "DILATOR"):
                raise ParseError("mode must be ordinal or dilator", lineno, vcol)
        fields[key] = value
    for key in ("mode", "tree", "target", "depth", "alphabet"):
        if key not in fields:
            raise ParseError(f"missing key {key!r}", None)
    fields.setdefault("selector", "first")
    return fields


def parse_sequence(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text in ("", "-"):
        return ()
    try:
        out = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise ParseError(f"expected comma-separated naturals, got {text!r}", 1, 1) from None
    if any(v < 0 for v in out):
        raise ParseError("sequence entries must be natural", 1, 1)
    return out
