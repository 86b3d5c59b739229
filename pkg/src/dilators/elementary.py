"""Decomposing comparisons of Dec•(d) into elementary steps."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .dendrogram import Dendrogram, dec_bullet
from .errors import NotLess
from .orders import Ordering, enum_arity_diagrams
from .predilator import AppliedElement, Predilator, compare_applied, compare_under_diagram


@dataclass(frozen=True)
class Point:
    """A node with its ξ-vector (arguments listed in priority order)."""

    node: object
    xi: tuple


@dataclass(frozen=True)
class Step:
    kind: str  # "A", "B", "C" or "D"
    variant: str  # for D: "sibling" or "parent"; otherwise ""
    lower: AppliedElement
    upper: AppliedElement

    def label(self) -> str:
        return f"{self.kind}/{self.variant}" if self.variant else self.kind


def to_point(d: Dendrogram, x: AppliedElement) -> Point:
    sig = d.sigma(x.term)
    return Point(x.term, tuple(x.args[sig[i]] for i in range(len(sig))))


def to_applied(p: Point) -> AppliedElement:
    return AppliedElement(p.node, tuple(sorted(p.xi)))


def _siblings(d: Dendrogram, u, v) -> bool:
    return u != v and d.parent[u] == d.parent[v]


def classify(d: Dendrogram, lo: Point, hi: Point) -> list[tuple[str, str]]:
    """Elementary types that the comparison ``lo < hi`` is an instance of."""
    s, a, t, b = lo.node, lo.xi, hi.node, hi.xi
    ls, lt = d.lh(s), d.lh(t)
    idx = d.sibling_index
    kinds = []
    if d.parent[s] == t and a[:lt] == b:
        kinds.append(("A", ""))
    if _siblings(d, s, t) and idx[s] < idx[t] and a == b:
        kinds.append(("B", ""))
    if ls == lt >= 1 and d.parent[s] == d.parent[t] and a[:-1] == b[:-1] and a[-1] < b[-1]:
        kinds.append(("C", ""))
    if lt == ls + 1:
        anc = d.pred(t)[ls]
        if _siblings(d, s, anc) and idx[s] < idx[anc] and b[:ls] == a:
            kinds.append(("D", "sibling"))
        if anc == s and ls >= 1 and b[: ls - 1] == a[:-1] and a[-1] < b[ls - 1]:
            kinds.append(("D", "parent"))
    return kinds


def _just_below(v, used) -> Fraction:
    lower = [u for u in used if u < v]
    lo = max(lower) if lower else v - 1
    return Fraction(lo + v, 2)


def _up(d: Dendrogram, p: Point, level: int) -> list[Point]:
    """Type (A) chain from ``p`` up to its ancestor at ``level``."""
    path = d.pred(p.node)
    return [Point(path[k], p.xi[:k]) for k in range(len(path) - 2, level - 1, -1)]


def _lower_last(b: tuple, k: int, used: set) -> tuple:
    v = _just_below(b[k], used)
    used.add(v)
    return b[:k] + (v,)


def _descend_sibling(d, u: Point, t, b: tuple, used: set) -> list[Point]:
    # u.node is a smaller sibling of t's ancestor at level lh(u); b extends u.xi
    m, lt = d.lh(u.node), d.lh(t)
    if lt <= m + 1:
        return [Point(t, b)]
    parent = d.pred(t)[lt - 1]
    b2 = _lower_last(b[: lt - 1], lt - 2, used)
    return _descend_sibling(d, u, parent, b2, used) + [Point(t, b)]


def _descend_parent(d, v: Point, t, b: tuple, used: set) -> list[Point]:
    # v.node is a proper ancestor of t; ξ agree below lh(v)-1 and v's last ξ is smaller
    k, lt = d.lh(v.node), d.lh(t)
    if lt == k + 1:
        return [Point(t, b)]
    parent = d.pred(t)[lt - 1]
    b2 = _lower_last(b[: lt - 1], lt - 2, used)
    return _descend_parent(d, v, parent, b2, used) + [Point(t, b)]


def _chain(d: Dendrogram, x: Point, y: Point) -> list[Point]:
    used = set(x.xi) | set(y.xi)
    ps, pt = d.pred(x.node), d.pred(y.node)
    s, a, t, b = x.node, x.xi, y.node, y.xi
    for i in range(min(len(ps), len(pt))):
        if ps[i] != pt[i]:
            # first difference at a node; ξ agree before it
            u = Point(ps[i], a[:i])
            head = [x] + _up(d, x, i)
            lt = d.lh(t)
            if lt == i:
                return head + [y]
            return head + _descend_sibling(d, u, t, b, used)
        if i < min(len(a), len(b)) and a[i] != b[i]:
            m = i + 1
            u = Point(ps[m], a[:m])
            head = [x] + _up(d, x, m)
            if d.lh(t) == m:
                return head + [y]
            mid = Point(pt[m], _lower_last(b[:m], m - 1, used))
            return head + [mid] + _descend_parent(d, mid, t, b, used)
    # one path is a prefix of the other and the ξ agree: x extends y
    return [x] + _up(d, x, d.lh(t))


@dataclass(frozen=True)
class ElementaryChain:
    elements: tuple[AppliedElement, ...]
    steps: tuple[Step, ...]
    carrier_size: int


def elementary_decompose(d: Dendrogram, x: AppliedElement, y: AppliedElement, P: Predilator | None = None) -> ElementaryChain:
    """A chain x = z0 < z1 < ... < zk = y of elementary comparisons in Dec•(d)."""
    P = dec_bullet(d) if P is None else P
    if compare_applied(P, x, y) != Ordering.LESS:
        raise NotLess(f"{x} is not below {y}")
    pts = _chain(d, to_point(d, x), to_point(d, y))
    values = sorted({v for p in pts for v in p.xi})
    rank = {v: i for i, v in enumerate(values)}
    pts = [Point(p.node, tuple(rank[v] for v in p.xi)) for p in pts]
    elems = tuple(to_applied(p) for p in pts)
    steps = []
    for lo, hi, elo, ehi in zip(pts, pts[1:], elems, elems[1:]):
        kinds = classify(d, lo, hi)
        if not kinds or compare_applied(P, elo, ehi) != Ordering.LESS:
            raise AssertionError(f"step {elo} < {ehi} is not elementary")
        steps.append(Step(kinds[0][0], kinds[0][1], elo, ehi))
    return ElementaryChain(elems, tuple(steps), len(values))


def elementary_instances(d: Dendrogram, P: Predilator | None = None) -> list[tuple]:
    """All (s, t, diagram) with s <_diagram t an elementary comparison of Dec•(d)."""
    P = dec_bullet(d) if P is None else P
    out = []
    for s in d.nodes:
        for t in d.nodes:
            for diagram in enum_arity_diagrams(d.lh(s), d.lh(t)):
                a, b = diagram.realize()
                lo = to_point(d, AppliedElement(s, a))
                hi = to_point(d, AppliedElement(t, b))
                if classify(d, lo, hi):
                    out.append((s, t, diagram))
    return out


def all_instances(d: Dendrogram) -> list[tuple]:
    return [
        (s, t, diagram)
        for s in d.nodes
        for t in d.nodes
        for diagram in enum_arity_diagrams(d.lh(s), d.lh(t))
    ]


def preserves(P: Predilator, Q: Predilator, f: dict, instances) -> bool:
    return all(compare_under_diagram(Q, f[s], f[t], dg) for s, t, dg in instances if compare_under_diagram(P, s, t, dg))


def reflects_all(P: Predilator, Q: Predilator, f: dict, instances) -> bool:
    return all(compare_under_diagram(P, s, t, dg) == compare_under_diagram(Q, f[s], f[t], dg) for s, t, dg in instances)


def predecessor_property(d: Dendrogram, x, y) -> bool | None:
    """For lh x = lh y = m and x(m) < y(m): x, y share their parent with x < y,
    or x'(m minus the ecode of x') < y(m) for the parent x' of x.

    Returns None when the hypothesis fails.
    """
    P = dec_bullet(d)
    m = d.lh(x)
    if d.lh(y) != m or m == 0:
        return None
    full = tuple(range(m))
    if compare_applied(P, AppliedElement(x, full), AppliedElement(y, full)) != Ordering.LESS:
        return None
    xp = d.parent[x]
    if xp == d.parent[y] and d.sibling_index[x] < d.sibling_index[y]:
        return True
    reduced = tuple(v for v in full if v != d.ecode[xp])
    return compare_applied(P, AppliedElement(xp, reduced), AppliedElement(y, full)) == Ordering.LESS
