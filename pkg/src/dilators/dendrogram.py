"""Dendrograms: ordered forests with ecodes, and their translation to predilators."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, cmp_to_key
from typing import Hashable, Iterable, Mapping

from .errors import InvalidDendrogram
from .orders import FiniteOrder, Ordering, kb_compare
from .predilator import AppliedElement, Predilator, Report

Node = Hashable


@dataclass(frozen=True, eq=False)
class Dendrogram:
    """An ordered forest.

    ``roots`` and each ``children[x]`` are listed in sibling order; ``ecode``
    is defined exactly on the non-terminal nodes.
    """

    roots: tuple
    children: Mapping[Node, tuple]
    ecode: Mapping[Node, int]

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(self.roots))
        kids = {x: tuple(c) for x, c in self.children.items()}
        for x in self._all_nodes(kids):
            kids.setdefault(x, ())
        object.__setattr__(self, "children", kids)
        object.__setattr__(self, "ecode", dict(self.ecode))

    def _all_nodes(self, kids) -> set:
        out = set(self.roots) | set(kids)
        for c in kids.values():
            out.update(c)
        return out

    @cached_property
    def nodes(self) -> tuple:
        """Nodes in depth-first pre-order."""
        out = []
        stack = list(reversed(self.roots))
        seen = set()
        while stack:
            x = stack.pop()
            if x in seen:
                raise InvalidDendrogram(f"node {x!r} is reached twice")
            seen.add(x)
            out.append(x)
            stack.extend(reversed(self.children[x]))
        return tuple(out)

    @cached_property
    def parent(self) -> dict:
        par = {x: None for x in self.roots}
        for x, kids in self.children.items():
            for y in kids:
                par[y] = x
        return par

    @cached_property
    def sibling_index(self) -> dict:
        idx = {x: i for i, x in enumerate(self.roots)}
        for kids in self.children.values():
            idx.update({y: i for i, y in enumerate(kids)})
        return idx

    @cached_property
    def _paths(self) -> dict:
        paths = {}
        for x in self.nodes:
            p = self.parent[x]
            paths[x] = (x,) if p is None else paths[p] + (x,)
        return paths

    def pred(self, x: Node) -> tuple:
        return self._paths[x]

    def lh(self, x: Node) -> int:
        return len(self._paths[x]) - 1

    def is_terminal(self, x: Node) -> bool:
        return not self.children[x]

    @cached_property
    def terminals(self) -> tuple:
        return tuple(x for x in self.nodes if not self.children[x])

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dendrogram):
            return NotImplemented
        return (
            self.roots == other.roots
            and {x: c for x, c in self.children.items() if c} == {x: c for x, c in other.children.items() if c}
            and self.ecode == other.ecode
        )

    def __hash__(self) -> int:
        return hash(self.roots)

    def path_compare(self, x: Node, y: Node) -> Ordering:
        """Kleene-Brouwer order of the paths to ``x`` and ``y``."""
        idx = self.sibling_index
        return kb_compare([idx[v] for v in self.pred(x)], [idx[v] for v in self.pred(y)])

    def sigma(self, x: Node) -> tuple[int, ...]:
        """Priority permutation decoded from the ecodes along the path to ``x``."""
        path = self.pred(x)
        slots: list[int] = []
        for i, v in enumerate(path[:-1]):
            slots.insert(self.ecode[v], i)
        out = [0] * len(slots)
        for rank, i in enumerate(slots):
            out[i] = rank
        return tuple(out)

    def common_prefix(self, x: Node, y: Node) -> int:
        n = 0
        for u, v in zip(self.pred(x), self.pred(y)):
            if u != v:
                break
            n += 1
        return n

    def relabel(self, f: Mapping) -> "Dendrogram":
        return Dendrogram(
            tuple(f[x] for x in self.roots),
            {f[x]: tuple(f[y] for y in c) for x, c in self.children.items()},
            {f[x]: e for x, e in self.ecode.items()},
        )


def validate_dendrogram(d: Dendrogram) -> Report:
    rep = Report()
    every = d._all_nodes(d.children)
    count: dict = {}
    for x in d.roots:
        count[x] = count.get(x, 0) + 1
    for kids in d.children.values():
        for y in kids:
            count[y] = count.get(y, 0) + 1
    for x in sorted(every, key=repr):
        if count.get(x, 0) != 1:
            rep.add("not-a-forest", x, detail=f"occurs {count.get(x, 0)} times as root or child")
    if not rep.ok:
        return rep
    try:
        reached = set(d.nodes)
    except InvalidDendrogram as exc:
        rep.add("not-a-forest", detail=str(exc))
        return rep
    for x in sorted(every - reached, key=repr):
        rep.add("unreachable", x)
    if not rep.ok:
        return rep
    for x in d.nodes:
        terminal = d.is_terminal(x)
        if terminal and x in d.ecode:
            rep.add("ecode-on-terminal", x)
        elif not terminal and x not in d.ecode:
            rep.add("ecode-missing", x)
        elif not terminal:
            e = d.ecode[x]
            if not isinstance(e, int) or e < 0 or e > d.lh(x):
                rep.add("ecode-range", x, detail=f"ecode {e!r} with length {d.lh(x)}")
    for x in d.ecode:
        if x not in every:
            rep.add("ecode-unknown-node", x)
    return rep


def _require_valid(d: Dendrogram) -> None:
    rep = validate_dendrogram(d)
    if not rep.ok:
        raise InvalidDendrogram(str(rep.violations[0]))


def is_trekkable(d: Dendrogram) -> bool:
    nodes = set(d.nodes)
    if any(not isinstance(x, int) for x in nodes) or nodes != set(range(len(nodes))):
        return False
    for x in d.nodes:
        if any(y <= x for y in d.children[x]):
            return False
    for sibs in [d.roots, *d.children.values()]:
        if list(sibs) != sorted(sibs):
            return False
    return True


def _predilator_on(d: Dendrogram, field_nodes: Iterable[Node]) -> Predilator:
    terms = sorted(field_nodes, key=cmp_to_key(lambda x, y: int(d.path_compare(x, y))))
    dist = {}
    for x, y in itertools.permutations(terms, 2):
        dist[(x, y)] = min(d.common_prefix(x, y), d.lh(x), d.lh(y))
    return Predilator(
        tuple(terms),
        {x: d.lh(x) for x in terms},
        {x: d.sigma(x) for x in terms},
        dist,
    )


def dec(d: Dendrogram) -> Predilator:
    _require_valid(d)
    return _predilator_on(d, d.terminals)


def dec_bullet(d: Dendrogram) -> Predilator:
    """Like :func:`dec`, but every node is a term."""
    _require_valid(d)
    return _predilator_on(d, d.nodes)


def cell(P: Predilator) -> Dendrogram:
    """The dendrogram of distance classes ``[t]_m`` for ``m <= arity(t)``."""

    def cls(t, m):
        return (m, tuple(s for s in P.terms if s == t or P.p(s, t) > m))

    roots: list = []
    children: dict = {}
    ecode: dict = {}
    for t in P.terms:
        sig = P.sigma[t]
        prev = None
        for m in range(P.arity[t] + 1):
            node = cls(t, m)
            siblings = roots if prev is None else children.setdefault(prev, [])
            if node not in siblings:
                siblings.append(node)
            children.setdefault(node, [])
            if m < P.arity[t]:
                ecode[node] = sum(1 for j in range(m) if sig[j] < sig[m])
            prev = node
    return Dendrogram(tuple(roots), {x: tuple(c) for x, c in children.items()}, ecode)


def bullet_name(x: Node) -> Node:
    return x + "•" if isinstance(x, str) else ("•", x)


def bullet(d: Dendrogram) -> Dendrogram:
    """Add a terminal x• right after every non-terminal x; terminals become bulleted."""
    _require_valid(d)

    def expand(level: Iterable[Node]) -> tuple:
        out = []
        for x in level:
            if not d.is_terminal(x):
                out.append(x)
            out.append(bullet_name(x))
        return tuple(out)

    children = {x: expand(d.children[x]) for x in d.nodes if not d.is_terminal(x)}
    return Dendrogram(expand(d.roots), children, dict(d.ecode))


def dendrogram_isomorphism(c: Dendrogram, d: Dendrogram) -> dict | None:
    """The unique structure-preserving bijection, if any."""
    out: dict = {}

    def match(xs, ys) -> bool:
        if len(xs) != len(ys):
            return False
        for x, y in zip(xs, ys):
            if c.ecode.get(x) != d.ecode.get(y):
                return False
            out[x] = y
            if not match(c.children[x], d.children[y]):
                return False
        return True

    return out if match(c.roots, d.roots) else None


def applied_to_sequence(d: Dendrogram, x: AppliedElement) -> tuple:
    """The interleaved sequence ⟨x0, ξ0, ..., x_m⟩ of a term of Dec or Dec•."""
    path = d.pred(x.term)
    sig = d.sigma(x.term)
    out: list = [path[0]]
    for i in range(len(path) - 1):
        out += [x.args[sig[i]], path[i + 1]]
    return tuple(out)


def _xi_vectors(d: Dendrogram, x: Node, n: int):
    """All ξ-vectors along the path to ``x`` with entries < n, from the ecode rule."""
    path = d.pred(x)

    def grow(prefix: tuple):
        i = len(prefix)
        if i == len(path) - 1:
            yield prefix
            return
        e = d.ecode[path[i]]
        for v in range(n):
            if v in prefix:
                continue
            if sum(1 for u in prefix if u < v) == e:
                yield from grow(prefix + (v,))

    yield from grow(())


def kb_sequence_compare(d: Dendrogram, u: tuple, v: tuple) -> Ordering:
    idx = d.sibling_index
    tagged_u = [("node", idx[w]) if i % 2 == 0 else ("xi", w) for i, w in enumerate(u)]
    tagged_v = [("node", idx[w]) if i % 2 == 0 else ("xi", w) for i, w in enumerate(v)]
    num = lambda a, b: (a > b) - (a < b)  # noqa: E731
    return kb_compare(tagged_u, tagged_v, {"node": num, "xi": num})


def apply_dendrogram(d: Dendrogram, n: int, include_intermediate: bool = False) -> FiniteOrder:
    _require_valid(d)
    nodes = d.nodes if include_intermediate else d.terminals
    seqs = []
    for x in nodes:
        path = d.pred(x)
        for xi in _xi_vectors(d, x, n):
            seq: list = [path[0]]
            for i, v in enumerate(xi):
                seq += [v, path[i + 1]]
            seqs.append(tuple(seq))
    seqs.sort(key=cmp_to_key(lambda u, v: int(kb_sequence_compare(d, u, v))))
    return FiniteOrder(seqs)


def dendrogram_is_flower(d: Dendrogram) -> bool:
    _require_valid(d)
    if all(d.lh(x) == 0 for x in d.nodes):
        return True
    for star in d.roots:
        if d.is_terminal(star):
            continue
        ok = True
        for x in d.nodes:
            if x == star:
                continue
            if d.lh(x) == 0:
                ok = d.is_terminal(x) and d.sibling_index[x] < d.sibling_index[star]
            else:
                ok = d.pred(x)[0] == star and (x not in d.ecode or d.ecode[x] < d.lh(x))
            if not ok:
                break
        if ok:
            return True
    return False
