"""Predilators in abstract form: term order, priority permutations and distances."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from .errors import ArityMismatch, BoundExceeded, UnknownTerm
from .orders import (
    DIAGRAM_BOUND,
    ArityDiagram,
    FiniteOrder,
    IncreasingMap,
    Ordering,
    cmp_values,
    enum_arity_diagrams,
)

Term = Hashable


@dataclass(frozen=True)
class AppliedElement:
    term: Term
    args: tuple

    def __str__(self) -> str:
        return f"{self.term}({','.join(map(str, self.args))})"


@dataclass(frozen=True, eq=False)
class Predilator:
    """A finite predilator.

    ``terms`` lists the field in increasing term order; ``dist`` holds the
    distance of every unordered pair of distinct terms under both orientations.
    The constructor does not validate; use :func:`validate_predilator`.
    """

    terms: tuple
    arity: Mapping[Term, int]
    sigma: Mapping[Term, tuple[int, ...]]
    dist: Mapping[tuple[Term, Term], int]
    position: Mapping[Term, int] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "arity", dict(self.arity))
        object.__setattr__(self, "sigma", {t: tuple(v) for t, v in self.sigma.items()})
        object.__setattr__(self, "dist", dict(self.dist))
        object.__setattr__(self, "position", {t: i for i, t in enumerate(self.terms)})

    @classmethod
    def build(cls, terms: Sequence[Term], arity: Mapping, sigma: Mapping | None = None, dist: Mapping | None = None):
        """Build from one-sided data: ``dist`` may list each pair once."""
        sigma = dict(sigma or {})
        for t in terms:
            sigma.setdefault(t, tuple(range(arity[t])))
        table: dict = {}
        for (s, t), m in (dist or {}).items():
            table[(s, t)] = m
            table[(t, s)] = m
        for s, t in itertools.permutations(terms, 2):
            table.setdefault((s, t), 0)
        return cls(tuple(terms), dict(arity), sigma, table)

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, t) -> bool:
        return t in self.position

    def __eq__(self, other) -> bool:
        if not isinstance(other, Predilator):
            return NotImplemented
        return (
            self.terms == other.terms
            and self.arity == other.arity
            and self.sigma == other.sigma
            and {k: v for k, v in self.dist.items() if k[0] != k[1]}
            == {k: v for k, v in other.dist.items() if k[0] != k[1]}
        )

    def __hash__(self) -> int:
        return hash(self.terms)

    def p(self, s: Term, t: Term) -> int:
        if s == t and (s, t) not in self.dist:
            return self.arity[s]
        try:
            return self.dist[(s, t)]
        except KeyError:
            raise UnknownTerm(f"no distance for ({s!r}, {t!r})") from None

    def term_compare(self, s: Term, t: Term) -> Ordering:
        try:
            return cmp_values(self.position[s], self.position[t])
        except KeyError as exc:
            raise UnknownTerm(exc.args[0]) from None

    def restrict(self, terms: Iterable[Term]) -> "Predilator":
        keep = set(terms)
        order = tuple(t for t in self.terms if t in keep)
        return Predilator(
            order,
            {t: self.arity[t] for t in order},
            {t: self.sigma[t] for t in order},
            {(s, t): m for (s, t), m in self.dist.items() if s in keep and t in keep},
        )

    def rename(self, f: Callable[[Term], Term] | Mapping) -> "Predilator":
        g = f.__getitem__ if isinstance(f, Mapping) else f
        return Predilator(
            tuple(g(t) for t in self.terms),
            {g(t): k for t, k in self.arity.items()},
            {g(t): v for t, v in self.sigma.items()},
            {(g(s), g(t)): m for (s, t), m in self.dist.items()},
        )

    def max_arity(self) -> int:
        return max(self.arity.values(), default=0)

    def nullary(self) -> tuple:
        return tuple(t for t in self.terms if self.arity[t] == 0)


def empty_predilator() -> Predilator:
    return Predilator((), {}, {}, {})


def x_plus_x() -> Predilator:
    """X ↦ X + X: two unary terms a < b at distance 0."""
    return Predilator.build(["a", "b"], {"a": 1, "b": 1}, dist={("a", "b"): 0})


def identity_predilator(name: Term = "x") -> Predilator:
    return Predilator.build([name], {name: 1})


def ordered_sum(left: Predilator, right: Predilator, tags: tuple = ("L", "R")) -> Predilator:
    """Disjoint union with every left term below every right term, cross distance 0."""
    lt, rt = tags
    L = left.rename(lambda t: (lt, t))
    R = right.rename(lambda t: (rt, t))
    dist = {**L.dist, **R.dist}
    for s in L.terms:
        for t in R.terms:
            dist[(s, t)] = dist[(t, s)] = 0
    return Predilator(L.terms + R.terms, {**L.arity, **R.arity}, {**L.sigma, **R.sigma}, dist)


# -- comparison ---------------------------------------------------------------


def compare_applied(P: Predilator, x: AppliedElement, y: AppliedElement, key: Callable | None = None) -> Ordering:
    """Compare two applied elements via the priority permutations and distance."""
    s, t = x.term, y.term
    if len(x.args) != P.arity[s] or len(y.args) != P.arity[t]:
        raise ArityMismatch(f"{x} or {y} has the wrong number of arguments")
    a, b = x.args, y.args
    if key is not None:
        a = tuple(map(key, a))
        b = tuple(map(key, b))
    ss, st = P.sigma[s], P.sigma[t]
    for j in range(P.p(s, t)):
        c = cmp_values(a[ss[j]], b[st[j]])
        if c != Ordering.EQUAL:
            return c
    return P.term_compare(s, t)


def compare_under_diagram(P: Predilator, s: Term, t: Term, d: ArityDiagram) -> bool:
    if d.n0 != P.arity[s] or d.n1 != P.arity[t]:
        raise ArityMismatch(f"diagram ({d.n0},{d.n1}) against arities ({P.arity[s]},{P.arity[t]})")
    a, b = d.realize()
    return compare_applied(P, AppliedElement(s, a), AppliedElement(t, b)) == Ordering.LESS


def apply_order(P: Predilator, n: int, limit: int | None = None) -> FiniteOrder:
    """P(n) as a sorted finite order; ``n=None`` means the naturals truncated at ``limit``."""
    if n is None:
        if limit is None:
            raise BoundExceeded("a lazy carrier needs a limit")
        n = limit
    elems = [
        AppliedElement(t, args)
        for t in P.terms
        for args in itertools.combinations(range(n), P.arity[t])
    ]
    elems.sort(key=cmp_to_key(lambda x, y: int(compare_applied(P, x, y))))
    return FiniteOrder(elems)


def apply_map(P: Predilator, f: IncreasingMap, x: AppliedElement) -> AppliedElement:
    return AppliedElement(x.term, tuple(f(i) for i in x.args))


def support(x: AppliedElement) -> frozenset:
    return frozenset(x.args)


# -- validation ----------------------------------------------------------------


@dataclass
class Violation:
    kind: str
    witness: tuple
    detail: str = ""

    def __str__(self) -> str:
        w = ", ".join(map(repr, self.witness))
        return f"{self.kind}: ({w}) {self.detail}".rstrip()


@dataclass
class Report:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def add(self, kind: str, *witness, detail: str = "") -> None:
        self.violations.append(Violation(kind, tuple(witness), detail))


VIOLATION_KINDS = (
    "duplicate-term",
    "missing-data",
    "bad-arity",
    "sigma-length",
    "sigma-not-permutation",
    "missing-dist",
    "dist-range",
    "dist-asymmetric",
    "self-dist",
    "dist-bound",
    "ultrametric",
    "sigma-compat",
)


def validate_predilator(P: Predilator) -> Report:
    rep = Report()
    terms = P.terms
    if len(set(terms)) != len(terms):
        seen = set()
        for t in terms:
            if t in seen:
                rep.add("duplicate-term", t)
            seen.add(t)
        return rep
    for t in terms:
        if t not in P.arity or t not in P.sigma:
            rep.add("missing-data", t)
    if not rep.ok:
        return rep
    for t in terms:
        k = P.arity[t]
        if not isinstance(k, int) or k < 0:
            rep.add("bad-arity", t, detail=f"arity {k!r}")
            continue
        sig = P.sigma[t]
        if len(sig) != k:
            rep.add("sigma-length", t, detail=f"{sig} for arity {k}")
        elif sorted(sig) != list(range(k)):
            rep.add("sigma-not-permutation", t, detail=str(sig))
    if not rep.ok:
        return rep

    for s in terms:
        if (s, s) in P.dist and P.dist[(s, s)] != P.arity[s]:
            rep.add("self-dist", s, detail=f"{P.dist[(s, s)]} != arity {P.arity[s]}")
    for s, t in itertools.combinations(terms, 2):
        if (s, t) not in P.dist or (t, s) not in P.dist:
            rep.add("missing-dist", s, t)
            continue
        m, m2 = P.dist[(s, t)], P.dist[(t, s)]
        for v in (m, m2):
            if not isinstance(v, int) or v < 0:
                rep.add("dist-range", s, t, detail=f"value {v!r}")
                break
        else:
            if m != m2:
                rep.add("dist-asymmetric", s, t, detail=f"{m} vs {m2}")
            elif m > min(P.arity[s], P.arity[t]):
                rep.add("dist-bound", s, t, detail=f"{m} > min arity")
    if not rep.ok:
        return rep

    for i, j, k in itertools.combinations(range(len(terms)), 3):
        s, t, u = terms[i], terms[j], terms[k]
        if P.p(s, u) != min(P.p(s, t), P.p(t, u)):
            rep.add("ultrametric", s, t, u)
    for s, t in itertools.combinations(terms, 2):
        m = P.p(s, t)
        ss, st = P.sigma[s], P.sigma[t]
        for i, j in itertools.combinations(range(m), 2):
            if (ss[i] < ss[j]) != (st[i] < st[j]):
                rep.add("sigma-compat", s, t, detail=f"positions {i},{j}")
                break
    return rep


# -- embeddings ----------------------------------------------------------------


def relation_table(P: Predilator, s: Term, t: Term, bound: int = DIAGRAM_BOUND) -> tuple[bool, ...]:
    return tuple(compare_under_diagram(P, s, t, d) for d in enum_arity_diagrams(P.arity[s], P.arity[t], bound))


def check_embedding(P: Predilator, Q: Predilator, f: Mapping, bound: int = DIAGRAM_BOUND) -> bool:
    """Does ``f`` preserve arities and every diagram relation?"""
    for t in P.terms:
        if t not in f or f[t] not in Q or Q.arity[f[t]] != P.arity[t]:
            return False
    for s in P.terms:
        for t in P.terms:
            for d in enum_arity_diagrams(P.arity[s], P.arity[t], bound):
                if compare_under_diagram(P, s, t, d) != compare_under_diagram(Q, f[s], f[t], d):
                    return False
    return True


def _data_agrees(P: Predilator, Q: Predilator, s, t, fs, ft) -> bool:
    if P.p(s, t) != Q.p(fs, ft):
        return False
    return P.term_compare(s, t) == Q.term_compare(fs, ft)


def embeds_by_data(P: Predilator, Q: Predilator, f: Mapping) -> bool:
    """Fast equivalent of :func:`check_embedding` through the comparison data."""
    for t in P.terms:
        if t not in f or f[t] not in Q:
            return False
        if Q.arity[f[t]] != P.arity[t] or Q.sigma[f[t]] != P.sigma[t]:
            return False
    for s, t in itertools.combinations(P.terms, 2):
        if f[s] == f[t] or not _data_agrees(P, Q, s, t, f[s], f[t]):
            return False
    return True


def search_embeddings(P: Predilator, Q: Predilator, limit: int | None = None) -> Iterable[dict]:
    """Backtracking over arity- and order-respecting term maps."""
    terms = P.terms

    def extend(i: int, lo: int, f: dict):
        if i == len(terms):
            yield dict(f)
            return
        t = terms[i]
        for j in range(lo, len(Q.terms)):
            u = Q.terms[j]
            if Q.arity[u] != P.arity[t] or Q.sigma[u] != P.sigma[t]:
                continue
            if all(P.p(s, t) == Q.p(f[s], u) for s in terms[:i]):
                f[t] = u
                yield from extend(i + 1, j + 1, f)
                del f[t]

    count = 0
    for f in extend(0, 0, {}):
        yield f
        count += 1
        if limit is not None and count >= limit:
            return


def search_embedding(P: Predilator, Q: Predilator) -> dict | None:
    for f in search_embeddings(P, Q):
        if check_embedding(P, Q, f):
            return f
    return None


def search_isomorphism(P: Predilator, Q: Predilator) -> dict | None:
    if len(P) != len(Q):
        return None
    return search_embedding(P, Q)


# -- coded functors --------------------------------------------------------------


@dataclass(frozen=True)
class CodedFunctor:
    """A functor on finite ordinals given by its action on objects and maps."""

    order_at: Callable[[int], FiniteOrder]
    map_at: Callable[[IncreasingMap, Any], Any]
    supp_at: Callable[[int, Any], frozenset]


def coded_functor(P: Predilator) -> CodedFunctor:
    return CodedFunctor(
        order_at=lambda n: apply_order(P, n),
        map_at=lambda f, x: apply_map(P, f, x),
        supp_at=lambda n, x: support(x),
    )
