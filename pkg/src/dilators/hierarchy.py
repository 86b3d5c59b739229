"""Families of finite orders and finite predilators computed from a decidable tree."""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Callable, Iterable, Sequence

from .errors import InconsistentSigma, InvalidPredilator, ParseError
from .orders import FiniteOrder, IncreasingMap, Ordering, cmp_values, enumerate_increasing, kb_compare, seq_at
from .predilator import CodedFunctor, Predilator, Report, validate_predilator

Seq = tuple


@dataclass(frozen=True)
class DecidableTree:
    """A membership predicate on pairs of equal-length sequences.

    The predicate is expected to be closed under taking equal-length prefixes
    of both coordinates; :func:`closure_check` samples this.
    """

    name: str
    member: Callable[[Seq, Seq], bool] = field(compare=False)

    def __contains__(self, pair) -> bool:
        s, t = pair
        if len(s) != len(t):
            raise ValueError("tree membership needs sequences of equal length")
        return bool(self.member(tuple(s), tuple(t)))


def full_tree() -> DecidableTree:
    return DecidableTree("full", lambda s, t: True)


def empty_tree() -> DecidableTree:
    """Only the root pair."""
    return DecidableTree("empty", lambda s, t: len(t) == 0)


def bounded_tree(bound: int) -> DecidableTree:
    """Witness entries below ``bound``; ill-founded along the zero branch when bound >= 1."""
    return DecidableTree(f"bounded:{bound}", lambda s, t: all(v < bound for v in t))


def descending_run_tree() -> DecidableTree:
    """Strictly decreasing witnesses dominated by the input; every section is finite."""

    def member(s, t):
        return all(v <= u for v, u in zip(t, s)) and all(a > b for a, b in zip(t, t[1:]))

    return DecidableTree("descending-run", member)


def _coin(seed: int, s: Seq, t: Seq) -> float:
    h = hashlib.sha256(f"{seed}|{s}|{t}".encode()).digest()
    return int.from_bytes(h[:8], "big") / 2**64


def seeded_tree(seed: int, bound: int = 3, keep: float = 0.7) -> DecidableTree:
    """A pseudo-random finitely-branching tree, closed under prefixes by construction."""

    def member(s, t):
        if any(v >= bound for v in t):
            return False
        return all(_coin(seed, s[:k], t[:k]) < keep for k in range(1, len(t) + 1))

    return DecidableTree(f"seeded:{seed}", member)


def table_tree(pairs: Iterable[tuple[Seq, Seq]], name: str = "table") -> DecidableTree:
    members = frozenset((tuple(s), tuple(t)) for s, t in pairs) | {((), ())}
    return DecidableTree(name, lambda s, t: (s, t) in members)


def tree_from_spec(spec: str) -> DecidableTree:
    """``full``, ``empty``, ``bounded:B``, ``descending-run`` or ``seeded:K``."""
    head, _, arg = spec.strip().partition(":")
    try:
        if head == "full" and not arg:
            return full_tree()
        if head == "empty" and not arg:
            return empty_tree()
        if head == "descending-run" and not arg:
            return descending_run_tree()
        if head == "bounded":
            return bounded_tree(int(arg))
        if head == "seeded":
            return seeded_tree(int(arg))
    except ValueError:
        pass
    raise ParseError(f"unknown tree specification {spec!r}")


def closure_check(T: DecidableTree, samples: Iterable[tuple[Seq, Seq]]) -> Report:
    """Report members among ``samples`` whose prefixes are missing."""
    rep = Report()
    for s, t in samples:
        if (s, t) not in T:
            continue
        for k in range(len(s)):
            if (s[:k], t[:k]) not in T:
                rep.add("closure", s, t, detail=f"prefix of length {k} is not a member")
                break
    return rep


def sample_pairs(depth: int, bound: int) -> list[tuple[Seq, Seq]]:
    out = []
    for n in range(depth + 1):
        for s in itertools.product(range(bound), repeat=n):
            for t in itertools.product(range(bound), repeat=n):
                out.append((s, t))
    return out


# -- orders ----------------------------------------------------------------------


def kb_seq_compare(a: Seq, b: Seq) -> Ordering:
    return kb_compare(list(a), list(b))


def _in_tree(T: DecidableTree, s: Seq, code: Seq) -> bool:
    return (s[: len(code)], code) in T


def order_family_step(T: DecidableTree, s: Sequence[int]) -> FiniteOrder:
    """The order on ``range(len(s))``: indices whose code is off the tree come
    first in index order, then the rest ordered by their codes."""
    s = tuple(s)
    codes = [seq_at(i) for i in range(len(s))]
    inside = [_in_tree(T, s, c) for c in codes]

    def cmp(i, j):
        if inside[i] and inside[j]:
            return int(kb_seq_compare(codes[i], codes[j]))
        if inside[i] != inside[j]:
            return 1 if inside[i] else -1
        return int(cmp_values(i, j))

    return FiniteOrder(sorted(range(len(s)), key=cmp_to_key(cmp)))


def cantor_pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def pair_sequence(s: Sequence[int], t: Sequence[int]) -> Seq:
    if len(s) != len(t):
        raise ValueError("paired sequences must have equal length")
    return tuple(cantor_pair(a, b) for a, b in zip(s, t))


def relative_order(T: DecidableTree, s: Sequence[int], t: Sequence[int]) -> FiniteOrder:
    """The two-parameter family, read as the one-parameter family on paired inputs."""
    return order_family_step(T, pair_sequence(s, t))


# -- predilators -------------------------------------------------------------------


def code(i: int) -> Seq:
    """The code of term ``i``: the enumeration skips the empty sequence."""
    return seq_at(i + 1)


def _code_dist(a: Seq, b: Seq) -> int:
    m = 0
    for u, v in zip(a, b):
        if u != v:
            break
        m += 1
    return m


def term_sigma(T: DecidableTree, s: Seq, i: int) -> tuple[int, ...]:
    c = code(i)
    order = relative_order(T, s[: len(c)], c)
    if sorted(order.labels) != list(range(len(c))):
        raise InconsistentSigma(f"order for term {i} is not a linear order on {len(c)}")
    return tuple(order.rank[j] for j in range(len(c)))


def dilator_family_step(T: DecidableTree, s: Sequence[int]) -> Predilator:
    s = tuple(s)
    n = len(s)
    codes = {i: code(i) for i in range(n)}
    terms = sorted(range(n), key=cmp_to_key(lambda i, j: int(kb_seq_compare(codes[i], codes[j]))))
    return Predilator(
        tuple(terms),
        {i: len(codes[i]) for i in range(n)},
        {i: term_sigma(T, s, i) for i in range(n)},
        {(i, j): _code_dist(codes[i], codes[j]) for i, j in itertools.permutations(range(n), 2)},
    )


def shoenfield_truncation(T: DecidableTree, s: Sequence[int], n: int) -> FiniteOrder:
    """Interleaved sequences ⟨r0, ξ0, r1, ξ1, ...⟩ under Kleene-Brouwer order, where
    r is the code of a term and k ↦ ξk is increasing from the relative order into n."""
    s = tuple(s)
    seqs = []
    for i in range(len(s)):
        c = code(i)
        rel = relative_order(T, s[: len(c)], c)
        for f in enumerate_increasing(len(c), n):
            xi = [f(rel.rank[k]) for k in range(len(c))]
            seqs.append(tuple(v for pair in zip(c, xi) for v in pair))
    return FiniteOrder(sorted(seqs, key=cmp_to_key(lambda a, b: int(kb_seq_compare(a, b)))))


def shoenfield_functor(T: DecidableTree, s: Sequence[int]) -> CodedFunctor:
    def move(f: IncreasingMap, x: Seq) -> Seq:
        return tuple(f(v) if k % 2 else v for k, v in enumerate(x))

    return CodedFunctor(
        order_at=lambda n: shoenfield_truncation(T, s, n),
        map_at=move,
        supp_at=lambda n, x: frozenset(x[1::2]),
    )


# -- family sweeps -------------------------------------------------------------------


@dataclass(frozen=True)
class OrderFamily:
    tree: DecidableTree

    def step(self, s: Sequence[int]) -> FiniteOrder:
        return order_family_step(self.tree, s)


@dataclass(frozen=True)
class DilatorFamily:
    tree: DecidableTree

    def step(self, s: Sequence[int]) -> Predilator:
        return dilator_family_step(self.tree, s)


def _is_strict_linear(labels: Sequence, less: Callable) -> bool:
    for a, b in itertools.permutations(labels, 2):
        if less(a, b) == less(b, a):
            return False
    for a, b, c in itertools.permutations(labels, 3):
        if less(a, b) and less(b, c) and not less(a, c):
            return False
    return True


def family_check(family, prefixes: Iterable[Sequence[int]], depth: int, closure_bound: int = 3) -> Report:
    rep = Report()
    closure = closure_check(family.tree, sample_pairs(min(depth, 3), closure_bound))
    rep.violations.extend(closure.violations)
    is_dilator = isinstance(family, DilatorFamily)
    for prefix in prefixes:
        prefix = tuple(prefix)[:depth]
        prev = None
        for k in range(len(prefix) + 1):
            s = prefix[:k]
            try:
                v = family.step(s)
            except (InconsistentSigma, InvalidPredilator) as exc:
                rep.add("construction", s, detail=str(exc))
                break
            carrier = set(v.terms) if is_dilator else set(v.labels)
            if carrier != set(range(k)):
                rep.add("carrier", s, detail=f"carrier {sorted(carrier)}")
            if is_dilator:
                check = validate_predilator(v)
                for viol in check.violations:
                    rep.add("invalid-predilator", s, detail=str(viol))
                if prev is not None and v.restrict(range(k - 1)) != prev:
                    rep.add("restriction", s)
            else:
                if not _is_strict_linear(v.labels, v.less):
                    rep.add("linearity", s)
                if prev is not None and [x for x in v.labels if x < k - 1] != list(prev.labels):
                    rep.add("restriction", s)
            prev = v
    return rep


def random_tree(rng: random.Random) -> DecidableTree:
    kind = rng.randrange(5)
    if kind == 0:
        return full_tree()
    if kind == 1:
        return empty_tree()
    if kind == 2:
        return bounded_tree(rng.randrange(1, 4))
    if kind == 3:
        return descending_run_tree()
    return seeded_tree(rng.randrange(10**6))


# -- well-foundedness at a finite stage ----------------------------------------------------


def longest_descending_run(labels: Sequence[int], less: Callable) -> int:
    """Longest i0 < i1 < ... (as numbers) with i0 > i1 > ... in the order ``less``."""
    best: dict[int, int] = {}
    for j in sorted(labels):
        best[j] = 1 + max((best[i] for i in best if less(j, i)), default=0)
    return max(best.values(), default=0)


def in_tree_codes(T: DecidableTree, s: Sequence[int]) -> dict[int, Seq]:
    s = tuple(s)
    return {i: seq_at(i) for i in range(len(s)) if _in_tree(T, s, seq_at(i))}


def kb_chain_search(T: DecidableTree, s: Sequence[int]) -> int:
    """Longest enumeration-increasing, KB-decreasing chain among the tree nodes
    coded below ``len(s)``, found by exhaustive search over subsets."""
    codes = in_tree_codes(T, s)
    idx = sorted(codes)
    best = 0
    for r in range(len(idx), 0, -1):
        for combo in itertools.combinations(idx, r):
            if all(kb_seq_compare(codes[a], codes[b]) == Ordering.GREATER for a, b in zip(combo, combo[1:])):
                return r
    return best


def truncated_descent(T: DecidableTree, s: Sequence[int]) -> tuple[int, int]:
    """(longest descending run of the stage order restricted to in-tree indices,
    the same quantity computed on the tree by chain search)."""
    order = order_family_step(T, s)
    inside = sorted(in_tree_codes(T, s))
    return longest_descending_run(inside, order.less), kb_chain_search(T, s)


def interleave(d: Predilator, x) -> Seq:
    """The truncation element matching the applied element ``x`` of a family member."""
    c = code(x.term)
    sig = d.sigma[x.term]
    return tuple(v for k in range(d.arity[x.term]) for v in (c[k], x.args[sig[k]]))
