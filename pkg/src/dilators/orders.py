"""Finite orders, increasing maps, arity diagrams and sequence utilities."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from .errors import BoundExceeded, LabelNotInCarrier, NotIncreasing, SlotMismatch

DIAGRAM_BOUND = 6


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    def __neg__(self) -> "Ordering":
        return Ordering(-int(self))


def cmp_values(x: Any, y: Any) -> Ordering:
    if x < y:
        return Ordering.LESS
    if y < x:
        return Ordering.GREATER
    return Ordering.EQUAL


@dataclass(frozen=True)
class FiniteOrder:
    labels: tuple
    rank: Mapping[Hashable, int] = field(compare=False, repr=False)

    def __init__(self, labels: Iterable[Hashable]):
        labels = tuple(labels)
        rank = {x: i for i, x in enumerate(labels)}
        if len(rank) != len(labels):
            raise ValueError("labels of a finite order must be distinct")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "rank", rank)

    @classmethod
    def initial(cls, n: int) -> "FiniteOrder":
        return cls(range(n))

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, x) -> bool:
        return x in self.rank

    def compare(self, x, y) -> Ordering:
        return cmp_values(self.rank[x], self.rank[y])

    def less(self, x, y) -> bool:
        return self.rank[x] < self.rank[y]


@dataclass(frozen=True)
class IncreasingMap:
    source_size: int
    target_size: int
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.source_size:
            raise NotIncreasing(f"length {len(vals)} does not match source size {self.source_size}")
        if any(v < 0 or v >= self.target_size for v in vals):
            raise NotIncreasing(f"values {vals} leave 0..{self.target_size - 1}")
        if any(a >= b for a, b in zip(vals, vals[1:])):
            raise NotIncreasing(f"values {vals} are not strictly increasing")

    @classmethod
    def of(cls, values: Sequence[int], target_size: int) -> "IncreasingMap":
        return cls(len(values), target_size, tuple(values))

    @classmethod
    def identity(cls, n: int) -> "IncreasingMap":
        return cls(n, n, tuple(range(n)))

    def __call__(self, i: int) -> int:
        return self.values[i]

    def image(self) -> frozenset[int]:
        return frozenset(self.values)

    def compose(self, inner: "IncreasingMap") -> "IncreasingMap":
        """self after inner."""
        if inner.target_size != self.source_size:
            raise NotIncreasing("maps do not compose")
        return IncreasingMap(inner.source_size, self.target_size, tuple(self.values[v] for v in inner.values))


def enumerate_increasing(n: int, m: int) -> Iterable[IncreasingMap]:
    for vals in itertools.combinations(range(m), n):
        yield IncreasingMap(n, m, vals)


@dataclass(frozen=True)
class ArityDiagram:
    """Two increasing maps into a common join whose ranges cover it."""

    e0: IncreasingMap
    e1: IncreasingMap

    def __post_init__(self):
        if self.e0.target_size != self.e1.target_size:
            raise ValueError("legs of an arity diagram need a common target")
        if self.e0.image() | self.e1.image() != frozenset(range(self.e0.target_size)):
            raise ValueError("ranges of an arity diagram must cover the join")

    @property
    def n0(self) -> int:
        return self.e0.source_size

    @property
    def n1(self) -> int:
        return self.e1.source_size

    @property
    def n_join(self) -> int:
        return self.e0.target_size

    @property
    def n_meet(self) -> int:
        return len(self.e0.image() & self.e1.image())

    @property
    def meet_maps(self) -> tuple[IncreasingMap, IncreasingMap]:
        common = sorted(self.e0.image() & self.e1.image())
        inv0 = {v: i for i, v in enumerate(self.e0.values)}
        inv1 = {v: i for i, v in enumerate(self.e1.values)}
        leg0 = IncreasingMap(len(common), self.n0, tuple(inv0[v] for v in common))
        leg1 = IncreasingMap(len(common), self.n1, tuple(inv1[v] for v in common))
        return leg0, leg1

    @property
    def is_trivial(self) -> bool:
        return self.n0 == self.n1 == self.n_join and self.e0 == self.e1

    def __neg__(self) -> "ArityDiagram":
        return ArityDiagram(self.e1, self.e0)

    @classmethod
    def of(cls, e0: Sequence[int], e1: Sequence[int]) -> "ArityDiagram":
        n = len(set(e0) | set(e1))
        return cls(IncreasingMap.of(tuple(e0), n), IncreasingMap.of(tuple(e1), n))

    def realize(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """The two ranges, as argument tuples in the carrier 0..n_join-1."""
        return self.e0.values, self.e1.values


def diag_pair(a: Iterable, b: Iterable, key: Callable | None = None) -> ArityDiagram:
    a = sorted(set(a), key=key)
    b = sorted(set(b), key=key)
    union = sorted(set(a) | set(b), key=key)
    pos = {x: i for i, x in enumerate(union)}
    n = len(union)
    return ArityDiagram(
        IncreasingMap(len(a), n, tuple(pos[x] for x in a)),
        IncreasingMap(len(b), n, tuple(pos[x] for x in b)),
    )


def diag(carrier: FiniteOrder, subsets: Sequence[Iterable]) -> dict[tuple[int, int], ArityDiagram]:
    """Pairwise diagrams of subsets of a finite order, keyed by index pairs."""
    subsets = [frozenset(s) for s in subsets]
    for s in subsets:
        for x in s:
            if x not in carrier:
                raise LabelNotInCarrier(x)
    key = carrier.rank.__getitem__
    return {
        (i, j): diag_pair(subsets[i], subsets[j], key=key)
        for i in range(len(subsets))
        for j in range(len(subsets))
    }


@lru_cache(maxsize=None)
def _arity_diagrams(n0: int, n1: int) -> tuple[ArityDiagram, ...]:
    out = []
    for n in range(max(n0, n1), n0 + n1 + 1):
        for v0 in itertools.combinations(range(n), n0):
            rest = frozenset(range(n)) - frozenset(v0)
            for v1 in itertools.combinations(range(n), n1):
                if rest <= frozenset(v1):
                    out.append(ArityDiagram(IncreasingMap(n0, n, v0), IncreasingMap(n1, n, v1)))
    return tuple(out)


def enum_arity_diagrams(n0: int, n1: int, bound: int = DIAGRAM_BOUND) -> list[ArityDiagram]:
    if n0 > bound or n1 > bound:
        raise BoundExceeded(f"arities ({n0}, {n1}) exceed the bound {bound}")
    return list(_arity_diagrams(n0, n1))


def kb_compare(a: Sequence, b: Sequence, comparators: Mapping[Hashable, Callable] | None = None) -> Ordering:
    """Kleene-Brouwer comparison: a proper extension is smaller.

    Without comparators the entries are compared with ``<``.  With comparators
    every entry is a ``(slot, value)`` pair and ``comparators[slot]`` decides.
    """
    for x, y in zip(a, b):
        if comparators is None:
            c = cmp_values(x, y)
        else:
            (sx, vx), (sy, vy) = x, y
            if sx != sy:
                raise SlotMismatch(f"slot {sx!r} against {sy!r}")
            c = Ordering(comparators[sx](vx, vy))
        if c != Ordering.EQUAL:
            return c
    if len(a) > len(b):
        return Ordering.LESS
    if len(a) < len(b):
        return Ordering.GREATER
    return Ordering.EQUAL


# Enumeration of finite sequences of naturals.  Block n holds the sequences of
# length <= n with entries < n that are not in block n-1, ordered by length and
# then lexicographically.


def _count_in_block(n: int, length: int) -> int:
    if length > n:
        return 0
    if length == n:
        return n**length
    return n**length - (n - 1) ** length


@lru_cache(maxsize=None)
def _block_size(n: int) -> int:
    return sum(_count_in_block(n, k) for k in range(n + 1))


def _block_of(s: Sequence[int]) -> int:
    if not s:
        return 0
    return max(len(s), max(s) + 1)


def _lex_rank_excluding(s: Sequence[int], n: int, exclude_small: bool) -> int:
    length = len(s)
    rank = 0
    for k, v in enumerate(s):
        rank += v * n ** (length - k - 1)
    if exclude_small:
        base = n - 1
        below = 0
        for k, v in enumerate(s):
            below += min(v, base) * base ** (length - k - 1)
            if v >= base:
                break
        rank -= below
    return rank


def seq_index(s: Sequence[int]) -> int:
    s = tuple(s)
    if any(v < 0 for v in s):
        raise ValueError("sequences of naturals only")
    n = _block_of(s)
    index = sum(_block_size(k) for k in range(n))
    index += sum(_count_in_block(n, k) for k in range(len(s)))
    return index + _lex_rank_excluding(s, n, exclude_small=len(s) < n)


def seq_at(i: int) -> tuple[int, ...]:
    if i < 0:
        raise ValueError("index must be natural")
    n = 0
    while i >= _block_size(n):
        i -= _block_size(n)
        n += 1
    length = 0
    while i >= _count_in_block(n, length):
        i -= _count_in_block(n, length)
        length += 1
    exclude = length < n
    out: list[int] = []
    small_so_far = True
    for k in range(length):
        rest = length - k - 1
        for d in range(n):
            small = small_so_far and d < n - 1
            count = n**rest - ((n - 1) ** rest if exclude and small else 0)
            if i < count:
                out.append(d)
                small_so_far = small
                break
            i -= count
    return tuple(out)


def is_prefix(s: Sequence, t: Sequence) -> bool:
    return len(s) <= len(t) and tuple(t[: len(s)]) == tuple(s)
