"""Countably presented predilators and a search for descending sequences."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable

from .orders import Ordering, cmp_values
from .predilator import AppliedElement, Predilator, apply_order, compare_applied


@dataclass(frozen=True)
class CountablePredilator:
    """A predilator whose terms are enumerated by ``term_at(0), term_at(1), ...``."""

    term_at: Callable[[int], Hashable]
    arity: Callable[[Hashable], int]
    sigma: Callable[[Hashable], tuple]
    dist: Callable[[Hashable, Hashable], int]
    term_less: Callable[[Hashable, Hashable], bool]

    def compare(self, x: AppliedElement, y: AppliedElement) -> Ordering:
        s, t = x.term, y.term
        ss, st = self.sigma(s), self.sigma(t)
        p = self.arity(s) if s == t else self.dist(s, t)
        for j in range(p):
            c = cmp_values(x.args[ss[j]], y.args[st[j]])
            if c != Ordering.EQUAL:
                return c
        if s == t:
            return Ordering.EQUAL
        return Ordering.LESS if self.term_less(s, t) else Ordering.GREATER


def omega_star_column() -> CountablePredilator:
    """Nullary terms c0 > c1 > c2 > ... : every application contains a copy of ω*."""
    return CountablePredilator(
        term_at=lambda i: i,
        arity=lambda t: 0,
        sigma=lambda t: (),
        dist=lambda s, t: 0,
        term_less=lambda s, t: s > t,
    )


def _longest_bad_subsequence(elems, compare) -> list:
    # longest run with increasing enumeration index and strictly decreasing value
    best: list[list] = []
    for i, x in enumerate(elems):
        chain = [x]
        for j in range(i):
            if compare(elems[j], x) == Ordering.GREATER and len(best[j]) + 1 > len(chain):
                chain = best[j] + [x]
        best.append(chain)
    return max(best, key=len, default=[])


def bad_sequence_probe(P, carrier_depth: int, budget: int, window: int | None = None) -> list | None:
    """Look for a strictly descending sequence of length ``budget + 1``.

    For a countably presented predilator the search runs over columns: a fixed
    argument tuple from ``0..carrier_depth-1`` applied to the first ``window``
    terms in enumeration order.  A finite predilator has a finite, linearly
    ordered application to every finite carrier, so it never yields a witness;
    the probe only confirms that linearity.
    """
    if isinstance(P, Predilator):
        order = apply_order(P, carrier_depth)
        for x, y in zip(order.labels, order.labels[1:]):
            if compare_applied(P, x, y) != Ordering.LESS:
                raise ValueError(f"{x} and {y} are not strictly ordered")
        return None
    window = budget + 1 if window is None else window
    terms = [P.term_at(i) for i in range(window)]
    for k in range(carrier_depth + 1):
        column_terms = [t for t in terms if P.arity(t) == k]
        if len(column_terms) <= budget:
            continue
        for args in itertools.combinations(range(carrier_depth), k):
            elems = [AppliedElement(t, args) for t in column_terms]
            chain = _longest_bad_subsequence(elems, P.compare)
            if len(chain) > budget:
                return chain[: budget + 1]
    return None
