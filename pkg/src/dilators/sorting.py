"""Sorting trekkable dendrograms into level-then-value order by adjacent swaps."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key

from .dendrogram import Dendrogram, dec_bullet, is_trekkable
from .errors import NotTrekkable
from .orders import Ordering, cmp_values
from .predilator import AppliedElement, Predilator, compare_applied


@dataclass(frozen=True)
class SwapTrace:
    swaps: tuple[int, ...]  # m, meaning labels m and m+1 were exchanged
    inversions: tuple[int, ...]  # inversion count before each swap and at the end


def lv_compare(d: Dendrogram, x: int, y: int, P: Predilator | None = None) -> Ordering:
    if x == y:
        return Ordering.EQUAL
    c = cmp_values(d.lh(x), d.lh(y))
    if c != Ordering.EQUAL:
        return c
    P = dec_bullet(d) if P is None else P
    full = tuple(range(d.lh(x)))
    return compare_applied(P, AppliedElement(x, full), AppliedElement(y, full))


def lv_order(d: Dendrogram) -> list[int]:
    P = dec_bullet(d)
    return sorted(d.nodes, key=cmp_to_key(lambda x, y: int(lv_compare(d, x, y, P))))


def inversions(d: Dendrogram) -> int:
    """Pairs ordered one way numerically and the other way by level-then-value."""
    pos = {x: i for i, x in enumerate(lv_order(d))}
    n = len(d)
    return sum(1 for s in range(n) for t in range(s + 1, n) if pos[s] > pos[t])


def swap_labels(d: Dendrogram, m: int) -> Dendrogram:
    f = {x: x for x in d.nodes}
    f[m], f[m + 1] = m + 1, m
    e = d.relabel(f)
    # keep sibling lists in numeric order; the swapped pair is never parent and child
    return Dendrogram(
        tuple(sorted(e.roots)),
        {x: tuple(sorted(c)) for x, c in e.children.items()},
        e.ecode,
    )


def _next_swap(d: Dendrogram, start: int) -> int | None:
    P = dec_bullet(d)
    for m in range(start, len(d) - 1):
        if lv_compare(d, m, m + 1, P) == Ordering.GREATER:
            return m
    return None


def lv_sort(d: Dendrogram, schedule: str = "passes") -> tuple[Dendrogram, SwapTrace]:
    """Swap adjacent labels m, m+1 with m above m+1 until aligned.

    ``schedule="least"`` always swaps the least such m; ``"passes"`` sweeps
    left to right and only restarts from 0 when a sweep reaches the end.
    """
    if schedule not in ("passes", "least"):
        raise ValueError(f"unknown schedule {schedule!r}")
    if not is_trekkable(d):
        raise NotTrekkable("node labels do not respect the tree and sibling orders")
    swaps: list[int] = []
    counts = [inversions(d)]
    start = 0
    while True:
        m = _next_swap(d, start)
        if m is None and start > 0:
            start = 0
            m = _next_swap(d, 0)
        if m is None:
            break
        d = swap_labels(d, m)
        if not is_trekkable(d):
            raise NotTrekkable(f"swap at {m} broke trekkability")
        swaps.append(m)
        counts.append(inversions(d))
        start = m + 1 if schedule == "passes" else 0
    return d, SwapTrace(tuple(swaps), tuple(counts))


def nine_node_example() -> Dendrogram:
    """Root 0 with children 1, 3, 5; 1 has 2, 4; 3 has 7; 5 has 6, 8; all ecodes 0."""
    children = {0: (1, 3, 5), 1: (2, 4), 3: (7,), 5: (6, 8)}
    return Dendrogram((0,), children, {x: 0 for x in children})
