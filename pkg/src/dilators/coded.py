"""Recovering abstract predilator data from a functor given by its finite values."""

from __future__ import annotations

import itertools
from functools import cmp_to_key

from .errors import NoConsistentFit, SupportViolation
from .orders import IncreasingMap, Ordering, cmp_values, enum_arity_diagrams
from .predilator import CodedFunctor, Predilator, validate_predilator


def _fundamental(sig_s, sig_t, p, eps, a, b) -> bool:
    for j in range(p):
        c = cmp_values(a[sig_s[j]], b[sig_t[j]])
        if c != Ordering.EQUAL:
            return c == Ordering.LESS
    return eps < 0


class _Window:
    def __init__(self, F: CodedFunctor, top: int):
        self.F = F
        self.orders = {n: F.order_at(n) for n in range(top + 1)}

    def less(self, x, kx, y, ky, d) -> bool:
        m = d.n_join
        fx = self.F.map_at(IncreasingMap(kx, m, d.e0.values), x)
        fy = self.F.map_at(IncreasingMap(ky, m, d.e1.values), y)
        rank = self.orders[m].rank
        return rank[fx] < rank[fy]


def normalize_coded(F: CodedFunctor, arity_bound: int) -> Predilator:
    """Fit terms, priority permutations, distances and term order to ``F``."""
    top = 2 * arity_bound
    win = _Window(F, top)

    terms: list = []
    arity: dict = {}
    for n in range(arity_bound + 1):
        for x in win.orders[n]:
            if F.supp_at(n, x) == frozenset(range(n)):
                terms.append(x)
                arity[x] = n

    by_arity: dict[int, list] = {}
    for t in terms:
        by_arity.setdefault(arity[t], []).append(t)
    for m in range(top + 1):
        for y in win.orders[m]:
            supp = sorted(F.supp_at(m, y))
            if len(supp) > arity_bound:
                continue
            f = IncreasingMap(len(supp), m, tuple(supp))
            hits = [t for t in by_arity.get(len(supp), []) if F.map_at(f, t) == y]
            if len(hits) != 1:
                raise SupportViolation(f"{y!r} in F({m}) is the image of {len(hits)} terms")

    sigma: dict = {}
    for t in terms:
        k = arity[t]
        diagrams = enum_arity_diagrams(k, k)
        observed = [win.less(t, k, t, k, d) for d in diagrams]
        for perm in itertools.permutations(range(k)):
            if all(
                _fundamental(perm, perm, k, 1, d.e0.values, d.e1.values) == obs
                for d, obs in zip(diagrams, observed)
            ):
                sigma[t] = perm
                break
        else:
            raise NoConsistentFit(f"no priority permutation fits {t!r}")

    dist: dict = {}
    eps: dict = {}
    for s, t in itertools.combinations(terms, 2):
        ks, kt = arity[s], arity[t]
        diagrams = enum_arity_diagrams(ks, kt)
        observed = [win.less(s, ks, t, kt, d) for d in diagrams]
        found = None
        for p in range(min(ks, kt) + 1):
            if any(
                (sigma[s][i] < sigma[s][j]) != (sigma[t][i] < sigma[t][j])
                for i, j in itertools.combinations(range(p), 2)
            ):
                continue
            for e in (-1, 1):
                if all(
                    _fundamental(sigma[s], sigma[t], p, e, d.e0.values, d.e1.values) == obs
                    for d, obs in zip(diagrams, observed)
                ):
                    found = (p, e)
                    break
            if found:
                break
        if found is None:
            raise NoConsistentFit(f"no distance fits the pair {s!r}, {t!r}")
        dist[(s, t)] = dist[(t, s)] = found[0]
        eps[(s, t)], eps[(t, s)] = found[1], -found[1]

    ordered = sorted(terms, key=cmp_to_key(lambda s, t: 0 if s == t else eps[(s, t)]))
    for i, j in itertools.combinations(range(len(ordered)), 2):
        if eps[(ordered[i], ordered[j])] != -1:
            raise NoConsistentFit("fitted term comparisons are not transitive")
    P = Predilator(tuple(ordered), arity, sigma, dist)
    report = validate_predilator(P)
    if not report.ok:
        raise NoConsistentFit(f"fitted data is not a predilator: {report.violations[0]}")
    return P
