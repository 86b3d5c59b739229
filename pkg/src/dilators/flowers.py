"""Semiflowers, integration and differentiation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import NotAFlower
from .orders import ArityDiagram, diag_pair, enum_arity_diagrams
from .predilator import (
    Predilator,
    Term,
    check_embedding,
    compare_under_diagram,
    ordered_sum,
)


@dataclass(frozen=True)
class FlowerWitness:
    verdict: bool
    violation: tuple | None = None

    def __bool__(self) -> bool:
        return self.verdict


def is_semiflower(P: Predilator) -> FlowerWitness:
    for s in P.terms:
        for t in P.terms:
            ks, kt = P.arity[s], P.arity[t]
            if kt == 0:
                continue
            for d in enum_arity_diagrams(ks, kt):
                if ks == 0 or d.e0.values[-1] < d.e1.values[-1]:
                    if not compare_under_diagram(P, s, t, d):
                        return FlowerWitness(False, (s, t, d))
    return FlowerWitness(True)


def _tag(prefix: str, t: Term) -> Term:
    return prefix + t if isinstance(t, str) else (prefix, t)


def integral_name(t: Term) -> Term:
    return _tag("∫", t)


def derivative_name(t: Term) -> Term:
    return _tag("∂", t)


def integrate(P: Predilator) -> Predilator:
    name = {t: integral_name(t) for t in P.terms}
    return Predilator(
        tuple(name[t] for t in P.terms),
        {name[t]: P.arity[t] + 1 for t in P.terms},
        {name[t]: (P.arity[t],) + P.sigma[t] for t in P.terms},
        {(name[s], name[t]): P.p(s, t) + 1 for s, t in itertools.permutations(P.terms, 2)},
    )


def differentiate(P: Predilator) -> Predilator:
    w = is_semiflower(P)
    if not w:
        raise NotAFlower(f"not a semiflower, witness {w.violation[:2]}")
    keep = [t for t in P.terms if P.arity[t] > 0]
    name = {t: derivative_name(t) for t in keep}
    return Predilator(
        tuple(name[t] for t in keep),
        {name[t]: P.arity[t] - 1 for t in keep},
        {name[t]: P.sigma[t][1:] for t in keep},
        {(name[s], name[t]): P.p(s, t) - 1 for s, t in itertools.permutations(keep, 2)},
    )


def integral_less(P: Predilator, s: Term, t: Term, d: ArityDiagram) -> bool:
    """``∫s <_d ∫t`` by the defining two-clause rule."""
    m0, m1 = d.e0.values[-1], d.e1.values[-1]
    if m0 != m1:
        return m0 < m1
    reduced = diag_pair(d.e0.values[:-1], d.e1.values[:-1])
    return compare_under_diagram(P, s, t, reduced)


def derivative_less(P: Predilator, s: Term, t: Term, d: ArityDiagram) -> bool:
    """``∂s <_d ∂t`` by evaluating ``s <_d⁺ t`` with a new common maximum."""
    n = d.n_join
    extended = diag_pair(d.e0.values + (n,), d.e1.values + (n,))
    return compare_under_diagram(P, s, t, extended)


def init_part(P: Predilator) -> Predilator:
    return P.restrict(P.nullary())


def flower_decompose(P: Predilator) -> tuple[tuple, dict, Predilator]:
    """Return (nullary terms, isomorphism P → Init + ∫∂P, that target)."""
    init = init_part(P)
    target = ordered_sum(init, integrate(differentiate(P)))
    iso = {
        t: ("L", t) if P.arity[t] == 0 else ("R", integral_name(derivative_name(t)))
        for t in P.terms
    }
    inverse = {v: k for k, v in iso.items()}
    if not (check_embedding(P, target, iso) and check_embedding(target, P, inverse)):
        raise AssertionError("decomposition map is not an isomorphism")
    return init.terms, iso, target
