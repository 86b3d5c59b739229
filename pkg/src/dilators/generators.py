"""Seeded generators for predilators, dendrograms and trees."""

from __future__ import annotations

import random

from .predilator import Predilator


def random_predilator(rng: random.Random, max_terms: int = 4, max_arity: int = 3, min_terms: int = 0) -> Predilator:
    """A valid predilator built term by term along the term order.

    Consecutive distances are drawn freely; the rest follow from the
    ultrametric law, and each priority permutation copies the relative order
    its predecessor fixes on the shared leading positions.
    """
    m = rng.randint(min_terms, max_terms)
    names = [f"t{i}" for i in range(m)]
    arity = {t: rng.randint(0, max_arity) for t in names}
    sigma: dict = {}
    gaps: list[int] = []
    for i, t in enumerate(names):
        k = arity[t]
        perm = list(range(k))
        rng.shuffle(perm)
        if i > 0:
            prev = names[i - 1]
            c = rng.randint(0, min(k, arity[prev]))
            gaps.append(c)
            head = perm[:c]
            pattern = sorted(range(c), key=lambda j: sigma[prev][j])
            values = sorted(head)
            for rank, j in enumerate(pattern):
                perm[j] = values[rank]
        sigma[t] = tuple(perm)
    dist = {}
    for i in range(m):
        for j in range(i + 1, m):
            d = min(gaps[i:j])
            dist[(names[i], names[j])] = d
    return Predilator.build(names, arity, sigma, dist)


def random_semiflower(rng: random.Random, max_terms: int = 4, max_arity: int = 3) -> Predilator:
    """Init + ∫Q for a random Q, relabelled with plain names."""
    from .flowers import integrate
    from .predilator import ordered_sum

    names = [f"n{i}" for i in range(rng.randint(0, 2))]
    init = Predilator.build(names, {t: 0 for t in names})
    Q = random_predilator(rng, max_terms=max(0, max_terms - len(init)), max_arity=max_arity - 1)
    P = ordered_sum(init, integrate(Q))
    return P.rename({t: f"t{i}" for i, t in enumerate(P.terms)})


def random_dendrogram(rng: random.Random, max_nodes: int = 8, min_nodes: int = 1):
    """A random forest with random sibling orders and admissible ecodes."""
    from .dendrogram import Dendrogram

    n = rng.randint(min_nodes, max_nodes)
    parent: dict[int, int | None] = {0: None}
    depth = {0: 0}
    for v in range(1, n):
        p = rng.choice([None] + list(range(v))) if rng.random() < 0.85 else None
        parent[v] = p
        depth[v] = 0 if p is None else depth[p] + 1
    children: dict[int, list[int]] = {v: [] for v in range(n)}
    roots: list[int] = []
    for v in range(n):
        if parent[v] is None:
            roots.insert(rng.randint(0, len(roots)), v)
        else:
            kids = children[parent[v]]
            kids.insert(rng.randint(0, len(kids)), v)
    ecode = {v: rng.randint(0, depth[v]) for v in range(n) if children[v]}
    return Dendrogram(tuple(roots), {v: tuple(c) for v, c in children.items()}, ecode)


def random_trekkable(rng: random.Random, max_nodes: int = 9, min_nodes: int = 1):
    """A trekkable dendrogram: parents and left siblings carry smaller labels."""
    from .dendrogram import Dendrogram

    n = rng.randint(min_nodes, max_nodes)
    parent: dict[int, int | None] = {0: None}
    depth = {0: 0}
    for v in range(1, n):
        p = rng.choice([None] + list(range(v))) if rng.random() < 0.9 else None
        parent[v] = p
        depth[v] = 0 if p is None else depth[p] + 1
    children = {v: tuple(w for w in range(n) if parent[w] == v) for v in range(n)}
    roots = tuple(v for v in range(n) if parent[v] is None)
    ecode = {v: rng.randint(0, depth[v]) for v in range(n) if children[v]}
    return Dendrogram(roots, children, ecode)
