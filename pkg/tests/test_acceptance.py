"""Acceptance suite: one group of tests per criterion.

Run with ``pytest tests/test_acceptance.py`` or directly as a script; the
terminal summary prints one PASS/FAIL line per criterion.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from functools import lru_cache

import pytest

from dilators.coded import normalize_coded
from dilators.dendrogram import (
    Dendrogram,
    applied_to_sequence,
    apply_dendrogram,
    bullet,
    bullet_name,
    cell,
    dec,
    dec_bullet,
    dendrogram_isomorphism,
    is_trekkable,
    kb_sequence_compare,
)
from dilators.elementary import (
    all_instances,
    elementary_decompose,
    elementary_instances,
    preserves,
)
from dilators.flowers import differentiate, flower_decompose, integrate, is_semiflower
from dilators.formats import parse_dendrogram
from dilators.games import (
    ACTIVE,
    DILATOR,
    I_VIOLATED,
    ORDINAL,
    GameConfig,
    all_player_one_sequences,
    at_embedding,
    legal_moves,
    lift_play,
    play_projected,
    project_strategy,
    referee_step,
    rule_strategy,
    solve_truncated,
    start,
    verify_strategy,
    winner_of,
)
from dilators.generators import random_dendrogram, random_predilator, random_semiflower
from dilators.hierarchy import (
    OrderFamily,
    bounded_tree,
    descending_run_tree,
    dilator_family_step,
    empty_tree,
    family_check,
    full_tree,
    order_family_step,
    random_tree,
    seeded_tree,
    shoenfield_functor,
    shoenfield_truncation,
    table_tree,
    truncated_descent,
)
from dilators.orders import FiniteOrder, Ordering, diag_pair, enum_arity_diagrams
from dilators.predilator import (
    AppliedElement,
    Predilator,
    apply_order,
    check_embedding,
    compare_applied,
    compare_under_diagram,
    ordered_sum,
    search_embedding,
    search_isomorphism,
    validate_predilator,
)
from dilators.sorting import inversions, lv_sort, nine_node_example, swap_labels

ELEMENTARY_KINDS = {"A", "B", "C", "D/sibling", "D/parent"}


@lru_cache(maxsize=None)
def predilator_corpus() -> tuple:
    rng = random.Random(1)
    return tuple(random_predilator(rng, max_terms=4, max_arity=3) for _ in range(500))


@lru_cache(maxsize=None)
def dendrogram_corpus() -> tuple:
    rng = random.Random(2)
    return tuple(random_dendrogram(rng, max_nodes=8) for _ in range(500))


@lru_cache(maxsize=None)
def semiflower_corpus() -> tuple:
    rng = random.Random(3)
    return tuple(random_semiflower(rng, max_terms=4, max_arity=3) for _ in range(300))


def is_bijection(f: dict, domain, codomain) -> bool:
    return set(f) == set(domain) and sorted(map(repr, f.values())) == sorted(map(repr, codomain))


# -- 1 ------------------------------------------------------------------------------


@pytest.mark.criterion(1)
def test_dec_cell_round_trips():
    t0 = time.perf_counter()
    failures = []
    for P in predilator_corpus():
        C = cell(P)
        Q = dec(C)
        f = search_isomorphism(Q, P)
        if f is None or not is_bijection(f, Q.terms, P.terms) or not check_embedding(P, Q, {v: k for k, v in f.items()}):
            failures.append(P)
    for C in dendrogram_corpus():
        D = cell(dec(C))
        f = dendrogram_isomorphism(D, C)
        if f is None or not is_bijection(f, D.nodes, C.nodes):
            failures.append(C)
    elapsed = time.perf_counter() - t0
    assert failures == []
    assert elapsed < 60


# -- 2 ------------------------------------------------------------------------------


def _bullet_corpus():
    return list(dendrogram_corpus()) + [cell(P) for P in predilator_corpus()]


@pytest.mark.criterion(2)
def test_bullet_closure_decodes_to_dec_bullet():
    failures = [d for d in _bullet_corpus() if search_isomorphism(dec_bullet(d), dec(bullet(d))) is None]
    assert failures == []


@pytest.mark.criterion(2)
def test_dendrogram_application_matches_decoded_predilator():
    failures = []
    for d in _bullet_corpus():
        P = dec(d)
        if P.max_arity() > 4:
            continue
        for n in range(5):
            direct = apply_dendrogram(d, n).labels
            via_terms = [applied_to_sequence(d, x) for x in apply_order(P, n).labels]
            if list(direct) != via_terms:
                failures.append((d, n))
    assert failures == []


# -- 3 ------------------------------------------------------------------------------


def direct_sum_oracle(P: Predilator, n: int) -> list[tuple]:
    """Σ over x < n of P applied to the initial segment below x, as (x, element) pairs."""
    return [(x, e) for x in range(n) for e in apply_order(P, x).labels]


@pytest.mark.criterion(3)
def test_derivative_inverts_integral():
    failures = []
    for P in list(predilator_corpus()) + list(semiflower_corpus()):
        back = differentiate(integrate(P))
        if search_isomorphism(back, P) is None:
            failures.append(P)
    assert failures == []


@pytest.mark.criterion(3)
def test_semiflowers_split_into_nullary_part_and_integral():
    failures = []
    for P in semiflower_corpus():
        assert is_semiflower(P)
        _, iso, target = flower_decompose(P)
        if search_isomorphism(P, target) is None or len(target) != len(P):
            failures.append(P)
    assert failures == []


@pytest.mark.criterion(3)
def test_integral_matches_direct_sum():
    failures = []
    for P in predilator_corpus()[:200]:
        I = integrate(P)
        back = {f"∫{t}": t for t in P.terms}
        for n in range(6):
            got = [(x.args[-1], AppliedElement(back[x.term], x.args[:-1])) for x in apply_order(I, n).labels]
            if got != direct_sum_oracle(P, n):
                failures.append((P, n))
    assert failures == []


# -- 4 ------------------------------------------------------------------------------


def _kb_less(d: Dendrogram, s, a, t, b) -> bool:
    u = applied_to_sequence(d, AppliedElement(s, a))
    v = applied_to_sequence(d, AppliedElement(t, b))
    return kb_sequence_compare(d, u, v) == Ordering.LESS


@pytest.mark.criterion(4)
def test_fundamental_comparison_matches_sequence_order():
    disagreements = []
    checked = 0
    for d in _bullet_corpus():
        P = dec_bullet(d)
        terms = [t for t in P.terms if P.arity[t] <= 4]
        for s, t in itertools.product(terms, repeat=2):
            for dg in enum_arity_diagrams(P.arity[s], P.arity[t]):
                a, b = dg.realize()
                checked += 1
                if compare_under_diagram(P, s, t, dg) != _kb_less(d, s, a, t, b):
                    disagreements.append((d, s, t, dg))
                direct = compare_applied(P, AppliedElement(s, a), AppliedElement(t, b)) == Ordering.LESS
                if direct != compare_under_diagram(P, s, t, dg):
                    disagreements.append((d, s, t, dg))
    assert checked > 0
    assert disagreements == []


# -- 5 ------------------------------------------------------------------------------


@lru_cache(maxsize=None)
def small_dendrograms() -> tuple:
    rng = random.Random(5)
    return tuple(random_dendrogram(rng, max_nodes=6) for _ in range(60))


@pytest.mark.criterion(5)
def test_elementary_chains_for_every_pair():
    failures = []
    for d in small_dendrograms():
        P = dec_bullet(d)
        for n in range(5):
            elems = apply_order(P, n).labels
            for x, y in itertools.combinations(elems, 2):
                ch = elementary_decompose(d, x, y, P)
                ok = (
                    ch.elements[0].term == x.term
                    and ch.elements[-1].term == y.term
                    and diag_pair(ch.elements[0].args, ch.elements[-1].args) == diag_pair(x.args, y.args)
                    and all(step.label() in ELEMENTARY_KINDS for step in ch.steps)
                    and all(
                        compare_applied(P, step.lower, step.upper) == Ordering.LESS for step in ch.steps
                    )
                    and [s.lower for s in ch.steps] == list(ch.elements[:-1])
                    and [s.upper for s in ch.steps] == list(ch.elements[1:])
                )
                if not ok:
                    failures.append((d, x, y))
    assert failures == []


@pytest.mark.criterion(5)
def test_maps_preserving_elementary_relations_preserve_all():
    rng = random.Random(5)
    tried = preserving = failures = 0
    for _ in range(120):
        d = random_dendrogram(rng, max_nodes=5)
        P = dec_bullet(d)
        elementary = elementary_instances(d, P)
        everything = all_instances(d)
        targets = [dec_bullet(random_dendrogram(rng, max_nodes=6)) for _ in range(2)] + [P]
        for Q in targets:
            choices = [[u for u in Q.terms if Q.arity[u] == P.arity[s]] for s in P.terms]
            for image in itertools.product(*choices):
                f = dict(zip(P.terms, image))
                tried += 1
                if preserves(P, Q, f, elementary):
                    preserving += 1
                    if not preserves(P, Q, f, everything):
                        failures += 1
    assert preserving > 0
    assert failures == 0


# -- 6 ------------------------------------------------------------------------------


@pytest.mark.criterion(6)
def test_sorting_the_nine_node_example():
    d = nine_node_example()
    assert len(d) == 9 and is_trekkable(d)
    final, trace = lv_sort(d)
    assert trace.swaps == (2, 4, 6, 3)
    assert trace.inversions == (4, 3, 2, 1, 0)
    e = d
    for m, before in zip(trace.swaps, trace.inversions):
        assert inversions(e) == before
        e = swap_labels(e, m)
        assert is_trekkable(e)
    assert e == final
    assert inversions(final) == 0
    assert dendrogram_isomorphism(d, final) is not None


@pytest.mark.criterion(6)
def test_bullet_closure_of_the_seven_node_example():
    d = parse_dendrogram("(e0 (e0 (e0 *)) * (e0 *))")
    assert len(d) == 7
    b = bullet(d)
    starred = [x for x in d.nodes if not d.is_terminal(x)]
    bulleted = list(d.terminals)
    assert (len(b), len(starred), len(bulleted)) == (11, 4, 3)
    # non-terminals are kept and every node contributes one bulleted terminal
    assert set(b.nodes) == set(starred) | {bullet_name(x) for x in d.nodes}
    assert set(b.terminals) == {bullet_name(x) for x in d.nodes}


# -- 7 ------------------------------------------------------------------------------


def toy_trees() -> list:
    trees = [full_tree(), empty_tree(), bounded_tree(1), bounded_tree(2), descending_run_tree()]
    trees += [seeded_tree(k) for k in range(15)]
    trees += [
        table_tree([((0,), (0,)), ((1,), (0,)), ((0, 0), (0, 0))], "table:a"),
        table_tree([((s,), (t,)) for s in range(3) for t in range(3) if t <= s], "table:b"),
    ]
    rng = random.Random(7)
    trees += [random_tree(rng) for _ in range(3)]
    return trees


def prefixes(alphabet: int, depth: int):
    for n in range(depth + 1):
        yield from itertools.product(range(alphabet), repeat=n)


@pytest.mark.criterion(7)
def test_truncation_normalizes_to_family_member():
    t0 = time.perf_counter()
    trees = toy_trees()
    assert len(trees) >= 20
    failures = []
    for T in trees:
        for s in prefixes(3, 4):
            P = dilator_family_step(T, s)
            N = normalize_coded(shoenfield_functor(T, s), max(1, P.max_arity()))
            if search_isomorphism(N, P) is None:
                failures.append((T.name, s))
    assert failures == []
    assert time.perf_counter() - t0 < 120


def _is_suborder(small: FiniteOrder, big: FiniteOrder) -> bool:
    if not set(small.labels) <= set(big.labels):
        return False
    return [x for x in big.labels if x in small.rank] == list(small.labels)


@pytest.mark.criterion(7)
def test_truncation_grows_monotonically():
    failures = []
    for T in toy_trees():
        for t in prefixes(2, 4):
            for k in range(len(t)):
                s = t[:k]
                for n in range(4):
                    if not _is_suborder(shoenfield_truncation(T, s, n), shoenfield_truncation(T, t, n)):
                        failures.append((T.name, s, t, n))
    assert failures == []


# -- 8 ------------------------------------------------------------------------------


@pytest.mark.criterion(8)
def test_order_family_clauses():
    for T in toy_trees():
        rep = family_check(OrderFamily(T), prefixes(3, 5), depth=5)
        assert rep.ok, (T.name, rep.violations[:3])


@pytest.mark.criterion(8)
def test_stage_descent_matches_tree_search():
    finite = [empty_tree(), bounded_tree(2), descending_run_tree()] + [seeded_tree(k) for k in range(10)]
    finite.append(table_tree([((s,), (t,)) for s in range(3) for t in range(3) if t <= s], "table:b"))
    failures = []
    for T in finite:
        for s in prefixes(3, 6):
            order_side, tree_side = truncated_descent(T, s)
            if order_side != tree_side:
                failures.append((T.name, s, order_side, tree_side))
    assert failures == []


# -- 9 ------------------------------------------------------------------------------


def nested_integral_flower(levels: int = 3, width: int = 2) -> Predilator:
    """N + ∫(N + ∫(N + ∫N)) for a chain N of nullary terms."""
    base = Predilator.build([f"c{i}" for i in range(width)], {f"c{i}": 0 for i in range(width)})
    F = base
    for _ in range(levels):
        F = ordered_sum(base, integrate(F))
        F = F.rename({t: f"w{i}" for i, t in enumerate(F.terms)})
    return F


def _check_projection(cfg: GameConfig, e: tuple) -> list:
    """Lift every projected play at the fixed assignment ``e``; return the bad ones."""
    sigma_prime = rule_strategy(lambda st: 0)
    sigma = project_strategy(cfg, sigma_prime, at_embedding(e))
    bad = []
    for ones in all_player_one_sequences(cfg):
        xs = play_projected(sigma, ones)
        lift = lift_play(cfg, sigma_prime, xs, e)
        if not (lift.respects and lift.clean):
            bad.append(xs)
    return bad


@pytest.mark.criterion(9)
def test_projection_through_nested_integral_target():
    target = nested_integral_flower()
    assert is_semiflower(target)
    T = full_tree()
    depth = 6
    stage = dilator_family_step(T, (0,) * (depth // 2))
    f = search_embedding(stage, target)
    assert f is not None, "the family stage does not embed into the integrated flower"
    e = tuple(f[i] for i in range(depth // 2))
    cfg = GameConfig(DILATOR, T, target, 2, depth)
    assert _check_projection(cfg, e) == []


def test_projection_through_family_member_target():
    T = full_tree()
    depth = 6
    target = dilator_family_step(T, (0,) * depth)
    e = tuple(range(depth))
    for k in range(1, depth + 1):
        assert check_embedding(dilator_family_step(T, (0,) * k), target, {i: e[i] for i in range(k)})
    cfg = GameConfig(DILATOR, T, target, 2, depth)
    assert _check_projection(cfg, e) == []


def seeded_game(seed: int) -> GameConfig:
    rng = random.Random(seed)
    T = random_tree(rng)
    depth = rng.choice([0, 2, 4])
    alphabet = rng.randint(1, 2)
    if rng.random() < 0.5:
        kappa = FiniteOrder(range(rng.randint(0, 3)))
        return GameConfig(ORDINAL, T, kappa, alphabet, depth)
    target = random_predilator(rng, max_terms=3, max_arity=2)
    return GameConfig(DILATOR, T, target, alphabet, depth)


def minimax(cfg: GameConfig, st) -> str:
    """Plain game-tree search without memo or strategy extraction."""
    if st.status != ACTIVE:
        return winner_of(st)
    moves = legal_moves(cfg, st)
    if not moves:
        return "II" if st.mover == "I" else "I"
    outcomes = {minimax(cfg, referee_step(cfg, st, m)) for m in moves}
    return st.mover if st.mover in outcomes else ("II" if st.mover == "I" else "I")


def referee_by_embedding(cfg: GameConfig, xs: tuple, targets: tuple) -> bool:
    n = len(targets)
    if cfg.mode == DILATOR:
        stage = dilator_family_step(cfg.tree, xs[:n])
        return len(set(targets)) == n and check_embedding(stage, cfg.target, dict(enumerate(targets)))
    order = order_family_step(cfg.tree, xs[:n])
    image = [targets[i] for i in order.labels]
    return [x for x in cfg.target.labels if x in image] == image and len(set(image)) == n


@pytest.mark.criterion(9)
def test_solver_on_seeded_configs():
    for seed in range(100):
        cfg = seeded_game(seed)
        winner, strategy = solve_truncated(cfg)
        assert verify_strategy(cfg, strategy)
        assert winner == strategy.player == minimax(cfg, start(cfg))


@pytest.mark.criterion(9)
def test_referee_agrees_with_embedding_check():
    contradictions = []
    for seed in range(100):
        cfg = seeded_game(seed)
        rng = random.Random(seed)
        for _ in range(20):
            st = start(cfg)
            while legal_moves(cfg, st):
                prev = st
                st = referee_step(cfg, st, rng.choice(legal_moves(cfg, st)))
                if prev.mover == "I":
                    clean = referee_by_embedding(cfg, st.xs, st.targets)
                    if clean != (st.status != I_VIOLATED):
                        contradictions.append((seed, st))
    assert contradictions == []


# -- 10 -----------------------------------------------------------------------------


def _base() -> Predilator:
    """Three binary terms a < b < c, a and b sharing one leading position."""
    return Predilator.build(
        ["a", "b", "c"],
        {"a": 2, "b": 2, "c": 2},
        {"a": (0, 1), "b": (0, 1), "c": (1, 0)},
        {("a", "b"): 1, ("a", "c"): 0, ("b", "c"): 0},
    )


def _with(P: Predilator, **changes) -> Predilator:
    fields = dict(terms=P.terms, arity=dict(P.arity), sigma=dict(P.sigma), dist=dict(P.dist))
    fields.update(changes)
    return Predilator(**fields)


def _set_dist(P: Predilator, pairs: dict, symmetric: bool = True) -> dict:
    dist = dict(P.dist)
    for (s, t), m in pairs.items():
        dist[(s, t)] = m
        if symmetric:
            dist[(t, s)] = m
    return dist


def mutants() -> list[tuple[str, Predilator]]:
    P = _base()
    no_ab = {k: v for k, v in P.dist.items() if set(k) != {"a", "b"}}
    return [
        ("duplicate-term", _with(P, terms=("a", "b", "a"))),
        ("missing-data", _with(P, sigma={k: v for k, v in P.sigma.items() if k != "c"})),
        ("bad-arity", _with(P, arity={**P.arity, "a": -1})),
        ("sigma-length", _with(P, sigma={**P.sigma, "a": (0,)})),
        ("sigma-not-permutation", _with(P, sigma={**P.sigma, "a": (0, 0)})),
        ("missing-dist", _with(P, dist=no_ab)),
        ("dist-range", _with(P, dist=_set_dist(P, {("a", "c"): -1}))),
        ("dist-asymmetric", _with(P, dist=_set_dist(P, {("a", "c"): 1}, symmetric=False))),
        ("self-dist", _with(P, dist={**P.dist, ("a", "a"): 1})),
        ("dist-bound", _with(P, dist=_set_dist(P, {("a", "b"): 3}))),
        ("ultrametric", _with(P, dist=_set_dist(P, {("a", "c"): 1}))),
        ("sigma-compat", _with(P, dist=_set_dist(P, {("a", "b"): 2}), sigma={**P.sigma, "b": (1, 0)})),
    ]


@pytest.mark.criterion(10)
def test_generated_instances_validate():
    rng = random.Random(10)
    generated = list(predilator_corpus()) + list(semiflower_corpus())
    generated += [dec(d) for d in dendrogram_corpus()] + [dec_bullet(d) for d in dendrogram_corpus()]
    generated += [integrate(P) for P in predilator_corpus()[:100]]
    generated += [dilator_family_step(random_tree(rng), s) for s in prefixes(2, 5)]
    bad = [P for P in generated if not validate_predilator(P).ok]
    assert bad == []


@pytest.mark.criterion(10)
@pytest.mark.parametrize("kind, P", mutants(), ids=[k for k, _ in mutants()])
def test_mutant_rejected_with_its_kind(kind, P):
    assert validate_predilator(_base()).ok
    assert validate_predilator(P).kinds() == {kind}


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
