"""Subsidiary games: referees, truncated solving and strategy projection.

Player I moves ``(x, target)``, Player II moves ``x``.  Player I wins a
truncated play iff the map from indices to targets stays an embedding of the
current family stage into the target at every stage.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .errors import BudgetExceeded, IllegalMove, SelectorPartial
from .hierarchy import DecidableTree, dilator_family_step, order_family_step
from .orders import FiniteOrder
from .predilator import Predilator, relation_table, search_embeddings

ORDINAL = "ORDINAL"
DILATOR = "DILATOR"

ACTIVE = "ACTIVE"
I_VIOLATED = "I-VIOLATED"
COMPLETE = "COMPLETE"

DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True)
class GameConfig:
    mode: str
    tree: DecidableTree
    target: FiniteOrder | Predilator
    alphabet: int
    depth: int

    def __post_init__(self):
        if self.mode not in (ORDINAL, DILATOR):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.depth < 0 or self.depth % 2:
            raise ValueError("depth must be even and non-negative")
        if self.alphabet < 1:
            raise ValueError("alphabet bound must be at least 1")
        expected = FiniteOrder if self.mode == ORDINAL else Predilator
        if not isinstance(self.target, expected):
            raise ValueError(f"{self.mode} mode needs a {expected.__name__} target")

    def targets(self) -> tuple:
        return tuple(self.target.labels if self.mode == ORDINAL else self.target.terms)


@dataclass(frozen=True)
class PlayState:
    xs: tuple = ()
    targets: tuple = ()
    status: str = ACTIVE

    @property
    def key(self) -> tuple:
        return self.xs, self.targets

    @property
    def mover(self) -> str:
        return "I" if len(self.xs) % 2 == 0 else "II"


def _stage_ok(cfg: GameConfig, xs: tuple, targets: tuple) -> bool:
    """Check the pairs involving the newest index."""
    n = len(targets)
    if n == 0:
        return True
    k = n - 1
    new = targets[k]
    if cfg.mode == ORDINAL:
        order = order_family_step(cfg.tree, xs[:n])
        kappa = cfg.target
        return all(order.less(i, k) == kappa.less(targets[i], new) and order.less(k, i) == kappa.less(new, targets[i]) for i in range(k))
    stage = dilator_family_step(cfg.tree, xs[:n])
    omega = cfg.target
    if stage.arity[k] != omega.arity[new]:
        return False
    for i in range(n):
        if relation_table(stage, i, k) != relation_table(omega, targets[i], new):
            return False
        if relation_table(stage, k, i) != relation_table(omega, new, targets[i]):
            return False
    return True


def referee_step(cfg: GameConfig, st: PlayState, move) -> PlayState:
    if st.status != ACTIVE:
        raise IllegalMove(f"the play is already {st.status}")
    if st.mover == "I":
        if not (isinstance(move, tuple) and len(move) == 2):
            raise IllegalMove("Player I moves a pair (x, target)")
        x, target = move
        if target not in cfg.target:
            raise IllegalMove(f"{target!r} is not in the target")
        xs, targets = st.xs + (x,), st.targets + (target,)
    else:
        x = move
        xs, targets = st.xs + (x,), st.targets
    if not (isinstance(x, int) and 0 <= x < cfg.alphabet):
        raise IllegalMove(f"move {x!r} outside the alphabet")
    status = ACTIVE
    if st.mover == "I" and not _stage_ok(cfg, xs, targets):
        status = I_VIOLATED
    elif len(xs) >= cfg.depth:
        status = COMPLETE
    return PlayState(xs, targets, status)


def start(cfg: GameConfig) -> PlayState:
    return PlayState((), (), COMPLETE if cfg.depth == 0 else ACTIVE)


def legal_moves(cfg: GameConfig, st: PlayState) -> list:
    if st.status != ACTIVE:
        return []
    xs = range(cfg.alphabet)
    if st.mover == "I":
        return [(x, t) for x in xs for t in cfg.targets()]
    return list(xs)


def replay(cfg: GameConfig, moves: Iterable) -> list[PlayState]:
    states = [start(cfg)]
    for m in moves:
        states.append(referee_step(cfg, states[-1], m))
    return states


# -- strategies ---------------------------------------------------------------------


@dataclass(frozen=True)
class Strategy:
    """Moves for one player, keyed by position; ``rule`` answers positions not in the table."""

    player: str
    moves: Mapping = field(default_factory=dict)
    rule: Callable | None = field(default=None, compare=False)

    def __call__(self, st: PlayState):
        key = st.key if isinstance(st, PlayState) else tuple(st)
        if key in self.moves:
            return self.moves[key]
        if self.rule is not None:
            return self.rule(st)
        raise KeyError(key)

    def defined_at(self, st) -> bool:
        key = st.key if isinstance(st, PlayState) else tuple(st)
        return key in self.moves or self.rule is not None


def winner_of(st: PlayState) -> str:
    return "II" if st.status == I_VIOLATED else "I"


def _estimate(cfg: GameConfig) -> int:
    rounds = cfg.depth // 2
    per_round = cfg.alphabet * max(1, len(cfg.targets())) * cfg.alphabet
    return per_round**rounds


def solve_truncated(cfg: GameConfig, budget: int = DEFAULT_BUDGET) -> tuple[str, Strategy]:
    """Backward induction on the truncated game; the strategy is checked by playout."""
    if _estimate(cfg) > budget:
        raise BudgetExceeded(f"about {_estimate(cfg)} plays exceed the budget {budget}")
    memo: dict = {}

    def value(st: PlayState) -> str:
        if st.status != ACTIVE:
            return winner_of(st)
        if st.key in memo:
            return memo[st.key][0]
        options = legal_moves(cfg, st)
        best = None
        for m in options:
            if value(referee_step(cfg, st, m)) == st.mover:
                best = m
                break
        if best is None:
            other = "II" if st.mover == "I" else "I"
            memo[st.key] = (other, options[0] if options else None)
        else:
            memo[st.key] = (st.mover, best)
        return memo[st.key][0]

    root = start(cfg)
    if root.status == ACTIVE and not legal_moves(cfg, root):
        return "II", Strategy("II")
    win = value(root)
    table = {k: m for k, (w, m) in memo.items() if w == win and m is not None and _mover_of(k) == win}
    strategy = Strategy(win, table)
    if not verify_strategy(cfg, strategy):
        raise AssertionError("solver produced a strategy that does not win")
    return win, strategy


def _mover_of(key) -> str:
    return "I" if len(key[0]) % 2 == 0 else "II"


def verify_strategy(cfg: GameConfig, strategy: Strategy) -> bool:
    """Every play consistent with ``strategy`` is won by its player."""

    def walk(st: PlayState) -> bool:
        if st.status != ACTIVE:
            return winner_of(st) == strategy.player
        if st.mover == strategy.player:
            try:
                m = strategy(st)
            except KeyError:
                return False
            try:
                return walk(referee_step(cfg, st, m))
            except IllegalMove:
                return False
        options = legal_moves(cfg, st)
        if not options:
            return strategy.player != st.mover
        return all(walk(referee_step(cfg, st, m)) for m in options)

    root = start(cfg)
    if root.status == ACTIVE and not legal_moves(cfg, root):
        return strategy.player == "II"
    return walk(root)


# -- projection ---------------------------------------------------------------------


def stage_embeddings(cfg: GameConfig, xs: Sequence[int], n: int) -> list[tuple]:
    """All target tuples for the first ``n`` indices that pass the referee at every stage."""
    xs = tuple(xs)
    if cfg.mode == DILATOR:
        stage = dilator_family_step(cfg.tree, xs[:n])
        out = []
        for f in search_embeddings(stage, cfg.target):
            p = tuple(f[i] for i in range(n))
            if all(_stage_ok(cfg, xs, p[:k]) for k in range(1, n + 1)):
                out.append(p)
        return out
    order = order_family_step(cfg.tree, xs[:n])
    kappa = cfg.target
    out = []
    for chosen in itertools.combinations(kappa.labels, n):
        p = [None] * n
        for i, label in zip(order.labels, chosen):
            p[i] = label
        out.append(tuple(p))
    return out


Selector = Callable[[Mapping[tuple, object]], object]


def first_selector(family: Mapping[tuple, object]):
    if not family:
        raise SelectorPartial("no candidate embeddings")
    return family[min(family)]


def majority_selector(family: Mapping[tuple, object]):
    if not family:
        raise SelectorPartial("no candidate embeddings")
    counts = Counter(family.values())
    top = max(counts.values())
    return min(m for m, c in counts.items() if c == top)


def at_embedding(e: Sequence) -> Selector:
    """Evaluate the candidate family at the restriction of the fixed assignment ``e``."""
    e = tuple(e)

    def select(family: Mapping[tuple, object]):
        if not family:
            raise SelectorPartial("no candidate embeddings")
        n = len(next(iter(family)))
        key = e[:n]
        if len(key) < n or key not in family:
            raise SelectorPartial(f"the assignment {key} is not a candidate")
        return family[key]

    return select


def candidate_moves(cfg: GameConfig, sigma_prime: Strategy, xs: tuple, candidates: Iterable[tuple] | None = None) -> dict:
    """f_s(p) for every candidate p on which the G′ strategy is defined."""
    n = (len(xs) + 1) // 2
    if candidates is None:
        candidates = stage_embeddings(cfg, xs, n)
    out = {}
    for p in candidates:
        st = PlayState(tuple(xs), tuple(p), ACTIVE)
        try:
            out[tuple(p)] = sigma_prime(st)
        except KeyError:
            continue
    return out


def project_strategy(
    cfg: GameConfig,
    sigma_prime: Strategy,
    selector: Selector,
    candidates: Callable[[tuple], Iterable[tuple]] | None = None,
) -> Strategy:
    """A Player II strategy for the game on x-moves alone, defined on every
    position of the truncation where Player II moves."""
    if sigma_prime.player != "II":
        raise ValueError("projection needs a Player II strategy")
    table = {}
    for length in range(1, cfg.depth, 2):
        for xs in itertools.product(range(cfg.alphabet), repeat=length):
            cands = None if candidates is None else candidates(xs)
            table[xs] = selector(candidate_moves(cfg, sigma_prime, xs, cands))
    return Strategy("II", table)


def play_projected(sigma: Strategy, player_one_moves: Sequence[int]) -> tuple:
    """The x-play where Player I plays ``player_one_moves`` and Player II follows ``sigma``."""
    xs: tuple = ()
    for x in player_one_moves:
        xs += (x,)
        if xs in sigma.moves:
            xs += (sigma.moves[xs],)
    return xs


@dataclass(frozen=True)
class Lift:
    states: tuple
    respects: bool  # Player II's moves agree with the G′ strategy
    clean: bool  # no stage violated the embedding condition


def lift_play(cfg: GameConfig, sigma_prime: Strategy, xs: Sequence[int], e: Sequence) -> Lift:
    """Replay ``xs`` in the subsidiary game with targets e(0), e(1), ..."""
    st = start(cfg)
    states = [st]
    respects = True
    for k, x in enumerate(xs):
        if st.status != ACTIVE:
            break
        if st.mover == "I":
            st = referee_step(cfg, st, (x, e[k // 2]))
        else:
            try:
                respects &= sigma_prime(st) == x
            except KeyError:
                respects = False
            st = referee_step(cfg, st, x)
        states.append(st)
    clean = all(s.status != I_VIOLATED for s in states)
    return Lift(tuple(states), respects, clean)


def all_player_one_sequences(cfg: GameConfig) -> Iterable[tuple]:
    for rounds in range(cfg.depth // 2 + 1):
        yield from itertools.product(range(cfg.alphabet), repeat=rounds)


def rule_strategy(rule: Callable[[PlayState], int]) -> Strategy:
    return Strategy("II", {}, rule)
