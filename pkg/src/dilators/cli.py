"""Command line front end: ``dilators <verb> ...``.

Exit codes: 0 no violations, 1 violations found, 2 parse error,
3 budget exceeded, 4 failed precondition.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import games
from .coded import normalize_coded
from .dendrogram import (
    Dendrogram,
    bullet,
    cell,
    dec,
    dec_bullet,
    dendrogram_is_flower,
    dendrogram_isomorphism,
    is_trekkable,
    validate_dendrogram,
)
from .elementary import elementary_decompose
from .errors import BoundExceeded, BudgetExceeded, DilatorError, ParseError
from .flowers import differentiate, flower_decompose, integrate, is_semiflower
from .formats import (
    format_dendrogram,
    format_order,
    format_predilator,
    format_trekkable,
    load_tree,
    parse_applied,
    parse_dendrogram,
    parse_game_config,
    parse_order,
    parse_predilator,
    parse_sequence,
    preorder_labels,
    term_token,
)
from .generators import random_dendrogram, random_predilator
from .hierarchy import (
    DilatorFamily,
    OrderFamily,
    dilator_family_step,
    family_check,
    order_family_step,
    random_tree,
    shoenfield_functor,
    shoenfield_truncation,
)
from .predilator import apply_order, search_isomorphism, validate_predilator
from .probe import bad_sequence_probe, omega_star_column
from .sorting import lv_sort

EXIT_OK, EXIT_VIOLATION, EXIT_PARSE, EXIT_BUDGET, EXIT_PRECONDITION = 0, 1, 2, 3, 4


class Outcome:
    def __init__(self, verb: str):
        self.verb = verb
        self.lines: list[str] = []
        self.data: dict = {"verb": verb}
        self.ok = True

    def say(self, line: str) -> None:
        self.lines.append(line)

    def fail(self, line: str) -> None:
        self.ok = False
        self.lines.append(line)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _looks_like_dendrogram(text: str) -> bool:
    body = "\n".join(line.split("#", 1)[0] for line in text.splitlines()).strip()
    return body.startswith(("(", "*", "node"))


def _load_predilator_or_dendrogram(path: str):
    text = _read(path)
    if _looks_like_dendrogram(text):
        return parse_dendrogram(text)
    return parse_predilator(text)


def _as_predilator(v):
    return dec(v) if isinstance(v, Dendrogram) else v


# -- verbs -------------------------------------------------------------------------


def cmd_check(args, out: Outcome) -> None:
    v = _load_predilator_or_dendrogram(args.file)
    if isinstance(v, Dendrogram):
        rep = validate_dendrogram(v)
        out.data["kind"] = "dendrogram"
        out.data["violations"] = [str(x) for x in rep.violations]
        if not rep.ok:
            for x in rep.violations:
                out.fail(f"violation {x}")
            return
        out.data["trekkable"] = is_trekkable(v)
        out.data["flower"] = dendrogram_is_flower(v)
        out.say(f"valid dendrogram; trekkable: {str(is_trekkable(v)).lower()}; flower: {str(out.data['flower']).lower()}")
        return
    rep = validate_predilator(v)
    out.data["kind"] = "predilator"
    out.data["violations"] = [str(x) for x in rep.violations]
    if not rep.ok:
        for x in rep.violations:
            out.fail(f"violation {x}")
        return
    flower = bool(is_semiflower(v))
    out.data["semiflower"] = flower
    out.say(f"valid predilator; semiflower: {str(flower).lower()}")


def cmd_apply(args, out: Outcome) -> None:
    v = _load_predilator_or_dendrogram(args.file)
    P = _as_predilator(v)
    order = apply_order(P, args.n)
    out.data["elements"] = [str(x) for x in order]
    for x in order:
        out.say(str(x))


def cmd_dec(args, out: Outcome) -> None:
    d = parse_dendrogram(_read(args.file))
    P = dec_bullet(d) if args.bullet else dec(d)
    text = format_predilator(P)
    out.data["predilator"] = text
    out.lines.extend(text.splitlines())


def cmd_cell(args, out: Outcome) -> None:
    P = parse_predilator(_read(args.file))
    text = format_dendrogram(cell(P))
    out.data["dendrogram"] = text
    out.lines.extend(text.splitlines())


def cmd_bullet(args, out: Outcome) -> None:
    d = parse_dendrogram(_read(args.file))
    b = bullet(d)
    starred = sum(1 for x in d.nodes if not d.is_terminal(x))
    bulleted = len(d.terminals)
    out.data.update(nodes=len(b), starred=starred, bulleted=bulleted, dendrogram=format_dendrogram(b))
    out.say(f"nodes {len(b)}; starred {starred}; bulleted {bulleted}")
    out.lines.extend(format_dendrogram(b).splitlines())


def cmd_sort(args, out: Outcome) -> None:
    d = parse_dendrogram(_read(args.file))
    result, trace = lv_sort(d, schedule=args.schedule)
    out.data["swaps"] = list(trace.swaps)
    out.data["inversions"] = list(trace.inversions)
    for m, before, after in zip(trace.swaps, trace.inversions, trace.inversions[1:]):
        out.say(f"swap {m} {m + 1}; inversions {before} -> {after}")
    out.data["result"] = format_trekkable(result)
    out.lines.extend(format_trekkable(result).splitlines())


def cmd_int(args, out: Outcome) -> None:
    P = parse_predilator(_read(args.file))
    text = format_predilator(integrate(P))
    out.data["predilator"] = text
    out.lines.extend(text.splitlines())


def cmd_diff(args, out: Outcome) -> None:
    P = parse_predilator(_read(args.file))
    text = format_predilator(differentiate(P))
    out.data["predilator"] = text
    out.lines.extend(text.splitlines())


def cmd_decompose_flower(args, out: Outcome) -> None:
    P = parse_predilator(_read(args.file))
    init, iso, _ = flower_decompose(P)
    out.data["init"] = [term_token(t) for t in init]
    out.data["map"] = {term_token(t): [v[0], term_token(v[1])] for t, v in iso.items()}
    out.say("init " + " ".join(term_token(t) for t in init))
    for t in P.terms:
        side, name = iso[t]
        out.say(f"{term_token(t)} -> {side} {term_token(name)}")


def cmd_elem_decompose(args, out: Outcome) -> None:
    d = parse_dendrogram(_read(args.file))
    P = dec_bullet(d)
    x, y = parse_applied(args.x, P), parse_applied(args.y, P)
    chain = elementary_decompose(d, x, y, P)
    out.data["chain"] = [str(e) for e in chain.elements]
    out.data["steps"] = [s.label() for s in chain.steps]
    for s in chain.steps:
        out.say(f"{s.label()}: {s.lower} < {s.upper}")


def cmd_family(args, out: Outcome) -> None:
    T = load_tree(args.tree)
    s = parse_sequence(args.prefix)
    if args.kind == "order":
        order = order_family_step(T, s)
        out.data["order"] = list(order.labels)
        out.say(" < ".join(map(str, order.labels)) if len(order) else "(empty)")
    else:
        text = format_predilator(dilator_family_step(T, s))
        out.data["predilator"] = text
        out.lines.extend(text.splitlines())


def cmd_shoenfield(args, out: Outcome) -> None:
    T = load_tree(args.tree)
    s = parse_sequence(args.prefix)
    order = shoenfield_truncation(T, s, args.n)
    out.data["elements"] = [list(x) for x in order]
    for x in order:
        out.say("<" + ",".join(map(str, x)) + ">")
    if args.cross_check:
        P = dilator_family_step(T, s)
        N = normalize_coded(shoenfield_functor(T, s), max(1, P.max_arity()))
        iso = search_isomorphism(N, P) is not None
        out.data["normalized_matches_family"] = iso
        if iso:
            out.say("normalized truncation matches the family member")
        else:
            out.fail("normalized truncation does not match the family member")


def cmd_family_check(args, out: Outcome) -> None:
    rng = random.Random(args.seed)
    trees = [load_tree(args.tree)] if args.tree else [random_tree(rng) for _ in range(args.trees)]
    total = 0
    for T in trees:
        if args.prefixes:
            prefixes = [parse_sequence(p) for p in args.prefixes]
        else:
            prefixes = [tuple(rng.randrange(3) for _ in range(args.depth)) for _ in range(args.samples)]
        family = OrderFamily(T) if args.kind == "order" else DilatorFamily(T)
        rep = family_check(family, prefixes, args.depth)
        total += len(rep.violations)
        for v in rep.violations:
            out.fail(f"{T.name}: {v}")
        out.say(f"{T.name}: {len(prefixes)} prefixes, {len(rep.violations)} violations")
    out.data["violations"] = total


def _game_config(path: str) -> tuple[games.GameConfig, dict]:
    fields = parse_game_config(_read(path))
    base = Path(path).parent
    tree = load_tree(fields["tree"], base)
    target_path = Path(fields["target"])
    if not target_path.is_absolute():
        target_path = base / target_path
    text = _read(str(target_path))
    if fields["mode"] == games.ORDINAL:
        target = parse_order(text)
    else:
        target = _as_predilator(parse_dendrogram(text) if _looks_like_dendrogram(text) else parse_predilator(text))
    cfg = games.GameConfig(fields["mode"], tree, target, fields["alphabet"], fields["depth"])
    return cfg, fields


def _selector(spec: str, base: Path):
    if spec == "first":
        return games.first_selector, None
    if spec == "majority":
        return games.majority_selector, None
    if spec.startswith("at-embedding:"):
        path = Path(spec[len("at-embedding:"):])
        if not path.is_absolute():
            path = base / path
        e = tuple(int(v) if v.lstrip("-").isdigit() else v for v in _read(str(path)).split())
        return games.at_embedding(e), e
    raise ParseError(f"unknown selector {spec!r}")


def _format_move(m) -> str:
    return f"{m[0]}:{term_token(m[1])}" if isinstance(m, tuple) else str(m)


def cmd_game(args, out: Outcome) -> None:
    cfg, fields = _game_config(args.config)
    if args.action == "solve":
        winner, strategy = games.solve_truncated(cfg, budget=args.budget)
        out.data.update(winner=winner, positions=len(strategy.moves))
        out.say(f"winner {winner}; strategy positions {len(strategy.moves)}; verified")
        return
    if args.action == "play":
        moves = []
        for k, tok in enumerate(args.moves):
            if k % 2 == 0:
                x, _, t = tok.partition(":")
                tgt = int(t) if t.lstrip("-").isdigit() else t
                moves.append((int(x), tgt))
            else:
                moves.append(int(tok))
        st = games.start(cfg)
        transcript = []
        for m in moves:
            st = games.referee_step(cfg, st, m)
            transcript.append({"move": _format_move(m), "status": st.status})
            out.say(f"{'I ' if isinstance(m, tuple) else 'II'} {_format_move(m)} -> {st.status}")
        # a violated play is a game outcome, not a tool failure
        out.data.update(transcript=transcript, status=st.status)
        return
    # project
    selector, e = _selector(fields["selector"], Path(args.config).parent)
    winner, solved = games.solve_truncated(cfg, budget=args.budget)
    sigma_prime = solved if winner == "II" else games.rule_strategy(lambda st: 0)
    sigma = games.project_strategy(cfg, sigma_prime, selector)
    out.data["g_prime_winner"] = winner
    out.data["strategy"] = {",".join(map(str, k)): v for k, v in sorted(sigma.moves.items())}
    out.say(f"subsidiary winner {winner}; projected positions {len(sigma.moves)}")
    for k, v in sorted(sigma.moves.items()):
        out.say(f"sigma({','.join(map(str, k))}) = {v}")
    if e is not None:
        bad = 0
        for ones in games.all_player_one_sequences(cfg):
            xs = games.play_projected(sigma, ones)
            lift = games.lift_play(cfg, sigma_prime, xs, e)
            if not (lift.respects and lift.clean):
                bad += 1
                out.fail(f"lift failed for play {','.join(map(str, xs))}")
        out.data["lift_failures"] = bad
        out.say(f"lifted plays checked; failures {bad}")


def cmd_roundtrip(args, out: Outcome) -> None:
    rng = random.Random(args.seed)
    fails = {"dec-cell": 0, "cell-dec": 0, "diff-int": 0}
    for _ in range(args.count):
        P = random_predilator(rng, max_terms=4, max_arity=3)
        if search_isomorphism(dec(cell(P)), P) is None:
            fails["dec-cell"] += 1
        if search_isomorphism(differentiate(integrate(P)), P) is None:
            fails["diff-int"] += 1
        C = random_dendrogram(rng, max_nodes=8)
        if dendrogram_isomorphism(cell(dec(C)), C) is None:
            fails["cell-dec"] += 1
    out.data.update(count=args.count, failures=fails)
    for k, v in fails.items():
        line = f"{k}: {args.count} cases, {v} failures"
        out.fail(line) if v else out.say(line)


def cmd_probe(args, out: Outcome) -> None:
    if args.file == "omega-star":
        P = omega_star_column()
    else:
        P = _as_predilator(_load_predilator_or_dendrogram(args.file))
    witness = bad_sequence_probe(P, args.depth, args.budget)
    out.data["witness"] = None if witness is None else [str(x) for x in witness]
    if witness is None:
        out.say(f"no descending sequence of length {args.budget + 1} found")
    else:
        out.fail("descending sequence: " + " > ".join(map(str, witness)))


# -- wiring --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dilators", description="Finite predilators, dendrograms and games.")
    ap.add_argument("--json", action="store_true", help="print one JSON document instead of text")
    ap.add_argument("--seed", type=int, default=0, help="seed for generated inputs")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_text):
        p = sub.add_parser(name, help=help_text, parents=[common])
        p.set_defaults(fn=fn)
        return p

    verb("check", cmd_check, "validate a predilator or dendrogram file").add_argument("file")
    p = verb("apply", cmd_apply, "list D(n) in increasing order")
    p.add_argument("file")
    p.add_argument("-n", type=int, required=True)
    p = verb("dec", cmd_dec, "decode a dendrogram into a predilator")
    p.add_argument("file")
    p.add_argument("--bullet", action="store_true", help="keep non-terminal nodes as terms")
    verb("cell", cmd_cell, "dendrogram of distance classes").add_argument("file")
    verb("bullet", cmd_bullet, "bullet closure of a dendrogram").add_argument("file")
    p = verb("sort", cmd_sort, "level-then-value sort of a trekkable dendrogram")
    p.add_argument("file")
    p.add_argument("--schedule", choices=("passes", "least"), default="passes")
    verb("int", cmd_int, "integral").add_argument("file")
    verb("diff", cmd_diff, "derivative of a semiflower").add_argument("file")
    verb("decompose-flower", cmd_decompose_flower, "nullary part plus integral").add_argument("file")
    p = verb("elem-decompose", cmd_elem_decompose, "chain of elementary comparisons")
    p.add_argument("file")
    p.add_argument("x", help="lower element, e.g. 3(0,2)")
    p.add_argument("y", help="upper element")
    p = verb("family", cmd_family, "family member at a prefix")
    p.add_argument("tree")
    p.add_argument("prefix", help="comma-separated naturals, '-' for empty")
    p.add_argument("--kind", choices=("order", "dilator"), default="order")
    p = verb("shoenfield", cmd_shoenfield, "finite stage of the functorial tree")
    p.add_argument("tree")
    p.add_argument("prefix")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--cross-check", action="store_true", help="compare with the family member")
    p = verb("family-check", cmd_family_check, "sweep family clauses over prefixes")
    p.add_argument("--tree", help="tree spec; random trees when omitted")
    p.add_argument("--kind", choices=("order", "dilator"), default="dilator")
    p.add_argument("--prefixes", nargs="*")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--trees", type=int, default=5)
    p.add_argument("--samples", type=int, default=5)
    p = verb("game", cmd_game, "subsidiary games")
    p.add_argument("action", choices=("solve", "play", "project"))
    p.add_argument("config")
    p.add_argument("moves", nargs="*", help="for play: x:target for Player I, x for Player II")
    p.add_argument("--budget", type=int, default=games.DEFAULT_BUDGET)
    p = verb("roundtrip", cmd_roundtrip, "Dec/Cell and integral/derivative suites")
    p.add_argument("--count", type=int, default=100)
    p = verb("probe", cmd_probe, "search for descending sequences")
    p.add_argument("file", help="predilator/dendrogram file, or 'omega-star'")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--budget", type=int, default=8)
    return ap


def _emit(out: Outcome, as_json: bool, stream) -> None:
    if as_json:
        out.data["ok"] = out.ok
        out.data["lines"] = out.lines
        stream.write(json.dumps(out.data, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        for line in out.lines:
            stream.write(line + "\n")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = Outcome(args.verb)
    code = EXIT_OK
    try:
        args.fn(args, out)
        code = EXIT_OK if out.ok else EXIT_VIOLATION
    except ParseError as exc:
        out.data["error"] = str(exc)
        out.fail(f"parse error: {exc}")
        code = EXIT_PARSE
    except (BudgetExceeded, BoundExceeded) as exc:
        out.data["error"] = str(exc)
        out.fail(f"budget exceeded: {exc}")
        code = EXIT_BUDGET
    except (DilatorError, ValueError) as exc:
        out.data["error"] = str(exc)
        out.fail(f"precondition failed: {type(exc).__name__}: {exc}")
        code = EXIT_PRECONDITION
    out.data["exit"] = code
    _emit(out, args.json, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
