"""Command-line front end.

    cwmmg mwc GAME.json
    cwmmg indices GAME.json --index dp
    cwmmg stable GAME.json --index hp
    cwmmg verify --trials 500 --nmax 12 --seed 1
    cwmmg gen random --n 8 --k 2 --max 8 --seed 3 -o game.json
    cwmmg bench mwc

Results go to stdout as JSON (default) or a plain table; diagnostics go to
stderr.  Exit status: 0 ok, 1 domain or verification failure, 2 usage.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import statistics
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import oracle
from .errors import CwmmgError, DimensionError, GameFileError, OracleLimitError
from .generators import (
    FIXTURES,
    GeneratorSpec,
    game_from_document,
    game_to_document,
    gen_random,
)
from .indices2d import all_indices2d, bz_ss2, indices2d, wc_structure
from .model import Game
from .mwc2d import compute_mwc2
from .power import KINDS
from .stability import cstable_coalitions, stable_structures, structures_containing


# --- ingestion and serialization -------------------------------------------


def parse_game(document) -> Game:
    """Parse a game file given as text, bytes, or an already-decoded mapping."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GameFileError(f"game file: malformed JSON ({exc})") from None
    return game_from_document(document)


def read_game(path: str) -> Game:
    if path == "-":
        return parse_game(sys.stdin.read())
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GameFileError(f"cannot read game file {path}: {exc.strerror}") from None
    return parse_game(text)


def frac(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def digest(game: Game) -> str:
    return hashlib.sha256(game.canonical_bytes()).hexdigest()


def coalition_ids(c) -> list[int]:
    return sorted(c)


def coalition_labels(game: Game, c) -> list[str]:
    return [game.players[j].label for j in sorted(c)]


def result_document(argv, game: Optional[Game], payload: dict, seconds: Optional[float]) -> dict:
    return {
        "command": list(argv),
        "game": None if game is None else {"sha256": digest(game), "n": game.n, "k": game.k},
        "payload": payload,
        "timing": None if seconds is None else {"seconds": round(seconds, 6)},
    }


def dump_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


# --- method dispatch --------------------------------------------------------


def resolve_method(game: Game, method: Optional[str]) -> str:
    if method is None:
        return "fast" if game.k == 2 else "oracle"
    if method == "fast" and game.k != 2:
        raise DimensionError(f"--method fast requires k = 2, game has k = {game.k}")
    return method


def mwc_of(game: Game, method: str, limit: int) -> list[frozenset]:
    if method == "fast":
        return compute_mwc2(game).coalitions()
    return oracle.enumerate_mwc(game, limit)


def indices_of(game: Game, method: str, limit: int, kinds=KINDS) -> dict:
    if method == "fast":
        if len(kinds) == 1:
            return {kinds[0]: indices2d(game, kinds[0])}
        return all_indices2d(game)
    return oracle.all_indices_oracle(game, limit)


def _warn_limit(args) -> int:
    if args.oracle_limit is None:
        return oracle.DEFAULT_LIMIT
    if args.oracle_limit != oracle.DEFAULT_LIMIT:
        print(
            f"WARNING: oracle enumeration limit overridden to n <= {args.oracle_limit}; "
            "runtime and memory grow as 2**n",
            file=sys.stderr,
        )
    return args.oracle_limit


# --- subcommands ------------------------------------------------------------


def cmd_mwc(args, argv, out):
    game = read_game(args.game)
    limit = _warn_limit(args)
    method = resolve_method(game, args.method)
    start = time.perf_counter()
    mwc = mwc_of(game, method, limit)
    seconds = time.perf_counter() - start
    payload = {
        "method": method,
        "count": len(mwc),
        "bound": game.n + 1,
        "tight": len(mwc) == game.n + 1,
        "mwc": [coalition_ids(c) for c in mwc],
    }
    if args.format == "json":
        out.write(dump_json(result_document(argv, game, payload, _timing(args, seconds))) + "\n")
    else:
        for c in mwc:
            out.write("{" + ", ".join(coalition_labels(game, c)) + "}\n")
        note = "  (|MWC| = n+1)" if payload["tight"] else ""
        out.write(f"{len(mwc)} coalitions, n = {game.n}{note}\n")
    return 0


def cmd_indices(args, argv, out):
    game = read_game(args.game)
    limit = _warn_limit(args)
    method = resolve_method(game, args.method)
    kinds = (args.index,) if args.index else KINDS
    start = time.perf_counter()
    profiles = indices_of(game, method, limit, kinds)
    seconds = time.perf_counter() - start
    table = {kind: [frac(v) for v in profiles[kind]] for kind in kinds}
    payload = {
        "method": method,
        "players": [p.label for p in game.players],
        "indices": table,
    }
    if args.format == "json":
        out.write(dump_json(result_document(argv, game, payload, _timing(args, seconds))) + "\n")
    else:
        rows = [["player", *kinds]]
        for j, p in enumerate(game.players):
            rows.append([p.label, *(table[kind][j] for kind in kinds)])
        out.write(_render(rows))
    return 0


def cmd_stable(args, argv, out):
    game = read_game(args.game)
    limit = _warn_limit(args)
    method = resolve_method(game, args.method)
    start = time.perf_counter()
    mwc = mwc_of(game, method, limit)
    powers = indices_of(game, method, limit, (args.index,))[args.index]
    report = cstable_coalitions(game, mwc, powers)
    payload = {
        "method": method,
        "kind": report.kind,
        "min_theta": frac(report.min_theta),
        "stable_coalitions": [coalition_ids(c) for c in report.stable_coalitions],
        "winner_ratio": frac(report.winner_ratio),
        "allocation": [frac(v) for v in report.allocation],
    }
    if args.recursive:
        rec_limit = args.recursive_limit or oracle.RECURSIVE_LIMIT
        if args.recursive_limit and args.recursive_limit != oracle.RECURSIVE_LIMIT:
            print(
                f"WARNING: recursive stability limit overridden to n <= {rec_limit}; "
                "runtime grows faster than the Bell numbers",
                file=sys.stderr,
            )
        found = oracle.cstable_structures_oracle(game, powers, limit=rec_limit)
        got = [pi.canonical() for pi in found]
        payload["structures"] = [[list(b) for b in key] for key in got]
        payload["structures_agree"] = got == [
            pi.canonical() for pi in stable_structures(game, mwc, powers)
        ]
        # partitions whose stable block carries no zero-power padding
        payload["structures_with_mwc_block"] = sorted(
            pi.canonical() for pi in structures_containing(game, report.stable_coalitions)
        ) == got
    seconds = time.perf_counter() - start
    if args.format == "json":
        out.write(dump_json(result_document(argv, game, payload, _timing(args, seconds))) + "\n")
    else:
        out.write(f"kind: {report.kind}\nmin theta: {payload['min_theta']}\n")
        for c in report.stable_coalitions:
            out.write("stable: {" + ", ".join(coalition_labels(game, c)) + "}\n")
        out.write(f"winner ratio: {payload['winner_ratio']}\n")
        rows = [["player", "payoff"]] + [
            [p.label, payload["allocation"][j]] for j, p in enumerate(game.players)
        ]
        out.write(_render(rows))
        if args.recursive:
            out.write(f"recursive structures: {len(payload['structures'])}, "
                      f"agree: {payload['structures_agree']}\n")
    return 0 if payload.get("structures_agree", True) else 1


def compare_with_oracle(game: Game) -> list[str]:
    """Names of every quantity where the fast path and the oracle disagree."""
    bad = []
    if compute_mwc2(game).coalitions() != oracle.enumerate_mwc(game):
        bad.append("mwc")
    if wc_structure(game).winning_count() != oracle.winning_count(game):
        bad.append("wc_count")
    fast = all_indices2d(game)
    slow = oracle.all_indices_oracle(game)
    bad.extend(kind for kind in KINDS if fast[kind].values != slow[kind].values)
    return bad


def verify_games(trials: int, nmax: int, seed: int, max_coord: int):
    """Seeded instances for the equivalence harness: sizes drawn in 1..nmax."""
    sizes = np.random.PCG64(seed).random_raw(trials).tolist()
    for i in range(trials):
        n = 1 + int(sizes[i]) % nmax
        yield i, gen_random(n, 2, max_coord, seed * 1_000_003 + i)


def cmd_verify(args, argv, out):
    limit = _warn_limit(args)
    if args.nmax > limit:
        raise OracleLimitError(f"--nmax {args.nmax} exceeds the oracle limit {limit}")
    start = time.perf_counter()
    mismatches = 0
    for i, game in verify_games(args.trials, args.nmax, args.seed, args.max):
        bad = compare_with_oracle(game)
        if bad:
            mismatches += 1
            repro = Path(args.repro)
            repro.write_text(dump_json(game_to_document(game)) + "\n")
            print(
                f"mismatch in trial {i} ({', '.join(bad)}): {game.canonical_bytes().decode()}; "
                f"repro game file written to {repro}",
                file=sys.stderr,
            )
            break
    seconds = time.perf_counter() - start
    payload = {"trials": args.trials, "nmax": args.nmax, "seed": args.seed, "mismatches": mismatches}
    if args.format == "json":
        out.write(dump_json(result_document(argv, None, payload, _timing(args, seconds))) + "\n")
    else:
        out.write(f"{args.trials} trials, {mismatches} mismatches\n")
    return 0 if mismatches == 0 else 1


def cmd_gen(args, argv, out):
    spec = GeneratorSpec(
        family=args.family,
        t=args.t,
        n=args.n,
        k=args.k,
        max_coord=args.max,
        seed=args.seed,
        name=args.name,
    )
    game = spec.build()
    text = dump_json(game_to_document(game)) + "\n"
    if args.output:
        Path(args.output).write_text(text)
        print(f"wrote {args.output} (n = {game.n}, k = {game.k}, sha256 {digest(game)})", file=sys.stderr)
    else:
        out.write(text)
    return 0


def _median_time(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return statistics.median(times)


def bench_table(target: str, sizes: Sequence[int], repeats: int, seed: int) -> list[dict]:
    rows = []
    prev = None
    for n in sizes:
        game = gen_random(n, 2, 1_000_000, seed + n)
        if target == "mwc":
            t = _median_time(lambda: compute_mwc2(game), repeats)
        else:
            t = _median_time(lambda: bz_ss2(game), repeats)
        slope = None
        if prev is not None and prev[1] > 0 and t > 0:
            slope = math.log(t / prev[1]) / math.log(n / prev[0])
        rows.append({"n": n, "median_seconds": t, "slope": slope})
        prev = (n, t)
    return rows


def cmd_bench(args, argv, out):
    if args.sizes:
        sizes = [int(s) for s in args.sizes.split(",")]
    else:
        sizes = [12_500, 25_000, 50_000, 100_000] if args.target == "mwc" else [50, 100, 200, 300]
    rows = bench_table(args.target, sizes, args.repeats, args.seed)
    payload = {"target": args.target, "repeats": args.repeats, "rows": rows}
    if args.format == "json":
        out.write(dump_json(result_document(argv, None, payload, None)) + "\n")
    else:
        table = [["n", "median s", "log-log slope"]]
        for r in rows:
            slope = "-" if r["slope"] is None else f"{r['slope']:.2f}"
            table.append([str(r["n"]), f"{r['median_seconds']:.4f}", slope])
        out.write(_render(table))
    return 0


# --- plumbing ---------------------------------------------------------------


def _timing(args, seconds: float) -> Optional[float]:
    return None if args.no_timing else seconds


def _render(rows) -> str:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--oracle-limit", type=int, default=None, metavar="N",
                        help="override the enumeration limit (default 20)")
    common.add_argument("--no-timing", action="store_true",
                        help="omit wall time so output is byte-stable")

    parser = argparse.ArgumentParser(prog="cwmmg", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def game_cmd(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("game", help="game file (JSON) or - for stdin")
        p.add_argument("--method", choices=("fast", "oracle"), default=None)
        return p

    game_cmd("mwc", "list the minimal winning coalitions")
    p = game_cmd("indices", "exact power index table")
    p.add_argument("--index", choices=KINDS, default=None)
    p = game_cmd("stable", "stable coalitions and allocation")
    p.add_argument("--index", choices=KINDS, required=True)
    p.add_argument("--recursive", action="store_true",
                   help="also run the recursive structure oracle and compare")
    p.add_argument("--recursive-limit", type=int, default=None, metavar="N")

    p = sub.add_parser("verify", parents=[common], help="fast path vs oracle on random games")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--nmax", type=int, default=12)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--max", type=int, default=8, help="largest coordinate")
    p.add_argument("--repro", default="verify-repro.json", help="where to write a failing game")

    p = sub.add_parser("gen", parents=[common], help="write a game file")
    p.add_argument("family", choices=("tight", "random", "fixture"))
    p.add_argument("--t", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--max", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name", choices=FIXTURES)
    p.add_argument("-o", "--output")

    p = sub.add_parser("bench", parents=[common], help="scaling table")
    p.add_argument("target", choices=("mwc", "bzss"))
    p.add_argument("--sizes", help="comma-separated player counts")
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    return parser


COMMANDS = {
    "mwc": cmd_mwc,
    "indices": cmd_indices,
    "stable": cmd_stable,
    "verify": cmd_verify,
    "gen": cmd_gen,
    "bench": cmd_bench,
}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, argv, out)
    except CwmmgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
