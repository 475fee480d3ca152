"""Command-line interface: solve, verify, generate, reduce, bench."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import formats
from .bayesian import rescale_bayesian, reduce_to_polymatrix, validate_bayesian
from .descent import DescentConfig, solve
from .formats import FormatError
from .game import as_profile, normalize, validate
from .generators import TOPOLOGIES, generate_bayesian, generate_polymatrix
from .verify import verify_epsilon_ne

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY_FAILED = 2
EXIT_MAX_ITERATIONS = 3


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1; 2 is reserved for failed verification."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _delta(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 < value <= 0.5:
        raise argparse.ArgumentTypeError(f"delta must lie in (0, 0.5], got {value}")
    return value


def _nonneg(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not value >= 0.0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _probability(text: str) -> float:
    value = _nonneg(text)
    if value > 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {value}")
    return value


def _load_valid_game(path):
    game = formats.load_game(path)
    problems = validate(game)
    if problems:
        raise FormatError(f"{path}: " + "; ".join(str(v) for v in problems))
    return game


def _normalized(game):
    return game if game.normalized else normalize(game)[0]


def cmd_solve(args) -> int:
    game = _normalized(_load_valid_game(args.input))
    config = DescentConfig(delta=args.delta, start=args.start, seed=args.seed,
                           max_iterations=args.max_iterations, diagnostics=args.trace is not None)
    result = solve(game, config)
    formats.write_json(formats.result_to_dict(result), args.output)
    if args.trace is not None:
        formats.write_json({"format": "trace-v1", "delta": args.delta,
                            "iterations": [t.to_dict() for t in result.traces]}, args.trace)
    if result.termination != "target-reached":
        print(f"stopped after {result.iterations} iterations with max regret "
              f"{result.max_regret:.17g}", file=sys.stderr)
        return EXIT_MAX_ITERATIONS
    return EXIT_OK


def cmd_verify(args) -> int:
    game = _normalized(_load_valid_game(args.input))
    vectors = formats.profile_from_dict(formats.load_json(args.profile), str(args.profile))
    try:
        profile = as_profile(game, vectors)
    except ValueError as exc:
        raise FormatError(f"{args.profile}: {exc}") from exc
    verdict = verify_epsilon_ne(game, profile, args.epsilon)
    status = "PASS" if verdict.passed else "FAIL"
    print(f"{status} max_regret={verdict.max_regret!r} worst_player={verdict.worst} "
          f"epsilon={args.epsilon!r}")
    return EXIT_OK if verdict.passed else EXIT_VERIFY_FAILED


def cmd_generate(args) -> int:
    if args.kind == "polymatrix":
        if args.min_strategies > args.max_strategies:
            raise FormatError("--min-strategies exceeds --max-strategies")
        if args.players < 2:
            raise FormatError("--players must be at least 2")
        game = generate_polymatrix(args.topology, args.players,
                                   (args.min_strategies, args.max_strategies),
                                   seed=args.seed, p=args.gnp_p)
        formats.save_game(game, args.output)
    else:
        game = generate_bayesian(args.row_types, args.col_types,
                                 args.row_strategies, args.col_strategies, seed=args.seed)
        formats.save_bayes(game, args.output)
    return EXIT_OK


def cmd_reduce(args) -> int:
    bgame = formats.load_bayes(args.input)
    problems = validate_bayesian(bgame)
    if problems:
        raise FormatError(f"{args.input}: " + "; ".join(str(v) for v in problems))
    if not bgame.rescaled:
        bgame = rescale_bayesian(bgame)
    game, index = reduce_to_polymatrix(bgame)
    formats.save_game(game, args.output)
    if args.map is not None:
        formats.write_json({"format": "type-map-v1", **index.to_dict()}, args.map)
    return EXIT_OK


def _bench_one(job):
    index, seed, topology, n, strategies, gnp_p, delta, start = job
    game = normalize(generate_polymatrix(topology, n, strategies, seed=seed, p=gnp_p))[0]
    t0 = time.perf_counter()
    result = solve(game, DescentConfig(delta=delta, start=start, seed=seed))
    elapsed = time.perf_counter() - t0
    return [index, seed, n, len(game.edges), format(result.max_regret, ".17g"),
            result.iterations, result.termination, f"{elapsed:.4f}"]


def cmd_bench(args) -> int:
    if args.min_players > args.max_players or args.min_players < 2:
        raise FormatError("need 2 <= --min-players <= --max-players")
    rng = np.random.default_rng(args.seed)
    jobs = []
    for g in range(args.games):
        seed = int(rng.integers(2 ** 31))
        n = int(rng.integers(args.min_players, args.max_players + 1))
        jobs.append((g, seed, args.topology, n, (args.min_strategies, args.max_strategies),
                     args.gnp_p, args.delta, args.start))
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_bench_one, jobs))
    else:
        rows = [_bench_one(job) for job in jobs]
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["game", "seed", "players", "edges", "max_regret", "iterations",
                     "termination", "seconds"])
    writer.writerows(rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="regretdescent", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="find a (0.5 + delta)-approximate equilibrium")
    p.add_argument("--input", required=True, help="polymatrix-v1 game file")
    p.add_argument("--delta", required=True, type=_delta)
    p.add_argument("--start", choices=["uniform", "random"], default="uniform")
    p.add_argument("--seed", type=int, default=None, help="seed for --start random")
    p.add_argument("--max-iterations", type=_positive_int, default=None)
    p.add_argument("--trace", default=None, help="write per-iteration diagnostics here")
    p.add_argument("--output", default=None, help="result file (default: stdout)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check an epsilon-equilibrium claim")
    p.add_argument("--input", required=True, help="polymatrix-v1 game file")
    p.add_argument("--profile", required=True, help="profile-v1 or solve-result-v1 file")
    p.add_argument("--epsilon", required=True, type=_nonneg)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write a random game")
    gsub = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    g = gsub.add_parser("polymatrix")
    g.add_argument("--topology", choices=TOPOLOGIES, default="complete")
    g.add_argument("--players", type=int, default=3)
    g.add_argument("--min-strategies", type=_positive_int, default=2)
    g.add_argument("--max-strategies", type=_positive_int, default=2)
    g.add_argument("--gnp-p", type=_probability, default=0.5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output", default=None)
    g.set_defaults(func=cmd_generate)
    g = gsub.add_parser("bayesian")
    g.add_argument("--row-types", type=_positive_int, default=2)
    g.add_argument("--col-types", type=_positive_int, default=2)
    g.add_argument("--row-strategies", type=_positive_int, default=2)
    g.add_argument("--col-strategies", type=_positive_int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output", default=None)
    g.set_defaults(func=cmd_generate)

    p = sub.add_parser("reduce", help="Bayesian game to polymatrix game")
    p.add_argument("--input", required=True, help="bayes2p-v1 file")
    p.add_argument("--output", default=None)
    p.add_argument("--map", default=None, help="write the type/player index map here")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("bench", help="solve a batch of random games, CSV to stdout")
    p.add_argument("--games", type=_positive_int, default=10)
    p.add_argument("--delta", type=_delta, default=0.1)
    p.add_argument("--topology", choices=TOPOLOGIES, default="complete")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-players", type=int, default=2)
    p.add_argument("--max-players", type=int, default=8)
    p.add_argument("--min-strategies", type=_positive_int, default=2)
    p.add_argument("--max-strategies", type=_positive_int, default=6)
    p.add_argument("--gnp-p", type=_probability, default=0.5)
    p.add_argument("--start", choices=["uniform", "random"], default="uniform")
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
