"""Acceptance criteria, each at its stated tolerance.

Every test records a PASS/FAIL line that the terminal summary prints.
"""

import itertools
import time

import numpy as np
import pytest

from gamelib import suite_game, worst_response_start
from regretdescent import formats
from regretdescent.bayesian import bayesian_regret, reduce_to_polymatrix, rescale_bayesian
from regretdescent.descent import (
    DescentConfig,
    solve,
    stationarity_certificate,
    step_size,
    steepest_descent_direction,
)
from regretdescent.game import normalize, random_profile
from regretdescent.generators import generate_bayesian, generate_polymatrix
from regretdescent.regret import df_delta_i, regret_report
from regretdescent.verify import brute_force_min_regret, regrets, verify_bayesian, verify_epsilon_ne

DELTA = 0.1
SUITE_SIZE = 200
MAX_ITER = 443
STARTS = ("uniform", "worst-response")


def _config(game, start, diagnostics=True):
    s = worst_response_start(game) if start == "worst-response" else "uniform"
    return DescentConfig(delta=DELTA, start=s, diagnostics=diagnostics)


def _run_suite(out_dir):
    """Solve every suite game from every start; write each result to ``out_dir``."""
    runs = []
    for index in range(SUITE_SIZE):
        game, _ = normalize(suite_game(index))
        for start in STARTS:
            res = solve(game, _config(game, start))
            path = out_dir / f"game{index:03d}-{start}.json"
            formats.write_json(formats.result_to_dict(res), path)
            runs.append((index, start, game, res, path))
    return runs


@pytest.fixture(scope="module")
def suite(tmp_path_factory):
    t0 = time.perf_counter()
    runs = _run_suite(tmp_path_factory.mktemp("first"))
    return runs, time.perf_counter() - t0


def test_criterion_1_guarantee(suite, criterion_log):
    runs, seconds = suite
    bad = []
    worst_f = 0.0
    for index, start, game, res, _ in runs:
        verdict = verify_epsilon_ne(game, res.profile, 0.5 + DELTA)
        worst_f = max(worst_f, verdict.max_regret)
        if res.termination != "target-reached" or not verdict.passed or res.iterations > MAX_ITER:
            bad.append((index, start))
    iters = [r[3].iterations for r in runs]
    ok = criterion_log(1, not bad and seconds < 300,
                       f"{len(runs)} runs, failures={len(bad)}, worst verified f={worst_f:.6f}, "
                       f"max iterations={max(iters)}, runtime={seconds:.1f}s")
    assert ok, bad[:10]


def test_criterion_2_progress(suite, criterion_log):
    runs, _ = suite
    eps = step_size(DELTA)
    traces = [t for r in runs for t in r[3].traces]
    worst_gain = max(t.gain_residual for t in traces)
    nonstat = [t for t in traces if not t.stationary]
    worst_contraction = max((t.f_after - (1 - eps ** 2) * t.f_before for t in nonstat), default=-np.inf)
    worst_progress = max((0.5 * eps ** 2 - (t.f_before - t.f_after) for t in nonstat), default=-np.inf)
    passed = worst_gain <= 1e-7 and worst_contraction <= 1e-7 and worst_progress <= 1e-7
    ok = criterion_log(2, passed and len(traces) > 0,
                       f"{len(traces)} iterations ({len(nonstat)} non-stationary), "
                       f"max gain residual={worst_gain:.3e}, max contraction excess={worst_contraction:.3e}, "
                       f"max progress shortfall={worst_progress:.3e}")
    assert ok


def test_criterion_3_stationarity_certificate(criterion_log):
    rng = np.random.default_rng(3)
    witnesses = []
    for k in range(100):
        game, _ = normalize(suite_game(int(rng.integers(SUITE_SIZE))))
        witnesses.append(stationarity_certificate(game, random_profile(game, rng), DELTA)[1])
    worst = max(witnesses)
    ok = criterion_log(3, worst <= 0.5 + 1e-7, f"100 pairs, max witness={worst:.6f}")
    assert ok


def _pure_extremes(game, player):
    """Max and min payoff over every pure profile of ``player`` and its neighbours."""
    nbrs = game.neighbors(player)
    m = game.strategy_counts[player]
    shape = (m,) + tuple(game.strategy_counts[j] for j, _ in nbrs)
    total = np.zeros(shape)
    for axis, (_, a) in enumerate(nbrs, start=1):
        view = [1] * len(shape)
        view[0], view[axis] = a.shape
        total = total + a.reshape(view)
    return total.max(), total.min()


def test_criterion_4_normalization(criterion_log):
    worst = 0.0
    checked = 0
    for index in range(100):
        norm, rec = normalize(suite_game(index, raw_spread=True))
        for i in range(norm.player_count):
            if rec.degenerate[i]:
                continue
            hi, lo = _pure_extremes(norm, i)
            worst = max(worst, abs(hi - 1.0), abs(lo))
            checked += 1
    ok = criterion_log(4, worst <= 1e-9, f"{checked} players in 100 games, max deviation={worst:.3e}")
    assert ok


def test_criterion_5_lp_optimality(criterion_log):
    # replay sampled iterations: rerunning with a smaller budget reproduces x_t exactly
    rng = np.random.default_rng(5)
    candidates = []
    for index in range(SUITE_SIZE):
        game, _ = normalize(suite_game(index))
        res = solve(game, _config(game, "worst-response", diagnostics=False))
        candidates += [(index, t) for t in range(res.iterations)]
    picks = [candidates[k] for k in rng.choice(len(candidates), size=30, replace=False)]
    worst = -np.inf
    for index, t in picks:
        game, _ = normalize(suite_game(index))
        cfg = _config(game, "worst-response", diagnostics=False)
        cfg.max_iterations = t
        x = solve(game, cfg).profile
        _, w_star = steepest_descent_direction(game, x, DELTA)
        K = regret_report(game, x, DELTA).max_regret_set
        for _ in range(100):
            z = random_profile(game, rng)
            best_z = max(df_delta_i(game, x, z, i, DELTA) for i in K)
            worst = max(worst, w_star - best_z)
    ok = criterion_log(5, worst <= 1e-7,
                       f"30 iterations x 100 candidates, max (w* - candidate)={worst:.3e}")
    assert ok


def _has_pure_equilibrium(game):
    return any(max(regrets(game, [np.eye(2)[a], np.eye(2)[b]])) == 0.0
               for a, b in itertools.product(range(2), repeat=2))


def _two_by_two_games():
    """Ten seeded games with a pure equilibrium and ten with only a mixed one."""
    pure, mixed = [], []
    seed = 0
    while len(pure) < 10 or len(mixed) < 10:
        game, _ = normalize(generate_polymatrix("complete", 2, (2, 2), seed=seed))
        bucket = pure if _has_pure_equilibrium(game) else mixed
        if len(bucket) < 10:
            bucket.append(game)
        seed += 1
    return pure + mixed


def test_criterion_6_oracle_agreement(criterion_log):
    rng = np.random.default_rng(6)
    grid_worst = 0.0
    gap = 0.0
    for game in _two_by_two_games():
        grid_worst = max(grid_worst, brute_force_min_regret(game, 0.01)[1])
        for _ in range(50):
            x = random_profile(game, rng)
            gap = max(gap, float(np.max(np.abs(np.subtract(regrets(game, x),
                                                            regret_report(game, x).regrets)))))
    ok = criterion_log(6, grid_worst <= 0.01 and gap <= 1e-9,
                       f"20 games, max grid f={grid_worst:.3e}, 1000 profiles max gap={gap:.3e}")
    assert ok


def test_criterion_7_bayesian(criterion_log):
    rng = np.random.default_rng(7)
    gap = 0.0
    failures = []
    for seed in range(50):
        dims = tuple(int(d) for d in rng.integers(1, 5, size=4))
        game = rescale_bayesian(generate_bayesian(*dims, seed=seed))
        poly, index = reduce_to_polymatrix(game)
        for _ in range(20):
            prof = random_profile(poly, rng)
            rep = regret_report(poly, prof)
            row, col = bayesian_regret(game, *index.to_bayesian(prof))
            for i, p in index.row_players.items():
                gap = max(gap, abs(row[i] - rep.regrets[p]))
            for j, p in index.col_players.items():
                gap = max(gap, abs(col[j] - rep.regrets[p]))
        res = solve(poly, DescentConfig(delta=DELTA))
        if res.termination != "target-reached" or not verify_bayesian(
                game, *index.to_bayesian(res.profile), 0.5 + DELTA).passed:
            failures.append((seed, dims))
    ok = criterion_log(7, gap <= 1e-9 and not failures,
                       f"50 games, max identity gap={gap:.3e}, end-to-end failures={len(failures)}")
    assert ok, failures


def test_criterion_8_determinism(suite, tmp_path, criterion_log):
    first, _ = suite
    second = _run_suite(tmp_path)
    same_iters = all(a[3].iterations == b[3].iterations for a, b in zip(first, second))
    differing = [a[4].name for a, b in zip(first, second) if a[4].read_bytes() != b[4].read_bytes()]
    ok = criterion_log(8, same_iters and not differing and len(first) == len(second),
                       f"{len(second)} reruns, identical iteration counts={same_iters}, "
                       f"differing files={len(differing)}")
    assert ok, differing[:10]


def test_suite_topologies_are_covered():
    kinds = {index % 4 for index in range(SUITE_SIZE)}
    sizes = {normalize(suite_game(i))[0].player_count for i in range(SUITE_SIZE)}
    counts = set(itertools.chain.from_iterable(suite_game(i).strategy_counts for i in range(SUITE_SIZE)))
    assert kinds == {0, 1, 2, 3}
    assert sizes == set(range(2, 9)) and counts == set(range(2, 7))
