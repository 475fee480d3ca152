"""Gradient descent on the maximum-regret function.

Each iteration solves a linear program for the direction ``xp`` that
minimizes the smoothed directional derivative of the max regret, then moves
a fixed fraction ``epsilon = delta / (delta + 2)`` towards it.  The loop
stops as soon as the max regret is at most ``0.5 + delta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .game import PolymatrixGame, Profile, as_profile, payoff_vector, random_profile, uniform_profile
from .lp import LinearProgram, LpError, solve_lp
from .regret import RegretReport, df_delta_i, regret_report

TARGET_TOL = 1e-9
GAIN_TOL = 1e-7


class StationaryPointError(RuntimeError):
    """A delta-stationary point with regret above ``0.5 + delta`` was met.

    Such points cannot exist mathematically, so this signals a numerical
    failure in the direction LP.
    """


def step_size(delta: float) -> float:
    return delta / (delta + 2.0)


def default_max_iterations(delta: float) -> int:
    # round first so a value a few ulps above an integer does not add an iteration
    return math.ceil(round(((delta + 2.0) / delta) ** 2, 9)) + 2


def _check_delta(delta: float):
    if not (0.0 < delta <= 0.5):
        raise ValueError(f"delta must lie in (0, 0.5], got {delta!r}")


@dataclass
class DescentConfig:
    delta: float = 0.1
    start: str | Sequence = "uniform"
    seed: int | None = None
    max_iterations: int | None = None
    diagnostics: bool = False

    def __post_init__(self):
        _check_delta(self.delta)
        if self.max_iterations is None:
            self.max_iterations = default_max_iterations(self.delta)

    @property
    def epsilon(self) -> float:
        return step_size(self.delta)

    def initial_profile(self, game: PolymatrixGame) -> Profile:
        if isinstance(self.start, str):
            if self.start == "uniform":
                return uniform_profile(game)
            if self.start == "random":
                return random_profile(game, np.random.default_rng(self.seed))
            raise ValueError(f"unknown start {self.start!r}")
        return as_profile(game, self.start)


@dataclass(frozen=True)
class IterationTrace:
    """Diagnostics of one descent iteration.

    ``d_max_set`` maximizes the per-player derivative term over the
    max-regret players only (it equals ``w_star`` up to LP tolerance);
    ``d_all`` maximizes over every player and is the quantity the progress
    bound is stated in.  ``stationary`` is ``d_all - f_before > -delta``;
    when it is false the max regret contracts by a factor ``1 - epsilon**2``.
    """

    iteration: int
    f_before: float
    f_after: float
    w_star: float
    d_max_set: float
    d_all: float
    gain_residual: float
    stationary: bool
    max_regret_set_size: int

    def to_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "f_before": self.f_before,
            "f_after": self.f_after,
            "w_star": self.w_star,
            "d_max_set": self.d_max_set,
            "d_all": self.d_all,
            "gain_residual": self.gain_residual,
            "stationary": self.stationary,
            "max_regret_set_size": self.max_regret_set_size,
        }


@dataclass
class SolveResult:
    profile: Profile
    report: RegretReport
    iterations: int
    termination: str
    delta: float
    traces: list[IterationTrace] = field(default_factory=list)

    @property
    def max_regret(self) -> float:
        return self.report.max_regret


@dataclass(frozen=True)
class LpLayout:
    """Column positions of the direction LP's variables."""

    block_starts: tuple[int, ...]
    strategy_counts: tuple[int, ...]
    slack_players: tuple[int, ...]
    slack_columns: tuple[int, ...]
    w: int

    def block(self, player: int) -> slice:
        start = self.block_starts[player]
        return slice(start, start + self.strategy_counts[player])

    def extract(self, v: np.ndarray) -> Profile:
        """Direction profile from an LP solution, clamped and renormalized."""
        out = []
        for i in range(len(self.strategy_counts)):
            xi = np.clip(v[self.block(i)], 0.0, None)
            out.append(xi / xi.sum())
        return out


def build_steepest_descent_lp(game: PolymatrixGame, x: Profile, delta: float,
                              report: RegretReport | None = None) -> tuple[LinearProgram, LpLayout]:
    """Direction LP over ``(xp, l_i for i in K, w)``; minimizes ``w``.

    For every max-regret player ``i`` and every delta-best response ``k`` of
    ``i`` at ``x``: ``pays(xp)_i[k] <= l_i``; and
    ``l_i - x_i . pays(xp)_i - xp_i . pays(x)_i + u_i(x) <= w``.
    """
    if report is None:
        report = regret_report(game, x, delta)
    counts = game.strategy_counts
    starts = tuple(int(s) for s in np.concatenate([[0], np.cumsum(counts)[:-1]]))
    nx = int(sum(counts))
    k_players = tuple(sorted(report.max_regret_set))
    slack_cols = tuple(nx + r for r in range(len(k_players)))
    w = nx + len(k_players)
    layout = LpLayout(starts, counts, k_players, slack_cols, w)
    nvar = w + 1

    ub_rows, ub_rhs = [], []
    for i, li in zip(k_players, slack_cols):
        for k in sorted(report.delta_best_responses[i]):
            row = np.zeros(nvar)
            for j, a in game.neighbors(i):
                row[layout.block(j)] += a[k]
            row[li] = -1.0
            ub_rows.append(row)
            ub_rhs.append(0.0)
    for i, li in zip(k_players, slack_cols):
        row = np.zeros(nvar)
        row[li] = 1.0
        for j, a in game.neighbors(i):
            row[layout.block(j)] -= x[i] @ a
        row[layout.block(i)] -= payoff_vector(game, x, i)
        row[w] = -1.0
        ub_rows.append(row)
        ub_rhs.append(-report.payoffs[i])

    eq_rows = np.zeros((game.player_count, nvar))
    for i in range(game.player_count):
        eq_rows[i, layout.block(i)] = 1.0

    lower = np.concatenate([np.zeros(nx), np.full(len(k_players) + 1, -np.inf)])
    upper = np.concatenate([np.ones(nx), np.full(len(k_players) + 1, np.inf)])
    objective = np.zeros(nvar)
    objective[w] = 1.0
    lp = LinearProgram(objective, np.array(ub_rows).reshape(-1, nvar), np.array(ub_rhs),
                       eq_rows, np.ones(game.player_count), lower, upper,
                       name=f"steepest-descent LP (|K|={len(k_players)}, vars={nvar})")
    return lp, layout


def steepest_descent_direction(game: PolymatrixGame, x: Profile, delta: float,
                               report: RegretReport | None = None) -> tuple[Profile, float]:
    """Solve the direction LP; return ``(xp, w_star)``."""
    lp, layout = build_steepest_descent_lp(game, x, delta, report)
    sol = solve_lp(lp)
    if not sol.ok:
        raise LpError(f"{lp.name}: solver returned {sol.status.value} after {sol.pivots} pivots")
    return layout.extract(sol.x), sol.objective


def step(x: Profile, xp: Profile, epsilon: float) -> Profile:
    return [(1.0 - epsilon) * xi + epsilon * xpi for xi, xpi in zip(x, xp)]


def gain_bound_residual(f: float, f_new: float, d: float, epsilon: float) -> float:
    """Actual change in max regret minus its guaranteed upper bound.

    Non-positive (up to rounding) on every descent iteration.
    """
    return (f_new - f) - (epsilon * (d - f) + epsilon ** 2 * (1.0 - d))


def solve(game: PolymatrixGame, config: DescentConfig | None = None) -> SolveResult:
    """Run the descent from ``config.start`` until max regret <= 0.5 + delta."""
    if config is None:
        config = DescentConfig()
    if not game.normalized:
        raise ValueError("solve requires a normalized game")
    delta, eps = config.delta, config.epsilon
    target = 0.5 + delta + TARGET_TOL
    x = config.initial_profile(game)
    report = regret_report(game, x, delta)
    traces: list[IterationTrace] = []
    it = 0
    while True:
        f = report.max_regret
        if f <= target:
            return SolveResult(x, report, it, "target-reached", delta, traces)
        if it >= config.max_iterations:
            return SolveResult(x, report, it, "max-iterations", delta, traces)
        xp, w_star = steepest_descent_direction(game, x, delta, report)
        # w* <= 0.5 always holds, so this is unreachable while f > 0.5 + delta
        if w_star - f > -delta:
            raise StationaryPointError(
                f"iteration {it}: w*={w_star!r} with f={f!r} > 0.5 + delta")
        x_new = step(x, xp, eps)
        new_report = regret_report(game, x_new, delta)
        if config.diagnostics:
            traces.append(_trace(game, it, x, xp, report, new_report, w_star, delta, eps))
        x, report = x_new, new_report
        it += 1


def _trace(game, it, x, xp, report, new_report, w_star, delta, eps) -> IterationTrace:
    f, f_new = report.max_regret, new_report.max_regret
    terms = [df_delta_i(game, x, xp, i, delta) for i in range(game.player_count)]
    d_set = max(terms[i] for i in report.max_regret_set)
    d_all = max(terms)
    return IterationTrace(
        iteration=it,
        f_before=f,
        f_after=f_new,
        w_star=w_star,
        d_max_set=d_set,
        d_all=d_all,
        gain_residual=gain_bound_residual(f, f_new, d_all, eps),
        stationary=d_all - f > -delta,
        max_regret_set_size=len(report.max_regret_set),
    )


def best_response_profile(game: PolymatrixGame, x: Profile) -> Profile:
    """Each player's lowest-index pure best response to ``x``."""
    out = []
    for i, m in enumerate(game.strategy_counts):
        e = np.zeros(m)
        e[int(np.argmax(payoff_vector(game, x, i)))] = 1.0
        out.append(e)
    return out


def stationarity_certificate(game: PolymatrixGame, x: Profile, delta: float) -> tuple[bool, float]:
    """Evaluate the half-way-to-best-response direction at ``x``.

    Returns ``(witness <= 0.5, witness)`` where ``witness`` is the max over
    max-regret players of the smoothed derivative term towards
    ``(best_response_profile(x) + x) / 2``.  Since the LP optimum can be no
    worse, any delta-stationary point has max regret at most 0.5 + delta.
    """
    report = regret_report(game, x, delta)
    xbar = best_response_profile(game, x)
    half = [(a + b) / 2.0 for a, b in zip(xbar, x)]
    witness = max(df_delta_i(game, x, half, i, delta) for i in report.max_regret_set)
    return witness <= 0.5 + GAIN_TOL, witness
