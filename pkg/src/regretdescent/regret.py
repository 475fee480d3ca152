"""Best responses, regrets, and the delta-smoothed directional derivative."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import PolymatrixGame, Profile, payoff_vector

TIE_TOL = 1e-9
MAX_SET_TOL = 1e-9


@dataclass(frozen=True)
class RegretReport:
    payoffs: tuple[float, ...]
    best_response_payoffs: tuple[float, ...]
    regrets: tuple[float, ...]
    max_regret_set: frozenset[int]
    best_responses: tuple[frozenset[int], ...]
    delta_best_responses: tuple[frozenset[int], ...]
    delta: float

    @property
    def max_regret(self) -> float:
        return max(self.regrets)

    @property
    def worst_player(self) -> int:
        return int(np.argmax(self.regrets))


def _suppmax(values: np.ndarray, slack: float) -> frozenset[int]:
    threshold = values.max() - slack - TIE_TOL
    return frozenset(int(k) for k in np.flatnonzero(values >= threshold))


def best_response_payoff(game: PolymatrixGame, profile: Profile, player: int) -> float:
    return float(payoff_vector(game, profile, player).max())


def pure_best_responses(game: PolymatrixGame, profile: Profile, player: int) -> frozenset[int]:
    return _suppmax(payoff_vector(game, profile, player), 0.0)


def delta_best_responses(game: PolymatrixGame, profile: Profile, player: int,
                         delta: float) -> frozenset[int]:
    """Pure strategies within ``delta`` of the best-response payoff."""
    return _suppmax(payoff_vector(game, profile, player), delta)


def regret_report(game: PolymatrixGame, profile: Profile, delta: float = 0.0) -> RegretReport:
    pays = [payoff_vector(game, profile, i) for i in range(game.player_count)]
    u = [float(profile[i] @ p) for i, p in enumerate(pays)]
    brp = [float(p.max()) for p in pays]
    f = [b - a for a, b in zip(u, brp)]
    fmax = max(f)
    return RegretReport(
        payoffs=tuple(u),
        best_response_payoffs=tuple(brp),
        regrets=tuple(f),
        max_regret_set=frozenset(i for i, fi in enumerate(f) if fi >= fmax - MAX_SET_TOL),
        best_responses=tuple(_suppmax(p, 0.0) for p in pays),
        delta_best_responses=tuple(_suppmax(p, delta) for p in pays),
        delta=delta,
    )


def max_regret(game: PolymatrixGame, profile: Profile) -> float:
    return regret_report(game, profile).max_regret


def df_delta_i(game: PolymatrixGame, x: Profile, xp: Profile, player: int,
               delta: float) -> float:
    """Smoothed directional derivative term of one player.

    The delta-best-response set is taken at ``x`` and evaluated against
    ``xp``.  With ``delta = 0`` this is the unsmoothed term.
    """
    pays_x = payoff_vector(game, x, player)
    pays_xp = payoff_vector(game, xp, player)
    support = sorted(_suppmax(pays_x, delta))
    return float(pays_xp[support].max() - x[player] @ pays_xp
                 - xp[player] @ pays_x + x[player] @ pays_x)


def df_delta(game: PolymatrixGame, x: Profile, xp: Profile, delta: float,
             report: RegretReport | None = None) -> float:
    """Max of :func:`df_delta_i` over the max-regret players, minus ``f(x)``."""
    if report is None:
        report = regret_report(game, x, delta)
    best = max(df_delta_i(game, x, xp, i, delta) for i in report.max_regret_set)
    return best - report.max_regret
