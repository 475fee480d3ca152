"""Independent checks of equilibrium claims.

Nothing here goes through :mod:`regretdescent.regret`: regrets are rebuilt
from the edge list with plain Python arithmetic and compensated summation,
neighbours visited in ascending index order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .bayesian import BayesianGame, bayesian_regret
from .game import PolymatrixGame

VERIFY_TOL = 1e-7
MAX_GRID_POINTS = 10 ** 7


class GridTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    passed: bool
    max_regret: float
    worst: object  # player index, or ("row" | "col", type) for Bayesian games


def _owned_matrices(game: PolymatrixGame):
    owned = [[] for _ in range(game.player_count)]
    for edge in game.edges:
        owned[edge.u].append((edge.v, edge.payoffs_u.tolist()))
        owned[edge.v].append((edge.u, edge.payoffs_v.tolist()))
    for lst in owned:
        lst.sort(key=lambda t: t[0])
    return owned


def _regrets(owned, profile) -> list[float]:
    out = []
    for i, mats in enumerate(owned):
        xi = profile[i]
        pays = []
        for k in range(len(xi)):
            terms = []
            for j, a in mats:
                row = a[k]
                terms.extend(row[q] * profile[j][q] for q in range(len(row)))
            pays.append(math.fsum(terms))
        u = math.fsum(xi[k] * pays[k] for k in range(len(xi)))
        out.append(max(pays) - u)
    return out


def regrets(game: PolymatrixGame, profile) -> list[float]:
    """Per-player regrets, recomputed from scratch."""
    prof = [[float(v) for v in x] for x in profile]
    return _regrets(_owned_matrices(game), prof)


def verify_epsilon_ne(game: PolymatrixGame, profile, epsilon: float) -> Verdict:
    r = regrets(game, profile)
    worst = max(range(len(r)), key=lambda i: (r[i], -i))
    return Verdict(r[worst] <= epsilon + VERIFY_TOL, r[worst], worst)


def _simplex_grid(m: int, steps: int) -> list[tuple[float, ...]]:
    """All points of the m-simplex with coordinates in multiples of 1/steps."""
    pts = []
    for bars in itertools.combinations(range(steps + m - 1), m - 1):
        prev, parts = -1, []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(steps + m - 1 - prev - 1)
        pts.append(tuple(float(Fraction(c, steps)) for c in parts))
    return sorted(pts)


def grid_size(game: PolymatrixGame, grid_step: float) -> int:
    steps = round(1.0 / grid_step)
    return math.prod(math.comb(steps + m - 1, m - 1) for m in game.strategy_counts)


def brute_force_min_regret(game: PolymatrixGame, grid_step: float):
    """Minimize max regret over a uniform probability grid.

    Returns ``(profile, f)`` for the lexicographically first minimizer.
    """
    steps = round(1.0 / grid_step)
    if steps < 1 or abs(steps * grid_step - 1.0) > 1e-9:
        raise ValueError(f"grid step must divide 1, got {grid_step!r}")
    size = grid_size(game, grid_step)
    if size > MAX_GRID_POINTS:
        raise GridTooLargeError(
            f"grid with step {grid_step} has {size} points, limit is {MAX_GRID_POINTS}")
    owned = _owned_matrices(game)
    grids = [_simplex_grid(m, steps) for m in game.strategy_counts]
    best, best_f = None, math.inf
    for point in itertools.product(*grids):
        f = max(_regrets(owned, point))
        if f < best_f:
            best, best_f = point, f
    return [list(x) for x in best], best_f


def verify_bayesian(game: BayesianGame, x, y, epsilon: float) -> Verdict:
    row, col = bayesian_regret(game, x, y)
    cands = [(float(r), ("row", i)) for i, r in enumerate(row)]
    cands += [(float(c), ("col", j)) for j, c in enumerate(col)]
    worst_val, worst = max(cands, key=lambda t: t[0])
    return Verdict(worst_val <= epsilon + VERIFY_TOL, worst_val, worst)
