"""Two-player Bayesian games and their reduction to bipartite polymatrix games.

Row types ``i`` and column types ``j`` are drawn from a joint prior ``p``.
Type pair ``(i, j)`` plays the bimatrix game ``(R[i, j], C[i, j])``; both
matrices are ``k1 x k2`` with the row player's strategy as row index.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .game import Edge, PolymatrixGame, Profile, Violation

log = logging.getLogger(__name__)

PRIOR_TOL = 1e-9
DEGENERATE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BayesianGame:
    p: np.ndarray
    R: np.ndarray
    C: np.ndarray
    rescaled: bool = False

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        R = np.array(self.R, dtype=float)
        C = np.array(self.C, dtype=float)
        if p.ndim != 2:
            raise ValueError(f"type prior must be a matrix, got shape {p.shape}")
        if R.ndim != 4 or R.shape[:2] != p.shape:
            raise ValueError(f"R must have shape (m, n, k1, k2) with (m, n) = {p.shape}, got {R.shape}")
        if C.shape != R.shape:
            raise ValueError(f"C has shape {C.shape}, expected {R.shape}")
        for name, arr in (("p", p), ("R", R), ("C", C)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def row_types(self) -> int:
        return self.p.shape[0]

    @property
    def col_types(self) -> int:
        return self.p.shape[1]

    @property
    def row_strategies(self) -> int:
        return self.R.shape[2]

    @property
    def col_strategies(self) -> int:
        return self.R.shape[3]

    def structurally_equal(self, other: BayesianGame) -> bool:
        return (self.rescaled == other.rescaled
                and np.array_equal(self.p, other.p)
                and np.array_equal(self.R, other.R)
                and np.array_equal(self.C, other.C))


def validate_bayesian(game: BayesianGame) -> list[Violation]:
    out = []
    if np.any(game.p < 0):
        out.append(Violation("p", "negative probability"))
    if abs(game.p.sum() - 1.0) > PRIOR_TOL:
        out.append(Violation("p", f"probabilities sum to {game.p.sum()!r}"))
    if min(game.R.shape) < 1:
        out.append(Violation("dims", "every dimension must be at least 1"))
    for name, arr in (("R", game.R), ("C", game.C)):
        if not np.all(np.isfinite(arr)):
            out.append(Violation(name, "non-finite payoff"))
        elif not game.rescaled and (arr.min() < 0.0 or arr.max() > 1.0):
            out.append(Violation(name, "raw payoffs must lie in [0, 1]"))
    return out


@dataclass(frozen=True)
class TypeDistributionView:
    row_marginals: np.ndarray
    col_marginals: np.ndarray
    row_conditionals: np.ndarray  # [i, j] = P(col type j | row type i)
    col_conditionals: np.ndarray  # [j, i] = P(row type i | col type j)
    dropped_row_types: tuple[int, ...] = field(default=())
    dropped_col_types: tuple[int, ...] = field(default=())

    @property
    def row_survivors(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.row_marginals.size) if i not in self.dropped_row_types)

    @property
    def col_survivors(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.col_marginals.size) if j not in self.dropped_col_types)


def type_views(game: BayesianGame) -> TypeDistributionView:
    """Marginal and conditional type probabilities.

    Types of zero marginal probability have no conditional distribution; they
    are reported as dropped and their conditional rows are left at zero.
    """
    p = game.p
    pr = p.sum(axis=1)
    pc = p.sum(axis=0)
    dropped_r = tuple(int(i) for i in np.flatnonzero(pr <= 0.0))
    dropped_c = tuple(int(j) for j in np.flatnonzero(pc <= 0.0))
    if dropped_r or dropped_c:
        log.warning("dropping zero-probability types: row %s, column %s", dropped_r, dropped_c)
    cond_r = np.zeros_like(p)
    cond_c = np.zeros_like(p.T)
    live_r = pr > 0
    live_c = pc > 0
    cond_r[live_r] = p[live_r] / pr[live_r, None]
    cond_c[live_c] = p.T[live_c] / pc[live_c, None]
    return TypeDistributionView(pr, pc, cond_r, cond_c, dropped_r, dropped_c)


def type_payoff_extremes(weighted: np.ndarray) -> tuple[float, float]:
    """Extremes of ``sum_t weighted[t][a, b_t]`` over own strategy ``a``.

    ``weighted`` is a stack of opponent-type matrices with the owner's
    strategy on axis 1; each opponent type picks its column independently.
    """
    pmax = float(weighted.max(axis=2).sum(axis=0).max())
    pmin = float(weighted.min(axis=2).sum(axis=0).min())
    return pmax, pmin


def _rescale_block(block: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Affinely map one type's matrices so its expected payoff spans [0, 1].

    ``block[t]`` is the owner's matrix against opponent type ``t`` (owner's
    strategy on rows) and ``weights[t]`` the conditional probability of ``t``.
    """
    pmax, pmin = type_payoff_extremes(weights[:, None, None] * block)
    if pmax - pmin <= DEGENERATE_TOL * max(1.0, abs(pmax), abs(pmin)):
        return np.zeros_like(block)
    # conditional weights sum to 1, so shifting every entry by pmin moves the
    # expected payoff by exactly pmin
    return (block - pmin) / (pmax - pmin)


def rescale_bayesian(game: BayesianGame) -> BayesianGame:
    """Per-type affine rescaling so each type's expected payoffs span [0, 1]."""
    view = type_views(game)
    R = np.array(game.R)
    C = np.array(game.C)
    for i in view.row_survivors:
        R[i] = _rescale_block(game.R[i], view.row_conditionals[i])
    for j in view.col_survivors:
        # column player's own strategy is the column index of C
        block = np.transpose(game.C[:, j], (0, 2, 1))
        C[:, j] = np.transpose(_rescale_block(block, view.col_conditionals[j]), (0, 2, 1))
    return replace(game, R=R, C=C, rescaled=True)


@dataclass(frozen=True)
class TypeIndexMap:
    """Correspondence between Bayesian types and polymatrix players."""

    row_players: dict[int, int]
    col_players: dict[int, int]
    dropped_row_types: tuple[int, ...]
    dropped_col_types: tuple[int, ...]
    row_types: int
    col_types: int
    row_strategies: int
    col_strategies: int

    def to_bayesian(self, profile: Profile) -> tuple[list[np.ndarray], list[np.ndarray]]:
        """Split a polymatrix profile into per-type strategies.

        Dropped types get the uniform strategy; they carry no weight.
        """
        x = [np.full(self.row_strategies, 1.0 / self.row_strategies) for _ in range(self.row_types)]
        y = [np.full(self.col_strategies, 1.0 / self.col_strategies) for _ in range(self.col_types)]
        for i, player in self.row_players.items():
            x[i] = np.asarray(profile[player], dtype=float)
        for j, player in self.col_players.items():
            y[j] = np.asarray(profile[player], dtype=float)
        return x, y

    def to_polymatrix(self, x, y) -> Profile:
        out: list = [None] * (len(self.row_players) + len(self.col_players))
        for i, player in self.row_players.items():
            out[player] = np.asarray(x[i], dtype=float)
        for j, player in self.col_players.items():
            out[player] = np.asarray(y[j], dtype=float)
        return out

    def to_dict(self) -> dict:
        return {
            "row_types": {str(k): v for k, v in sorted(self.row_players.items())},
            "col_types": {str(k): v for k, v in sorted(self.col_players.items())},
            "dropped_row_types": list(self.dropped_row_types),
            "dropped_col_types": list(self.dropped_col_types),
        }


def reduce_to_polymatrix(game: BayesianGame) -> tuple[PolymatrixGame, TypeIndexMap]:
    """Complete bipartite polymatrix game with one player per surviving type.

    Row types come first, then column types.  Edge ``(i, j)`` carries
    ``P(j | i) * R[i, j]`` for the row type and ``(P(i | j) * C[i, j]).T``
    for the column type.  The input must already be rescaled, which makes
    the result normalized as is.
    """
    if not game.rescaled:
        raise ValueError("reduce_to_polymatrix expects a rescaled game; call rescale_bayesian first")
    view = type_views(game)
    rows, cols = view.row_survivors, view.col_survivors
    row_players = {i: k for k, i in enumerate(rows)}
    col_players = {j: len(rows) + k for k, j in enumerate(cols)}
    counts = (game.row_strategies,) * len(rows) + (game.col_strategies,) * len(cols)
    edges = []
    for i in rows:
        for j in cols:
            edges.append(Edge(
                row_players[i], col_players[j],
                view.row_conditionals[i, j] * game.R[i, j],
                (view.col_conditionals[j, i] * game.C[i, j]).T,
            ))
    index = TypeIndexMap(row_players, col_players, view.dropped_row_types, view.dropped_col_types,
                         game.row_types, game.col_types, game.row_strategies, game.col_strategies)
    return PolymatrixGame(counts, tuple(edges), normalized=True), index


def row_payoff_vector(game: BayesianGame, view: TypeDistributionView, i: int, y) -> np.ndarray:
    """Expected payoff of each pure strategy of row type ``i`` against ``y``."""
    out = np.zeros(game.row_strategies)
    for j in range(game.col_types):
        out += view.row_conditionals[i, j] * (game.R[i, j] @ y[j])
    return out


def col_payoff_vector(game: BayesianGame, view: TypeDistributionView, j: int, x) -> np.ndarray:
    out = np.zeros(game.col_strategies)
    for i in range(game.row_types):
        out += view.col_conditionals[j, i] * (game.C[i, j].T @ x[i])
    return out


def bayesian_regret(game: BayesianGame, x, y) -> tuple[np.ndarray, np.ndarray]:
    """Per-type regrets ``(row_regrets, col_regrets)``; dropped types get 0."""
    view = type_views(game)
    row = np.zeros(game.row_types)
    col = np.zeros(game.col_types)
    for i in view.row_survivors:
        v = row_payoff_vector(game, view, i, y)
        row[i] = v.max() - np.asarray(x[i]) @ v
    for j in view.col_survivors:
        v = col_payoff_vector(game, view, j, x)
        col[j] = v.max() - np.asarray(y[j]) @ v
    return row, col
