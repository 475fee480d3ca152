"""Polymatrix games: structure, validation, payoff normalization and payoffs.

A polymatrix game lives on an undirected graph.  Every edge ``{u, v}`` holds
a bimatrix game: ``payoffs_u`` (``m_u x m_v``) pays player ``u`` and
``payoffs_v`` (``m_v x m_u``) pays player ``v``.  Row index is always the
owner's own strategy.  A player's payoff is the sum over its incident edges,
all played with one shared mixed strategy.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

NORMALIZED_TOL = 1e-9
PROBABILITY_TOL = 1e-9
CLAMP_TOL = 1e-12
# pmax - pmin at or below this (relative to magnitude) marks a constant-payoff player
DEGENERATE_TOL = 1e-12

Profile = list  # list[np.ndarray], one distribution per player


@dataclass(frozen=True, eq=False)
class Edge:
    u: int
    v: int
    payoffs_u: np.ndarray
    payoffs_v: np.ndarray

    def __post_init__(self):
        for name in ("payoffs_u", "payoffs_v"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def matrix_for(self, player: int) -> np.ndarray:
        """The payoff matrix owned by ``player`` on this edge."""
        return self.payoffs_u if player == self.u else self.payoffs_v


@dataclass(frozen=True, eq=False)
class PolymatrixGame:
    strategy_counts: tuple[int, ...]
    edges: tuple[Edge, ...] = ()
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "strategy_counts", tuple(int(m) for m in self.strategy_counts))
        object.__setattr__(self, "edges", tuple(self.edges))

    @property
    def player_count(self) -> int:
        return len(self.strategy_counts)

    @cached_property
    def _adjacency(self) -> list[list[tuple[int, np.ndarray]]]:
        adj: list[list[tuple[int, np.ndarray]]] = [[] for _ in range(self.player_count)]
        for edge in self.edges:
            adj[edge.u].append((edge.v, edge.payoffs_u))
            adj[edge.v].append((edge.u, edge.payoffs_v))
        for entries in adj:
            entries.sort(key=lambda item: item[0])
        return adj

    def neighbors(self, player: int) -> list[tuple[int, np.ndarray]]:
        """``(j, A_ij)`` pairs for every neighbour ``j``, ascending in ``j``."""
        return self._adjacency[player]

    def degree(self, player: int) -> int:
        return len(self._adjacency[player])

    def structurally_equal(self, other: PolymatrixGame) -> bool:
        if (self.strategy_counts != other.strategy_counts
                or self.normalized != other.normalized
                or len(self.edges) != len(other.edges)):
            return False
        for a, b in zip(self.edges, other.edges):
            if (a.u, a.v) != (b.u, b.v):
                return False
            if not (np.array_equal(a.payoffs_u, b.payoffs_u)
                    and np.array_equal(a.payoffs_v, b.payoffs_v)):
                return False
        return True


class Violation(NamedTuple):
    where: str
    rule: str

    def __str__(self):
        return f"{self.where}: {self.rule}"


@dataclass(frozen=True)
class NormalizationRecord:
    """Per-player affine maps applied by :func:`normalize`.

    A raw payoff ``u`` of player ``i`` maps to ``scale[i] * (u - pmin[i])``.
    Degenerate players carry ``scale = 0``.
    """

    pmax: tuple[float, ...]
    pmin: tuple[float, ...]
    scale: tuple[float, ...]
    shift: tuple[float, ...]
    degrees: tuple[int, ...]
    degenerate: tuple[bool, ...] = field(default=())

    def to_raw(self, player: int, normalized_payoff: float) -> float:
        """Back-convert a normalized total payoff of a non-degenerate player."""
        if self.degenerate[player]:
            return self.pmin[player]
        return normalized_payoff / self.scale[player] + self.pmin[player]


def validate(game: PolymatrixGame) -> list[Violation]:
    """Return every broken structural invariant; an empty list means valid."""
    out: list[Violation] = []
    n = game.player_count
    if n < 1:
        out.append(Violation("game", "player count must be positive"))
    for i, m in enumerate(game.strategy_counts):
        if m < 1:
            out.append(Violation(f"player {i}", "strategy count must be positive"))
    seen: set[frozenset[int]] = set()
    for k, edge in enumerate(game.edges):
        where = f"edge {k} {{{edge.u},{edge.v}}}"
        if edge.u == edge.v:
            out.append(Violation(where, "self-loop"))
            continue
        if not (0 <= edge.u < n and 0 <= edge.v < n):
            out.append(Violation(where, "endpoint out of range"))
            continue
        key = frozenset((edge.u, edge.v))
        if key in seen:
            out.append(Violation(where, "duplicate edge"))
        seen.add(key)
        mu, mv = game.strategy_counts[edge.u], game.strategy_counts[edge.v]
        if edge.payoffs_u.shape != (mu, mv):
            out.append(Violation(
                where, f"shape mismatch: payoffs_u is {edge.payoffs_u.shape}, expected {(mu, mv)}"))
        if edge.payoffs_v.shape != (mv, mu):
            out.append(Violation(
                where, f"shape mismatch: payoffs_v is {edge.payoffs_v.shape}, expected {(mv, mu)}"))
        for name, arr in (("payoffs_u", edge.payoffs_u), ("payoffs_v", edge.payoffs_v)):
            if arr.size and not np.all(np.isfinite(arr)):
                out.append(Violation(where, f"non-finite entry in {name}"))
    if out or not game.normalized:
        return out
    for i in range(n):
        pmax, pmin = payoff_extremes(game, i)
        ok_range = abs(pmax - 1.0) <= NORMALIZED_TOL and abs(pmin) <= NORMALIZED_TOL
        ok_zero = abs(pmax) <= NORMALIZED_TOL and abs(pmin) <= NORMALIZED_TOL
        if not (ok_range or ok_zero):
            out.append(Violation(
                f"player {i}", f"not normalized: payoff range [{pmin!r}, {pmax!r}]"))
    return out


def payoff_extremes(game: PolymatrixGame, player: int) -> tuple[float, float]:
    """Best and worst pure-profile payoff of ``player``.

    Neighbours choose independently, so the extremes decompose into per-edge
    row maxima (minima) summed and then maximized (minimized) over own rows.
    """
    nbrs = game.neighbors(player)
    if not nbrs:
        return 0.0, 0.0
    row_max = sum(a.max(axis=1) for _, a in nbrs)
    row_min = sum(a.min(axis=1) for _, a in nbrs)
    return float(np.max(row_max)), float(np.min(row_min))


def _is_degenerate(pmax: float, pmin: float) -> bool:
    return pmax - pmin <= DEGENERATE_TOL * max(1.0, abs(pmax), abs(pmin))


def normalize(game: PolymatrixGame) -> tuple[PolymatrixGame, NormalizationRecord]:
    """Rescale every player's payoffs so their pure-profile range is [0, 1].

    Each entry ``z`` of every matrix owned by player ``i`` becomes
    ``(z - pmin_i / deg_i) / (pmax_i - pmin_i)``; the shift is spread evenly
    over the incident edges so that the total minimum lands on 0.
    Constant-payoff (and isolated) players get all-zero matrices.
    """
    n = game.player_count
    pmax, pmin, scale, shift, degrees, degenerate = [], [], [], [], [], []
    for i in range(n):
        hi, lo = payoff_extremes(game, i)
        deg = game.degree(i)
        dead = _is_degenerate(hi, lo)
        pmax.append(hi)
        pmin.append(lo)
        degrees.append(deg)
        degenerate.append(dead)
        scale.append(0.0 if dead else 1.0 / (hi - lo))
        shift.append(lo / deg if deg else 0.0)

    def transform(owner: int, mat: np.ndarray) -> np.ndarray:
        if degenerate[owner]:
            return np.zeros_like(mat)
        return (mat - shift[owner]) / (pmax[owner] - pmin[owner])

    edges = tuple(
        Edge(e.u, e.v, transform(e.u, e.payoffs_u), transform(e.v, e.payoffs_v))
        for e in game.edges
    )
    record = NormalizationRecord(
        tuple(pmax), tuple(pmin), tuple(scale), tuple(shift), tuple(degrees), tuple(degenerate))
    return replace(game, edges=edges, normalized=True), record


def as_profile(game: PolymatrixGame, vectors: Sequence[Sequence[float]]) -> Profile:
    """Validate and ingest a profile: clamp tiny negatives, renormalize sums."""
    if len(vectors) != game.player_count:
        raise ValueError(f"profile has {len(vectors)} strategies, game has {game.player_count} players")
    out = []
    for i, (vec, m) in enumerate(zip(vectors, game.strategy_counts)):
        x = np.array(vec, dtype=float).reshape(-1)
        if x.shape != (m,):
            raise ValueError(f"player {i}: strategy has length {x.size}, expected {m}")
        if not np.all(np.isfinite(x)):
            raise ValueError(f"player {i}: non-finite probability")
        if np.any(x < -CLAMP_TOL):
            raise ValueError(f"player {i}: negative probability {x.min()!r}")
        x[x < 0] = 0.0
        total = x.sum()
        if abs(total - 1.0) > PROBABILITY_TOL:
            raise ValueError(f"player {i}: probabilities sum to {total!r}")
        out.append(x / total)
    return out


def uniform_profile(game: PolymatrixGame) -> Profile:
    return [np.full(m, 1.0 / m) for m in game.strategy_counts]


def random_profile(game: PolymatrixGame, rng: np.random.Generator) -> Profile:
    """Uniform draw from the product of simplices."""
    return [rng.dirichlet(np.ones(m)) for m in game.strategy_counts]


def payoff_vector(game: PolymatrixGame, profile: Profile, player: int) -> np.ndarray:
    """Payoff of each pure strategy of ``player`` against ``profile``."""
    out = np.zeros(game.strategy_counts[player])
    for j, a in game.neighbors(player):
        out += a @ profile[j]
    return out


def payoff(game: PolymatrixGame, profile: Profile, player: int) -> float:
    return float(profile[player] @ payoff_vector(game, profile, player))


def payoff_against(game: PolymatrixGame, alt_strategy, profile: Profile, player: int) -> float:
    """Payoff of ``alt_strategy`` against the others in ``profile``.

    ``alt_strategy`` may be any vector, e.g. a difference of two strategies;
    the result is linear in it.
    """
    return float(np.asarray(alt_strategy, dtype=float) @ payoff_vector(game, profile, player))
