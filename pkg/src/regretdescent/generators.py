"""Seeded random polymatrix and Bayesian game instances."""

from __future__ import annotations

import itertools

import numpy as np

from .game import Edge, PolymatrixGame

TOPOLOGIES = ("complete", "cycle", "star", "bipartite", "gnp")


def topology_edges(topology: str, n: int, rng: np.random.Generator,
                   p: float = 0.5) -> list[tuple[int, int]]:
    """Edge list ``(u, v)`` with ``u < v`` for the named graph family.

    ``star`` is centred on player 0; ``bipartite`` is complete between the
    first ``n // 2`` players and the rest.  A 2-cycle collapses to one edge.
    """
    if n < 2:
        raise ValueError(f"need at least 2 players, got {n}")
    if topology == "complete":
        return list(itertools.combinations(range(n), 2))
    if topology == "cycle":
        return sorted({tuple(sorted((i, (i + 1) % n))) for i in range(n)})
    if topology == "star":
        return [(0, j) for j in range(1, n)]
    if topology == "bipartite":
        half = n // 2
        return [(i, j) for i in range(half) for j in range(half, n)]
    if topology == "gnp":
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"gnp probability must lie in [0, 1], got {p}")
        return [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
    raise ValueError(f"unknown topology {topology!r}; choose from {', '.join(TOPOLOGIES)}")


def generate_polymatrix(topology: str, n: int, strategy_range: tuple[int, int] = (2, 2),
                        seed: int = 0, p: float = 0.5) -> PolymatrixGame:
    """Raw (unnormalized) game with i.i.d. uniform [0, 1] payoffs."""
    lo, hi = strategy_range
    if lo < 1 or hi < lo:
        raise ValueError(f"invalid strategy range {strategy_range}")
    rng = np.random.default_rng(seed)
    counts = tuple(int(m) for m in rng.integers(lo, hi + 1, size=n))
    edges = []
    for u, v in topology_edges(topology, n, rng, p):
        a_u = rng.random((counts[u], counts[v]))
        a_v = rng.random((counts[v], counts[u]))
        edges.append(Edge(u, v, a_u, a_v))
    return PolymatrixGame(counts, tuple(edges))


def generate_bayesian(m: int, n: int, k1: int, k2: int, seed: int = 0):
    """Two-player Bayesian game with a random full-support type prior."""
    from .bayesian import BayesianGame

    if min(m, n, k1, k2) < 1:
        raise ValueError("all dimensions must be at least 1")
    rng = np.random.default_rng(seed)
    # 1 - random() lies in (0, 1]: every type pair keeps positive weight
    weights = 1.0 - rng.random((m, n))
    p = weights / weights.sum()
    R = rng.random((m, n, k1, k2))
    C = rng.random((m, n, k1, k2))
    return BayesianGame(p, R, C)
