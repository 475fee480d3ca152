"""Dense two-phase primal simplex for small linear programs.

Problems are stated as::

    minimize    c @ v
    subject to  A_ub @ v <= b_ub
                A_eq @ v == b_eq
                lower <= v <= upper      (bounds may be infinite)

Pricing is Dantzig's rule with lowest-index tie-breaking.  After a run of
degenerate pivots the solver switches permanently to Bland's rule, which
cannot cycle.  Every choice is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

FEASIBILITY_TOL = 1e-7
PIVOT_TOL = 1e-10
OPTIMALITY_TOL = 1e-10
DEGENERATE_STREAK = 50


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration-limit"


class LpError(RuntimeError):
    """Raised by callers when an LP they expect to solve does not."""


@dataclass
class LinearProgram:
    objective: np.ndarray
    A_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None
    name: str = "lp"

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float).reshape(-1)
        n = self.objective.size
        self.A_ub = _rows(self.A_ub, n)
        self.b_ub = _vec(self.b_ub, self.A_ub.shape[0])
        self.A_eq = _rows(self.A_eq, n)
        self.b_eq = _vec(self.b_eq, self.A_eq.shape[0])
        self.lower = np.zeros(n) if self.lower is None else np.asarray(self.lower, dtype=float)
        self.upper = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float)
        if self.lower.shape != (n,) or self.upper.shape != (n,):
            raise ValueError(f"{self.name}: bounds must have length {n}")
        if np.any(self.lower > self.upper):
            raise ValueError(f"{self.name}: lower bound exceeds upper bound")
        if np.any(self.lower == np.inf) or np.any(self.upper == -np.inf):
            raise ValueError(f"{self.name}: empty variable domain")

    @property
    def variable_count(self) -> int:
        return self.objective.size

    def violation(self, v: np.ndarray) -> float:
        """Largest constraint or bound violation at ``v`` (0 when feasible)."""
        worst = 0.0
        if self.A_ub.shape[0]:
            worst = max(worst, float(np.max(self.A_ub @ v - self.b_ub)))
        if self.A_eq.shape[0]:
            worst = max(worst, float(np.max(np.abs(self.A_eq @ v - self.b_eq))))
        worst = max(worst, float(np.max(self.lower - v, initial=0.0)))
        worst = max(worst, float(np.max(v - self.upper, initial=0.0)))
        return worst


def _rows(a, n):
    if a is None:
        return np.zeros((0, n))
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError(f"constraint rows must have {n} columns, got shape {a.shape}")
    return a


def _vec(b, k):
    if b is None:
        return np.zeros(k)
    b = np.asarray(b, dtype=float).reshape(-1)
    if b.size != k:
        raise ValueError(f"expected {k} right-hand sides, got {b.size}")
    return b


@dataclass
class LpSolution:
    status: LpStatus
    x: np.ndarray | None
    objective: float
    pivots: int = 0
    pivot_log: list[tuple[int, int]] = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class _Tableau:
    """Canonical-form tableau; the last row holds reduced costs."""

    def __init__(self, body: np.ndarray, basis: list[int], limit: int):
        self.T = body
        self.basis = basis
        self.limit = limit
        self.pivots = 0
        self.log: list[tuple[int, int]] = []
        self.bland = False
        self.streak = 0

    def set_cost(self, cost: np.ndarray):
        m = len(self.basis)
        self.T[m, :-1] = cost
        self.T[m, -1] = 0.0
        for r, b in enumerate(self.basis):
            if cost[b] != 0.0:
                self.T[m] -= cost[b] * self.T[r]

    def pivot(self, r: int, j: int):
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[:, j] = 0.0
        T[r, j] = 1.0
        self.basis[r] = j
        self.pivots += 1
        self.log.append((r, j))

    def run(self, allowed: np.ndarray) -> LpStatus:
        m = len(self.basis)
        T = self.T
        while True:
            d = T[m, :-1]
            candidates = np.flatnonzero(allowed & (d < -OPTIMALITY_TOL))
            if candidates.size == 0:
                return LpStatus.OPTIMAL
            if self.pivots >= self.limit:
                return LpStatus.ITERATION_LIMIT
            if self.bland:
                j = int(candidates[0])
            else:
                # argmin returns the lowest index among exact ties
                j = int(candidates[np.argmin(d[candidates])])
            col = T[:m, j]
            rows = np.flatnonzero(col > PIVOT_TOL)
            if rows.size == 0:
                return LpStatus.UNBOUNDED
            ratios = T[rows, -1] / col[rows]
            ratios = np.maximum(ratios, 0.0)
            best = ratios.min()
            tied = rows[ratios <= best + 1e-12 * max(1.0, best)]
            r = int(min(tied, key=lambda row: self.basis[row]))
            if best <= 1e-12:
                self.streak += 1
                if self.streak > DEGENERATE_STREAK:
                    self.bland = True
            else:
                self.streak = 0
            self.pivot(r, j)


def solve_lp(lp: LinearProgram, max_pivots: int | None = None) -> LpSolution:
    """Solve ``lp``; the pivot budget defaults to 50 x (rows + columns)."""
    n = lp.variable_count
    lo, hi = lp.lower, lp.upper

    # v = offset + M @ y with y >= 0
    cols = []
    offset = np.zeros(n)
    extra_ub_rows = []
    for k in range(n):
        if np.isfinite(lo[k]):
            offset[k] = lo[k]
            e = np.zeros(n)
            e[k] = 1.0
            cols.append(e)
            if np.isfinite(hi[k]):
                extra_ub_rows.append((len(cols) - 1, hi[k] - lo[k]))
        elif np.isfinite(hi[k]):
            offset[k] = hi[k]
            e = np.zeros(n)
            e[k] = -1.0
            cols.append(e)
        else:
            e = np.zeros(n)
            e[k] = 1.0
            cols.append(e)
            cols.append(-e)
    M = np.array(cols).T if cols else np.zeros((n, 0))
    ny = M.shape[1]

    A_ub = lp.A_ub @ M
    b_ub = lp.b_ub - lp.A_ub @ offset
    if extra_ub_rows:
        extra = np.zeros((len(extra_ub_rows), ny))
        for r, (c, bound) in enumerate(extra_ub_rows):
            extra[r, c] = 1.0
        A_ub = np.vstack([A_ub, extra])
        b_ub = np.concatenate([b_ub, [b for _, b in extra_ub_rows]])
    A_eq = lp.A_eq @ M
    b_eq = lp.b_eq - lp.A_eq @ offset
    cost_y = M.T @ lp.objective

    m_ub, m_eq = A_ub.shape[0], A_eq.shape[0]
    m = m_ub + m_eq
    n_slack = m_ub
    neg_ub = b_ub < 0
    n_art = int(neg_ub.sum()) + m_eq
    ncols = ny + n_slack + n_art
    T = np.zeros((m + 1, ncols + 1))
    basis = [0] * m
    art = ny + n_slack
    for r in range(m_ub):
        sign = -1.0 if neg_ub[r] else 1.0
        T[r, :ny] = sign * A_ub[r]
        T[r, ny + r] = sign
        T[r, -1] = sign * b_ub[r]
        if neg_ub[r]:
            T[r, art] = 1.0
            basis[r] = art
            art += 1
        else:
            basis[r] = ny + r
    for q in range(m_eq):
        r = m_ub + q
        sign = -1.0 if b_eq[q] < 0 else 1.0
        T[r, :ny] = sign * A_eq[q]
        T[r, -1] = sign * b_eq[q]
        T[r, art] = 1.0
        basis[r] = art
        art += 1

    limit = 50 * (m + ncols) if max_pivots is None else max_pivots
    tab = _Tableau(T, basis, limit)
    is_art = np.zeros(ncols, dtype=bool)
    is_art[ny + n_slack:] = True

    if n_art:
        tab.set_cost(is_art.astype(float))
        status = tab.run(np.ones(ncols, dtype=bool))
        if status is LpStatus.ITERATION_LIMIT:
            return LpSolution(status, None, float("nan"), tab.pivots, tab.log)
        if -tab.T[m, -1] > FEASIBILITY_TOL:
            return LpSolution(LpStatus.INFEASIBLE, None, float("nan"), tab.pivots, tab.log)
        # drive remaining artificials out of the basis; drop redundant rows
        r = 0
        while r < len(tab.basis):
            if is_art[tab.basis[r]]:
                row = tab.T[r, :ncols]
                nz = np.flatnonzero(~is_art & (np.abs(row) > PIVOT_TOL))
                if nz.size:
                    tab.pivot(r, int(nz[0]))
                else:
                    tab.T = np.delete(tab.T, r, axis=0)
                    del tab.basis[r]
                    continue
            r += 1
        m = len(tab.basis)

    cost = np.zeros(ncols)
    cost[:ny] = cost_y
    tab.set_cost(cost)
    status = tab.run(~is_art)
    if status is not LpStatus.OPTIMAL:
        return LpSolution(status, None, float("nan"), tab.pivots, tab.log)

    y = np.zeros(ncols)
    for r, b in enumerate(tab.basis):
        y[b] = tab.T[r, -1]
    v = offset + M @ y[:ny]
    return LpSolution(LpStatus.OPTIMAL, v, float(lp.objective @ v), tab.pivots, tab.log)
