"""Epsilon-Nash search by intersecting the two best-response maps on a grid."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .best_response import br_attacker, br_defender, grid_points
from .model import GameError, GameParams, validate
from .payoff import payoff_grid


class EmptyGrid(GameError):
    pass


@dataclass(frozen=True)
class EquilibriumCandidate:
    t_A: float
    t_D: float
    dev_gap_D: float
    dev_gap_A: float
    u_D: float
    u_A: float

    @property
    def max_gap(self) -> float:
        return max(self.dev_gap_D, self.dev_gap_A)

    def to_dict(self) -> dict:
        return asdict(self)


def deviation_gaps(params: GameParams, t_D: float, t_A: float,
                   grid: np.ndarray) -> tuple[float, float, float, float]:
    """Unilateral improvement available to each player over ``grid``.

    Returns ``(dev_gap_D, dev_gap_A, u_D, u_A)``. The profile itself is
    included in both deviation sets, so the gaps are never negative.
    """
    u_D, u_A = payoff_grid(params, t_D, t_A)
    u_D, u_A = float(u_D), float(u_A)
    best_D = max(float(np.max(payoff_grid(params, grid, t_A)[0])), u_D)
    best_A = max(float(np.max(payoff_grid(params, t_D, grid)[1])), u_A)
    return best_D - u_D, best_A - u_A, u_D, u_A


def best_response_curves(params: GameParams, grid: np.ndarray):
    """``(BR_D(t_A), BR_A(t_D))`` evaluated at every grid point."""
    br_d = np.array([br_defender(params, float(t)).best.value for t in grid])
    br_a = np.array([br_attacker(params, float(t)).best.value for t in grid])
    return br_d, br_a


def find_equilibria(params: GameParams, t_max: float | None = None,
                    grid_step: float = 0.1,
                    eps: float = 1e-3) -> list[EquilibriumCandidate]:
    """Grid pairs where both best responses meet, filtered by deviation gap.

    A pair ``(t_A, t_D)`` is kept when ``BR_D(t_A)`` lies within one grid step
    of ``t_D``, ``BR_A(t_D)`` within one step of ``t_A``, and neither player
    gains more than ``eps`` by moving anywhere else on the grid. Results are
    sorted by the larger of the two gaps, then by ``(t_A, t_D)``.
    """
    validate(params)
    s = params.s
    if t_max is None:
        t_max = 10 * s
    if grid_step <= 0 or not math.isfinite(grid_step):
        raise ValueError("grid_step must be a positive finite number")
    if eps < 0:
        raise ValueError("eps must be >= 0")
    if t_max - s < grid_step:
        raise EmptyGrid(f"grid [{s:g}, {t_max:g}] holds fewer than two points "
                        f"at step {grid_step:g}")
    grid = grid_points(s, t_max, grid_step)
    br_d, br_a = best_response_curves(params, grid)
    tol = grid_step * (1 + 1e-9)

    out = []
    for i, t_A in enumerate(grid):
        for j in np.flatnonzero(np.abs(br_d[i] - grid) <= tol):
            if abs(br_a[j] - t_A) > tol:
                continue
            t_D = float(grid[j])
            gap_D, gap_A, u_D, u_A = deviation_gaps(params, t_D, float(t_A),
                                                   grid)
            if gap_D <= eps and gap_A <= eps:
                out.append(EquilibriumCandidate(float(t_A), t_D, gap_D, gap_A,
                                                u_D, u_A))
    out.sort(key=lambda c: (c.max_gap, c.t_A, c.t_D))
    return out
