"""Closed-form ownership fraction, reset interval and payoffs."""

from __future__ import annotations

import numpy as np

from .model import (
    CaseRegion,
    GameError,
    GameParams,
    PayoffProfile,
    StrategyPair,
    region_of,
    validate,
)


class BoundaryBelowFloor(GameError):
    pass


# The group formulas are plain arithmetic so they accept floats or arrays.

def case1_tau_delta(p, d, r, t_D, t_A):
    tau = (t_A - t_D / 2 - d - r) / t_A
    return tau, t_A * 1.0


def case23_tau_delta(p, d, r, t_D, t_A):
    s = p + d + r
    num = (-t_A ** 2 - t_D ** 2 + 4 * t_A * t_D + 2 * p * t_A
           - 2 * t_D * (d + r) + s * (d + r - p))
    tau = num / (4 * t_A * t_D)
    delta = 2 * t_A - ((t_A - s) / t_D) * t_A
    return tau, delta


def case45_tau_delta(p, d, r, t_D, t_A):
    s = p + d + r
    num = (t_A ** 2 + t_D ** 2 + 2 * p * t_A
           - 2 * t_D * (d + r) + s * (d + r - p))
    tau = num / (4 * t_A * t_D)
    delta = 2 * t_D - ((t_D - s) / t_A) * t_D
    return tau, delta


def case6_tau_delta(p, d, r, t_D, t_A):
    tau = (t_A + 2 * p) / (2 * t_D)
    return tau, t_D * 1.0


GROUP_FORMULAS = {
    CaseRegion.CASE1: case1_tau_delta,
    CaseRegion.CASE23: case23_tau_delta,
    CaseRegion.CASE45: case45_tau_delta,
    CaseRegion.CASE6: case6_tau_delta,
}


def compute_tau_delta(params: GameParams, pair: StrategyPair):
    """Return ``(tau_D, delta_D, region)`` for a valid strategy pair."""
    validate(params, pair)
    region = region_of(params.s, pair.t_D, pair.t_A)
    tau, delta = GROUP_FORMULAS[region](
        params.p, params.d, params.r, float(pair.t_D), float(pair.t_A))
    return float(tau), float(delta), region


def payoffs_from(params: GameParams, tau, delta, t_D, t_A):
    u_D = tau - params.c_D / delta - params.c_k / t_D
    u_A = (1 - tau) - params.c_A / t_A
    return u_D, u_A


def compute_payoffs(params: GameParams, pair: StrategyPair) -> PayoffProfile:
    tau, delta, region = compute_tau_delta(params, pair)
    u_D, u_A = payoffs_from(params, tau, delta, pair.t_D, pair.t_A)
    return PayoffProfile(tau_D=tau, delta_D=delta, u_D=float(u_D),
                         u_A=float(u_A), region=region)


def tau_delta_grid(params: GameParams, t_D, t_A):
    """Vectorised ``(tau, delta)`` over broadcastable period arrays.

    No validation is done here; callers keep every period at or above
    ``p + d + r``.
    """
    t_D, t_A = np.broadcast_arrays(np.asarray(t_D, dtype=float),
                                   np.asarray(t_A, dtype=float))
    p, d, r, s = params.p, params.d, params.r, params.s
    conds = [t_D < t_A - s, t_D < t_A, t_D < t_A + s]
    pieces = [f(p, d, r, t_D, t_A) for f in (
        case1_tau_delta, case23_tau_delta, case45_tau_delta, case6_tau_delta)]
    tau = np.select(conds, [pc[0] for pc in pieces[:3]], pieces[3][0])
    delta = np.select(conds, [pc[1] for pc in pieces[:3]], pieces[3][1])
    return tau, delta


def payoff_grid(params: GameParams, t_D, t_A):
    """Vectorised ``(u_D, u_A)``; same preconditions as :func:`tau_delta_grid`."""
    tau, delta = tau_delta_grid(params, t_D, t_A)
    return payoffs_from(params, tau, delta, np.asarray(t_D, dtype=float),
                        np.asarray(t_A, dtype=float))


_BOUNDARIES = {
    "A-s": (CaseRegion.CASE1, CaseRegion.CASE23, -1),
    "A": (CaseRegion.CASE23, CaseRegion.CASE45, 0),
    "A+s": (CaseRegion.CASE45, CaseRegion.CASE6, 1),
}


def boundary_gap(params: GameParams, t_A: float, boundary: str):
    """Absolute ``(dtau, ddelta)`` between the two groups meeting at a boundary.

    ``boundary`` is one of ``"A-s"``, ``"A"`` or ``"A+s"``, naming the
    defender period ``t_A - s``, ``t_A`` or ``t_A + s``.
    """
    try:
        left, right, offset = _BOUNDARIES[boundary]
    except KeyError:
        raise ValueError(f"unknown boundary {boundary!r}") from None
    validate(params)
    s = params.s
    if t_A < s:
        raise BoundaryBelowFloor(f"t_A={t_A:g} is below p+d+r={s:g}")
    t_D = t_A + offset * s
    if t_D < s:
        raise BoundaryBelowFloor(
            f"boundary {boundary} at t_D={t_D:g} is below p+d+r={s:g}")
    args = (params.p, params.d, params.r, t_D, t_A)
    tau_l, delta_l = GROUP_FORMULAS[left](*args)
    tau_r, delta_r = GROUP_FORMULAS[right](*args)
    return abs(tau_l - tau_r), abs(delta_l - delta_r)
