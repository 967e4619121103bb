"""Best responses via candidate enumeration over case-wise critical points.

Each player's candidate set holds the closed-form interior optimum of the
outer case, every root of the stationarity equation of the two middle case
groups found inside its bracket, and the case boundaries. The argmax of the
true payoff over that set is the best response.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .model import GameParams, StrategyPair, validate, validate_period
from .payoff import compute_payoffs, payoff_grid

PANELS = 64
BISECT_WIDTH = 1e-9
TANGENT_RESIDUAL = 1e-12
ROOT_RESIDUAL = 1e-8


class Player(str, enum.Enum):
    DEFENDER = "defender"
    ATTACKER = "attacker"

    def __str__(self) -> str:
        return self.value


class Source(str, enum.Enum):
    # Output labels are a fixed interface; members say which stationarity
    # condition produced the root.
    CLOSED_FORM = "ClosedForm"
    ROOT_DEFENDER_CASE23 = "RootEq15"
    ROOT_DEFENDER_CASE45 = "RootEq16"
    ROOT_ATTACKER_CASE23 = "RootEq19"
    ROOT_ATTACKER_CASE45 = "RootEq20"
    BOUNDARY = "Boundary"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Candidate:
    value: float
    source: Source
    payoff: float


@dataclass(frozen=True)
class BestResponseResult:
    candidates: list[Candidate] = field(repr=False)
    best: Candidate
    player: Player
    opponent_period: float


# Stationarity residuals. Each is the partial derivative of the mover's
# payoff inside one case group, with the sign convention of the derivation.

def defender_residual_case23(params: GameParams, t_D, t_A):
    p, d, r, s = params.p, params.d, params.r, params.s
    return (params.c_k / t_D ** 2
            + params.c_D * (t_A - s) / (t_A * (2 * t_D - t_A + s) ** 2)
            + (-t_D ** 2 + t_A ** 2 - 2 * p * t_A - s * (d + r - p))
            / (4 * t_A * t_D ** 2))


def defender_residual_case45(params: GameParams, t_D, t_A):
    p, d, r, s = params.p, params.d, params.r, params.s
    gap = 2 * t_A - t_D + s
    return (params.c_k / t_D ** 2
            + params.c_D * t_A / (t_D ** 2 * gap)
            - params.c_D * t_A / (t_D * gap ** 2)
            + (t_D ** 2 - t_A ** 2 - 2 * p * t_A - s * (d + r - p))
            / (4 * t_A * t_D ** 2))


def attacker_residual_case23(params: GameParams, t_A, t_D):
    p, d, r, s = params.p, params.d, params.r, params.s
    return (params.c_A / t_A ** 2
            - (t_D ** 2 - t_A ** 2 + 2 * (d + r) * t_D - s * (d + r - p))
            / (4 * t_A ** 2 * t_D))


def attacker_residual_case45(params: GameParams, t_A, t_D):
    p, d, r, s = params.p, params.d, params.r, params.s
    return (params.c_A / t_A ** 2
            - (t_A ** 2 - t_D ** 2 + 2 * (d + r) * t_D - s * (d + r - p))
            / (4 * t_A ** 2 * t_D))


RESIDUALS = {
    Source.ROOT_DEFENDER_CASE23: defender_residual_case23,
    Source.ROOT_DEFENDER_CASE45: defender_residual_case45,
    Source.ROOT_ATTACKER_CASE23: attacker_residual_case23,
    Source.ROOT_ATTACKER_CASE45: attacker_residual_case45,
}


def bracketed_roots(func, lo: float, hi: float, panels: int = PANELS,
                    width: float = BISECT_WIDTH) -> list[float]:
    """All roots of ``func`` on ``[lo, hi]`` found by panel scan + bisection.

    Sign changes between adjacent panel edges are refined by bisection until
    the bracket is no wider than ``width``; edges whose residual is already
    below ``TANGENT_RESIDUAL`` are reported as (possibly tangent) roots.
    Candidates are kept only if their residual is below ``ROOT_RESIDUAL``,
    which discards sign flips across poles.
    """
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        return []
    if hi == lo:
        return [lo] if abs(func(lo)) < TANGENT_RESIDUAL else []
    edges = np.linspace(lo, hi, panels + 1)
    values = [func(float(x)) for x in edges]
    roots = []
    for i, (x, fx) in enumerate(zip(edges, values)):
        if abs(fx) < TANGENT_RESIDUAL:
            roots.append(float(x))
            continue
        if i + 1 == len(edges):
            break
        fy = values[i + 1]
        if abs(fy) < TANGENT_RESIDUAL or not (fx < 0) ^ (fy < 0):
            continue
        a, b, fa = float(x), float(edges[i + 1]), fx
        while b - a > width:
            m = 0.5 * (a + b)
            fm = func(m)
            if fm == 0:
                a = b = m
                break
            if (fm < 0) == (fa < 0):
                a, fa = m, fm
            else:
                b = m
        roots.append(0.5 * (a + b))
    out = []
    for x in roots:
        x = min(max(x, lo), hi)
        if abs(func(x)) < ROOT_RESIDUAL and x not in out:
            out.append(x)
    return out


def _payoff(params: GameParams, player: Player, value: float,
            opponent: float) -> float:
    if player is Player.DEFENDER:
        return compute_payoffs(params, StrategyPair(value, opponent)).u_D
    return compute_payoffs(params, StrategyPair(opponent, value)).u_A


def _candidates(params: GameParams, player: Player, opponent: float,
                closed_form: float | None, brackets, panels: int):
    s = params.s
    raw: list[tuple[float, Source]] = []
    if closed_form is not None:
        raw.append((closed_form, Source.CLOSED_FORM))
    for source, lo, hi in brackets:
        residual = RESIDUALS[source]
        for root in bracketed_roots(
                lambda x: residual(params, x, opponent), lo, hi, panels):
            raw.append((root, source))
    for value in (s, opponent - s, opponent, opponent + s):
        if value >= s:
            raw.append((value, Source.BOUNDARY))
    return [Candidate(float(v), src, _payoff(params, player, v, opponent))
            for v, src in raw]


def defender_candidates(params: GameParams, t_A: float,
                        panels: int = PANELS) -> list[Candidate]:
    validate(params)
    validate_period(params, t_A, "t_A")
    s = params.s
    closed = math.sqrt(2 * t_A * params.c_k)
    closed = closed if s <= closed <= t_A - s else None
    brackets = [
        (Source.ROOT_DEFENDER_CASE23, max(s, t_A - s), t_A),
        (Source.ROOT_DEFENDER_CASE45, t_A, t_A + s),
    ]
    return _candidates(params, Player.DEFENDER, t_A, closed, brackets, panels)


def attacker_candidates(params: GameParams, t_D: float,
                        panels: int = PANELS) -> list[Candidate]:
    validate(params)
    validate_period(params, t_D, "t_D")
    s = params.s
    closed = math.sqrt(2 * t_D * params.c_A)
    if t_D - s >= s:
        # median of {s, closed, t_D - s}
        closed = min(max(closed, s), t_D - s)
    elif closed < s:
        closed = None
    brackets = [
        (Source.ROOT_ATTACKER_CASE23, t_D, t_D + s),
        (Source.ROOT_ATTACKER_CASE45, max(s, t_D - s), t_D),
    ]
    return _candidates(params, Player.ATTACKER, t_D, closed, brackets, panels)


def _argmax(candidates: list[Candidate]) -> Candidate:
    best = None
    for cand in sorted(candidates, key=lambda c: c.value):
        if best is None or cand.payoff > best.payoff:
            best = cand
    return best


def br_defender(params: GameParams, t_A: float,
                panels: int = PANELS) -> BestResponseResult:
    cands = defender_candidates(params, t_A, panels)
    return BestResponseResult(cands, _argmax(cands), Player.DEFENDER, t_A)


def br_attacker(params: GameParams, t_D: float,
                panels: int = PANELS) -> BestResponseResult:
    cands = attacker_candidates(params, t_D, panels)
    return BestResponseResult(cands, _argmax(cands), Player.ATTACKER, t_D)


def best_response(params: GameParams, player: Player | str,
                  opponent_period: float) -> BestResponseResult:
    player = Player(player)
    if player is Player.DEFENDER:
        return br_defender(params, opponent_period)
    return br_attacker(params, opponent_period)


def grid_points(lo: float, hi: float, step: float) -> np.ndarray:
    """``lo, lo + step, ...`` up to ``hi`` (inclusive within 1e-9 steps)."""
    if step <= 0:
        raise ValueError("step must be > 0")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(max(n, 1))


def brute_force_argmax(params: GameParams, player: Player | str,
                       opponent_period: float, lo: float, hi: float,
                       step: float) -> tuple[float, float]:
    """Grid maximiser of the player's payoff, ties toward the smallest period.

    Independent of the candidate machinery above: it only evaluates payoffs.
    """
    player = Player(player)
    validate(params)
    validate_period(params, opponent_period, "opponent_period")
    validate_period(params, lo, "lo")
    if hi < lo:
        raise ValueError("hi must be >= lo")
    grid = grid_points(lo, hi, step)
    if player is Player.DEFENDER:
        values = payoff_grid(params, grid, opponent_period)[0]
    else:
        values = payoff_grid(params, opponent_period, grid)[1]
    i = int(np.argmax(values))
    return float(grid[i]), float(values[i])
