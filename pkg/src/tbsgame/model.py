"""Shared domain types for the periodic time-based security game.

All times share one abstract unit. The case regions partition the defender's
check period ``t_D`` relative to the attacker's period ``t_A`` using
``s = p + d + r``::

    Case1   t_D <  t_A - s
    Case23  t_A - s <= t_D < t_A
    Case45  t_A <= t_D < t_A + s
    Case6   t_D >= t_A + s

Cases 2/3 and 4/5 share their closed-form expressions, so they are grouped.
"""

from __future__ import annotations

import enum
import math
import numbers
from dataclasses import asdict, dataclass


class GameError(ValueError):
    """Base class for invalid game inputs."""


class NonPositiveProtection(GameError):
    pass


class NegativeField(GameError):
    pass


class PeriodBelowFloor(GameError):
    pass


class NonFiniteInput(GameError):
    pass


class CaseRegion(str, enum.Enum):
    CASE1 = "Case1"
    CASE23 = "Case23"
    CASE45 = "Case45"
    CASE6 = "Case6"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class GameParams:
    """Model constants: protection, detection and reaction times plus costs.

    ``c_D`` is paid per reset, ``c_k`` per check and ``c_A`` per attack launch.
    """

    p: float
    d: float
    r: float
    c_D: float = 0.0
    c_k: float = 0.0
    c_A: float = 0.0

    @property
    def s(self) -> float:
        """Shortest rational period, ``p + d + r``."""
        return self.p + self.d + self.r

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class StrategyPair:
    t_D: float
    t_A: float


@dataclass(frozen=True)
class PayoffProfile:
    tau_D: float
    delta_D: float
    u_D: float
    u_A: float
    region: CaseRegion

    def to_dict(self) -> dict:
        out = asdict(self)
        out["region"] = self.region.value
        return out


def validate_params(params: GameParams) -> None:
    fields = params.to_dict()
    for name, value in fields.items():
        if not isinstance(value, numbers.Real) or not math.isfinite(value):
            raise NonFiniteInput(f"{name} must be finite, got {value!r}")
    if params.p <= 0:
        raise NonPositiveProtection(f"p must be > 0, got {params.p}")
    for name in ("d", "r", "c_D", "c_k", "c_A"):
        if fields[name] < 0:
            raise NegativeField(f"{name} must be >= 0, got {fields[name]}")


def validate_period(params: GameParams, value: float, name: str) -> None:
    if not isinstance(value, numbers.Real) or not math.isfinite(value):
        raise NonFiniteInput(f"{name} must be finite, got {value!r}")
    if value < params.s:
        raise PeriodBelowFloor(
            f"{name}={value:g} is below p+d+r={params.s:g}")


def validate(params: GameParams, pair: StrategyPair | None = None) -> None:
    """Raise the first violated constraint; return ``None`` when valid.

    Parameter checks run before period checks, and ``t_D`` is checked before
    ``t_A``.
    """
    validate_params(params)
    if pair is not None:
        validate_period(params, pair.t_D, "t_D")
        validate_period(params, pair.t_A, "t_A")


def region_of(s: float, t_D: float, t_A: float) -> CaseRegion:
    if t_D < t_A - s:
        return CaseRegion.CASE1
    if t_D < t_A:
        return CaseRegion.CASE23
    if t_D < t_A + s:
        return CaseRegion.CASE45
    return CaseRegion.CASE6


def classify_case(params: GameParams, pair: StrategyPair) -> CaseRegion:
    validate(params, pair)
    return region_of(params.s, pair.t_D, pair.t_A)
