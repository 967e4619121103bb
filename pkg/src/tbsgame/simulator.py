"""Event-loop Monte Carlo of the periodic game, used as an oracle.

Each replication draws the two initial phases uniformly over one period and
then plays the deterministic periodic schedules forward. Random streams come
from numpy's counter-based Philox generator keyed with
``seed ^ replication_index``, so any single replication can be reproduced on
its own.

Event rules:

* a launch at ``a`` completes at ``a + p``; the attacker owns from then on;
* a check at ``c`` that finds a completed compromise starts recovery; the
  defender owns again at ``c + d + r`` and one reset is counted;
* checks during an attack in progress, while safe, or while recovering see
  nothing;
* launches in ``(c, c + d + r]`` after a detecting check are void;
* launches while an attack is pending or the system is compromised do
  nothing (they are still paid for).

Simultaneous events run in the order completion, recovery end, check, launch.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numba
import numpy as np

from .model import GameError, GameParams, StrategyPair, validate

WARMUP_PERIODS = 10
Z_95 = 1.959963984540054

SAFE, PROGRESS, COMPROMISED, RECOVERING = 0, 1, 2, 3


class HorizonTooShort(GameError):
    pass


@dataclass(frozen=True)
class SimConfig:
    params: GameParams
    pair: StrategyPair
    horizon_periods: int = 10_000
    replications: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.horizon_periods < 1:
            raise ValueError("horizon_periods must be >= 1")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class SimResult:
    tau_hat: float
    delta_hat: float
    u_D_hat: float
    u_A_hat: float
    resets: int
    checks: int
    attacks_launched: int
    attacks_voided: int
    ci_halfwidth_tau: float
    horizon: float
    attacker_time: float
    defender_time: float
    compromises: int
    void_takeovers: int

    def to_dict(self) -> dict:
        out = asdict(self)
        for key, value in out.items():
            if isinstance(value, float) and not math.isfinite(value):
                out[key] = None
        return out


@numba.njit(cache=True)
def _run_replication(p, d, r, t_D, t_A, phase_D, phase_A, t_start, t_end):
    """Play one replication; returns integer counters and ownership times.

    Counters only include events inside ``[t_start, t_end)``.
    """
    state = SAFE
    completion = math.inf
    recovery_end = math.inf
    void_from = -math.inf
    void_to = -math.inf
    next_check = phase_D
    next_launch = phase_A
    now = 0.0
    defender_time = 0.0
    attacker_time = 0.0
    resets = 0
    checks = 0
    launches = 0
    voided = 0
    compromises = 0
    void_takeovers = 0

    while True:
        t = min(completion, recovery_end, next_check, next_launch)
        if t > t_end:
            t = t_end
        # integrate ownership over [now, t] clipped to the measured window
        lo = max(now, t_start)
        if t > lo:
            if state == COMPROMISED or state == RECOVERING:
                attacker_time += t - lo
            else:
                defender_time += t - lo
        now = t
        if now >= t_end:
            break
        counted = now >= t_start
        if completion == now:
            completion = math.inf
            if state == PROGRESS:
                state = COMPROMISED
                if counted:
                    compromises += 1
                if void_from < now <= void_to:
                    void_takeovers += 1
        elif recovery_end == now:
            recovery_end = math.inf
            state = SAFE
        elif next_check == now:
            next_check += t_D
            if counted:
                checks += 1
            if state == COMPROMISED:
                state = RECOVERING
                recovery_end = now + d + r
                void_from = now
                void_to = now + d + r
                if counted:
                    resets += 1
        else:
            next_launch += t_A
            if counted:
                launches += 1
            if void_from < now <= void_to:
                if counted:
                    voided += 1
            elif state == SAFE:
                state = PROGRESS
                completion = now + p
    return (resets, checks, launches, voided, compromises, void_takeovers,
            defender_time, attacker_time)


def replication_phases(seed: int, index: int, t_D: float, t_A: float):
    gen = np.random.Generator(np.random.Philox(key=seed ^ index))
    u = gen.random(2)
    return float(u[0] * t_D), float(u[1] * t_A)


def run_replication(config: SimConfig, index: int) -> dict:
    """One replication's raw tallies; deterministic in ``(seed, index)``."""
    params, pair = config.params, config.pair
    t_start = WARMUP_PERIODS * pair.t_A
    t_end = config.horizon_periods * pair.t_A
    phase_D, phase_A = replication_phases(config.seed, index, pair.t_D,
                                          pair.t_A)
    (resets, checks, launches, voided, compromises, void_takeovers,
     defender_time, attacker_time) = _run_replication(
        float(params.p), float(params.d), float(params.r), float(pair.t_D),
        float(pair.t_A), phase_D, phase_A, float(t_start), float(t_end))
    return {
        "resets": resets, "checks": checks, "launches": launches,
        "voided": voided, "compromises": compromises,
        "void_takeovers": void_takeovers,
        "defender_time": defender_time, "attacker_time": attacker_time,
        "horizon": t_end - t_start,
    }


def simulate(config: SimConfig) -> SimResult:
    validate(config.params, config.pair)
    if config.horizon_periods <= WARMUP_PERIODS:
        raise HorizonTooShort(
            f"horizon of {config.horizon_periods} attacker periods leaves no "
            f"time after the {WARMUP_PERIODS}-period warm-up")
    reps = [run_replication(config, i) for i in range(config.replications)]
    horizon = reps[0]["horizon"]
    taus = np.array([rep["defender_time"] / horizon for rep in reps])
    total = horizon * len(reps)
    resets = sum(rep["resets"] for rep in reps)
    checks = sum(rep["checks"] for rep in reps)
    launches = sum(rep["launches"] for rep in reps)
    tau_hat = float(taus.mean())
    if len(reps) > 1:
        ci = Z_95 * float(taus.std(ddof=1)) / math.sqrt(len(reps))
    else:
        ci = math.nan
    c = config.params
    return SimResult(
        tau_hat=tau_hat,
        delta_hat=total / resets if resets else math.inf,
        u_D_hat=tau_hat - c.c_D * resets / total - c.c_k * checks / total,
        u_A_hat=(1 - tau_hat) - c.c_A * launches / total,
        resets=resets,
        checks=checks,
        attacks_launched=launches,
        attacks_voided=sum(rep["voided"] for rep in reps),
        ci_halfwidth_tau=ci,
        horizon=total,
        attacker_time=float(sum(rep["attacker_time"] for rep in reps)),
        defender_time=float(sum(rep["defender_time"] for rep in reps)),
        compromises=sum(rep["compromises"] for rep in reps),
        void_takeovers=sum(rep["void_takeovers"] for rep in reps),
    )
