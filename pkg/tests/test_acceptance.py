"""Exit criteria, one test each. Every test prints a PASS/FAIL verdict line;
the lines are repeated in the terminal summary."""

import json
import math
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import random_params
from tbsgame import subcases, veris
from tbsgame.best_response import (RESIDUALS, Source, attacker_candidates,
                                   br_attacker, br_defender,
                                   brute_force_argmax, defender_candidates)
from tbsgame.equilibrium import find_equilibria
from tbsgame.model import CaseRegion, GameParams, StrategyPair, classify_case
from tbsgame.payoff import boundary_gap, compute_payoffs, compute_tau_delta
from tbsgame.simulator import SimConfig, simulate

ROOT = Path(__file__).resolve().parents[1]
FINDINGS = Path(os.environ.get("TBSGAME_FINDINGS_DIR", ROOT / "findings"))

pytestmark = pytest.mark.acceptance


def test_c01_boundary_continuity(report):
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        params = random_params(rng, costs=False)
        t_A = rng.uniform(2 * params.s, 10 * params.s)
        for boundary in ("A-s", "A", "A+s"):
            worst = max(worst, *boundary_gap(params, t_A, boundary))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 5
    report("C1 boundary continuity", ok,
           f"max |dtau|,|ddelta| = {worst:.3e} (< 1e-9), {elapsed:.2f}s (< 5s)")
    assert ok


def test_c02_group_identity(report):
    rng = np.random.default_rng(102)
    mismatches_23 = mismatches_45 = 0
    for _ in range(1000):
        params = random_params(rng, costs=False)
        p, d, r, s = params.p, params.d, params.r, params.s
        t_A = rng.uniform(2 * s, 10 * s)
        lo, hi = t_A - s, t_A + s
        t_D = rng.uniform(lo, hi)
        args = (p, d, r, t_D, t_A)
        mismatches_23 += subcases.folded_case2(*args) \
            != subcases.folded_case3(*args)
        mismatches_45 += subcases.folded_case4(*args) \
            != subcases.folded_case5(*args)
    ok = mismatches_23 == 0 and mismatches_45 == 0
    report("C2 formula-group identity", ok,
           f"bitwise mismatches Case2/3 = {mismatches_23}, "
           f"Case4/5 = {mismatches_45} over 1000 points")
    assert ok


def test_c03_invariances(report):
    rng = np.random.default_rng(103)
    case1_bad = case6_bad = 0
    for _ in range(200):
        params = random_params(rng, costs=False)
        s = params.s
        # Case 1 with room to move p while t_D < t_A - s still holds
        t_A = rng.uniform(3 * s, 10 * s)
        t_D = rng.uniform(s + 1, t_A - s - 1)
        p2 = params.p * rng.uniform(0.5, 1.0)
        moved = GameParams(p2, params.d, params.r)
        pair = StrategyPair(t_D, t_A)
        assert classify_case(moved, pair) is CaseRegion.CASE1
        case1_bad += compute_tau_delta(params, pair)[0] \
            != compute_tau_delta(moved, pair)[0]
    for _ in range(200):
        params = random_params(rng, costs=False)
        s = params.s
        t_A = rng.uniform(s, 5 * s)
        t_D = t_A + s + rng.uniform(1, 5 * s)
        moved = GameParams(params.p, params.d * rng.uniform(0, 1),
                           params.r * rng.uniform(0, 1))
        pair = StrategyPair(t_D, t_A)
        assert classify_case(moved, pair) is CaseRegion.CASE6
        case6_bad += compute_tau_delta(params, pair)[0] \
            != compute_tau_delta(moved, pair)[0]
    ok = case1_bad == 0 and case6_bad == 0
    report("C3 invariances", ok,
           f"Case1 tau changes under p: {case1_bad}/200; "
           f"Case6 tau changes under d,r: {case6_bad}/200")
    assert ok


def test_c04_simulator_oracle(report):
    params = GameParams(3, 10, 1)
    start = time.perf_counter()
    rows, ok = [], True
    for t_D in (15, 17, 25, 31, 40, 60):
        pair = StrategyPair(t_D, 30)
        tau, _, region = compute_tau_delta(params, pair)
        res = simulate(SimConfig(params, pair, 10_000, 100, seed=0))
        bias = res.tau_hat - tau
        tol = max(0.02, 3 * res.ci_halfwidth_tau)
        rows.append({"t_D": t_D, "t_A": 30, "region": region.value,
                     "tau_analytic": tau, "tau_hat": res.tau_hat,
                     "bias": bias, "ci_halfwidth": res.ci_halfwidth_tau,
                     "tolerance": tol,
                     "bias_beyond_ci": abs(bias) > res.ci_halfwidth_tau,
                     "pass": abs(bias) <= tol})
        ok &= abs(bias) <= tol
    elapsed = time.perf_counter() - start
    ok &= elapsed < 60
    FINDINGS.mkdir(parents=True, exist_ok=True)
    (FINDINGS / "simulator_vs_analytic.json").write_text(json.dumps({
        "params": params.to_dict(), "horizon_attacker_periods": 10_000,
        "replications": 100, "seed": 0, "points": rows}, indent=2) + "\n")
    flagged = [f"t_D={r['t_D']}({r['bias']:+.4f})" for r in rows
               if r["bias_beyond_ci"]]
    report("C4 simulator vs analytic", ok,
           f"max |bias| = {max(abs(r['bias']) for r in rows):.4f}, "
           f"bias beyond CI at {', '.join(flagged) or 'none'}; "
           f"{elapsed:.1f}s (< 60s); findings/simulator_vs_analytic.json")
    assert ok


def test_c05_best_response_asymptotes(report):
    params = GameParams(3, 10, 1, c_D=2, c_k=5, c_A=0.5)
    errs = [abs(br_defender(params, t).best.value - math.sqrt(2 * 5 * t))
            for t in (60, 80, 100)]
    floor = (br_defender(params, 14).best.value,
             br_attacker(params, 14).best.value,
             br_attacker(params, 140).best.value)
    ok = max(errs) <= 1e-3 and floor == (28, 28, 14)
    report("C5 best-response asymptotes", ok,
           f"max |BR_D - sqrt(2 c_k t_A)| = {max(errs):.2e}; "
           f"BR_D(14), BR_A(14), BR_A(140) = {floor}")
    assert ok


def _decreasing_tails(rng):
    # both outer payoff tails fall with the mover's period
    while True:
        params = random_params(rng)
        s = params.s
        if s / 2 + params.p > params.c_D + params.c_k \
                and s / 2 + params.d + params.r > params.c_A:
            return params


def test_c06_candidates_vs_grid(report):
    rng = np.random.default_rng(106)
    start = time.perf_counter()
    checked, failures = 0, []
    for _ in range(50):
        params = _decreasing_tails(rng)
        s = params.s
        for opp in rng.uniform(s, 10 * s, 3):
            for player, solve in (("defender", br_defender),
                                  ("attacker", br_attacker)):
                best = solve(params, float(opp)).best
                grid_t, grid_u = brute_force_argmax(params, player,
                                                    float(opp), s, 12 * s,
                                                    0.05)
                checked += 1
                if not (abs(best.value - grid_t) <= 0.05 + 1e-9
                        or abs(best.payoff - grid_u) <= 1e-6):
                    failures.append((player, float(opp), best.value, grid_t))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 120
    report("C6 candidate set vs grid", ok,
           f"{checked - len(failures)}/{checked} agree "
           f"(step 0.05 or 1e-6 payoff); {elapsed:.1f}s (< 120s)")
    assert ok, failures[:5]


@pytest.mark.xfail(strict=True, reason=(
    "the best-response maps do not intersect near (14.9, 28.9): the "
    "attacker gains about 0.013 by moving to t_A = 14 there"))
def test_c07_nash_reproduction(report):
    params = GameParams(3, 10, 1, c_D=10, c_k=5, c_A=0.5)
    start = time.perf_counter()
    found = find_equilibria(params, t_max=140, grid_step=0.1, eps=1e-3)
    elapsed = time.perf_counter() - start
    near = [c for c in found
            if abs(c.t_A - 14.9) <= 0.5 and abs(c.t_D - 28.9) <= 0.5]
    ok = bool(near) and elapsed < 300
    from tbsgame.equilibrium import deviation_gaps
    from tbsgame.best_response import grid_points
    gaps = deviation_gaps(params, 28.9, 14.9, grid_points(14, 140, 0.1))
    report("C7 Nash reproduction", ok,
           f"{len(found)} candidates, {len(near)} near (14.9, 28.9); "
           f"gaps there D={gaps[0]:.4f} A={gaps[1]:.4f} (<= 1e-3); "
           f"{elapsed:.1f}s")
    assert ok


BRACKETS = {
    Source.ROOT_DEFENDER_CASE23: lambda s, o: (max(s, o - s), o),
    Source.ROOT_DEFENDER_CASE45: lambda s, o: (o, o + s),
    Source.ROOT_ATTACKER_CASE23: lambda s, o: (o, o + s),
    Source.ROOT_ATTACKER_CASE45: lambda s, o: (max(s, o - s), o),
}


def test_c08_root_quality(report):
    rng = np.random.default_rng(108)
    roots, worst, outside = 0, 0.0, 0
    for _ in range(200):
        params = random_params(rng)
        s = params.s
        opp = float(rng.uniform(s, 10 * s))
        for cands in (defender_candidates(params, opp),
                      attacker_candidates(params, opp)):
            for c in cands:
                if c.source not in RESIDUALS:
                    continue
                roots += 1
                worst = max(worst, abs(RESIDUALS[c.source](params, c.value,
                                                           opp)))
                lo, hi = BRACKETS[c.source](s, opp)
                outside += not lo <= c.value <= hi
    ok = roots > 0 and worst < 1e-8 and outside == 0
    report("C8 root quality", ok,
           f"{roots} roots, max residual {worst:.2e} (< 1e-8), "
           f"{outside} outside bracket")
    assert ok


def test_c09_veris_pipeline(report, fixtures_dir, request):
    records, skips = veris.parse_incidents(fixtures_dir / "veris_synthetic")
    kept = veris.filter_malicious(records)
    ok = skips.total == 3 and len(kept) == 14
    units_seen = set()
    for field in ("discovery", "containment"):
        samples, excluded = veris.extract_durations(kept, field)
        ok &= len(samples) + sum(excluded.values()) == len(kept)
        units_seen |= {r.timeline[field][0].lower() for r in kept
                       if field in r.timeline}
    vocabulary = {"na", "seconds", "minutes", "hours", "days", "weeks",
                  "months", "years", "never", "unknown"}
    ok &= vocabulary <= units_seen
    from test_veris import CONTAINMENT_TABLE_MEAN, _table
    pairs = _table(fixtures_dir, "table_containment.csv", "containment")
    stats = veris.timing_stats(
        veris.samples_from_pairs("containment", [(v, u) for u, v in pairs]),
        2)
    diff = abs(stats.mean_days - CONTAINMENT_TABLE_MEAN)
    ok &= diff < 1e-6
    snapshot = request.config.getoption("--vcdb-snapshot")
    note = "snapshot assertions skipped (none supplied)"
    if snapshot:
        recs, _ = veris.parse_incidents(snapshot)
        sel = veris.filter_malicious(recs)
        results = []
        for field, width in (("discovery", 60), ("containment", 2)):
            samples, _ = veris.extract_durations(sel, field)
            results += veris.snapshot_checks(
                len(sel), field, veris.timing_stats(samples, width))
        ok &= all(r[1] for r in results)
        note = "; ".join(f"{n}: {d}" for n, _, d in results)
    report("C9 VERIS pipeline", ok,
           f"fixture accounting exact, all vocabulary units seen; "
           f"table mean diff {diff:.1e} days; {note}")
    assert ok


def _cli(*args):
    env = {**os.environ, "PYTHONHASHSEED": "0"}
    return subprocess.run([sys.executable, "-m", "tbsgame", *args],
                          capture_output=True, env=env, check=True).stdout


def test_c10_determinism(report):
    base = ["--p", "3", "--d", "10", "--r", "1", "--cd", "2", "--ck", "5",
            "--ca", "0.5"]
    sim = ["simulate", *base, "--td", "25", "--ta", "30", "--reps", "20",
           "--horizon-periods", "2000", "--seed", "7", "--format", "json"]
    nash = ["nash", *base, "--tmax", "40", "--grid-step", "0.5", "--eps",
            "1", "--format", "csv"]
    same = all(_cli(*cmd) == _cli(*cmd) for cmd in (sim, nash))
    report("C10 determinism", same,
           "simulate and nash stdout byte-identical across runs")
    assert same


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
