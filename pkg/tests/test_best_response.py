import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tbsgame.best_response import (RESIDUALS, Player, Source,
                                   attacker_candidates, best_response,
                                   br_attacker, br_defender, bracketed_roots,
                                   brute_force_argmax, defender_candidates,
                                   grid_points)
from tbsgame.model import GameParams, PeriodBelowFloor, StrategyPair
from tbsgame.payoff import compute_payoffs


def test_closed_form_for_long_attack_period(base_params):
    res = br_defender(base_params, 80)
    assert res.best.source is Source.CLOSED_FORM
    assert res.best.value == math.sqrt(2 * 5 * 80)


def test_floor_attack_period(base_params):
    assert br_defender(base_params, 14).best.value == 28
    assert br_attacker(base_params, 14).best.value == 28
    assert br_attacker(base_params, 140).best.value == 14


def test_best_is_argmax_of_true_payoffs(base_params):
    res = br_attacker(base_params, 50)
    for c in res.candidates:
        u = compute_payoffs(base_params, StrategyPair(50, c.value)).u_A
        assert c.payoff == u
    assert res.best.payoff == max(c.payoff for c in res.candidates)


def test_ties_go_to_smaller_period():
    # zero costs and t_D far in Case 6 leaves a flat attacker payoff segment
    params = GameParams(1, 1, 1)
    res = br_attacker(params, 3)
    best = res.best
    assert all(c.value >= best.value for c in res.candidates
               if c.payoff == best.payoff)


def test_dispatch(base_params):
    assert best_response(base_params, "defender", 60).player is Player.DEFENDER
    assert best_response(base_params, Player.ATTACKER, 60).player \
        is Player.ATTACKER
    with pytest.raises(ValueError):
        best_response(base_params, "umpire", 60)


def test_opponent_floor(base_params):
    with pytest.raises(PeriodBelowFloor):
        br_defender(base_params, 10)


def test_bracketed_roots_finds_all():
    roots = bracketed_roots(lambda x: (x - 1) * (x - 2) * (x - 3), 0, 4)
    assert roots == pytest.approx([1, 2, 3], abs=1e-9)
    assert bracketed_roots(lambda x: x * x + 1, -1, 1) == []


def test_grid_points_inclusive():
    g = grid_points(14, 15, 0.1)
    assert len(g) == 11 and g[-1] == pytest.approx(15)


def test_brute_force_tie_break():
    params = GameParams(1, 1, 1)
    t, _ = brute_force_argmax(params, "attacker", 3, 3, 6, 0.5)
    assert t == 3


def _roots(cands):
    return [c for c in cands if c.source in RESIDUALS]


@settings(max_examples=60, deadline=None)
@given(p=st.floats(0.5, 8), d=st.floats(0.1, 15), r=st.floats(0.1, 5),
       cD=st.floats(0, 10), ck=st.floats(0, 10), cA=st.floats(0, 2),
       k=st.floats(1, 10))
def test_roots_are_real_and_bracketed(p, d, r, cD, ck, cA, k):
    params = GameParams(p, d, r, cD, ck, cA)
    s = params.s
    opp = k * s
    for cand in _roots(defender_candidates(params, opp)):
        assert abs(RESIDUALS[cand.source](params, cand.value, opp)) < 1e-8
    for cand in _roots(attacker_candidates(params, opp)):
        assert abs(RESIDUALS[cand.source](params, cand.value, opp)) < 1e-8


def test_increasing_tail_outside_candidate_set():
    # When t_A / 2 + p < c_D + c_k the defender's payoff keeps rising past
    # t_A + s toward zero, so a wide grid beats every finite candidate. The
    # candidate method reports the best finite critical point regardless.
    params = GameParams(3, 10, 1, c_D=10, c_k=5, c_A=0.5)
    best = br_defender(params, 14).best
    grid_t, grid_u = brute_force_argmax(params, "defender", 14, 14, 400, 0.5)
    assert best.value == 28 and best.payoff < 0
    assert grid_t == 400 and best.payoff < grid_u < 0
