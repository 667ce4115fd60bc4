import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nonconv.jump import (JumpGameParams, asymptotic_bounds, check_joint_point, find_parameters,
                          joint_delta_enumerate, oscillation_parameters, payoff_table, profile_payoff, solve_game,
                          zerosum_vi_oracle)
from nonconv.mdp import MdpParams, level_set_classify, mdp_value, score
from nonconv.numerics import DomainError

HALF = JumpGameParams(0.5, 0.5)


def test_profile_payoff_goldens():
    assert profile_payoff(HALF, 0.5, 1, 1) == pytest.approx(12 / 13, rel=1e-14)
    assert profile_payoff(JumpGameParams(0.2, 0.3), 0.9, 3, 0) == 1.0
    sb = score(MdpParams(0.3), 0.9, 2)
    assert profile_payoff(JumpGameParams(0.2, 0.3), 0.9, 0, 2) == pytest.approx(1 - sb, rel=1e-13)


@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95), st.floats(0.01, 0.999),
       st.integers(0, 30), st.integers(0, 30))
def test_profile_payoff_formula(alpha, beta, delta, a, b):
    sa = score(MdpParams(alpha), delta, a)
    sb = score(MdpParams(beta), delta, b)
    g = profile_payoff(JumpGameParams(alpha, beta), delta, a, b)
    assert 0.0 <= g <= 1.0
    assert g == pytest.approx((1 - sb) / (1 - sa * sb), rel=1e-10)


def test_solve_game_golden():
    s = solve_game(HALF, 0.5)
    assert (s.a_sharp, s.b_sharp) == (1, 1)
    assert s.value == pytest.approx(12 / 13, rel=1e-14)


@given(st.floats(0.05, 0.95), st.floats(0.05, 0.9999))
def test_symmetric_value(alpha, delta):
    v = mdp_value(MdpParams(alpha), delta).value
    assert solve_game(JumpGameParams(alpha, alpha), delta).value == pytest.approx(1 / (1 + v), rel=1e-12)


def test_symmetric_value_tends_to_half():
    from nonconv.numerics import DiscountFactor

    v = solve_game(JumpGameParams(0.3, 0.3), DiscountFactor.from_log_complement(-200.0)).value
    assert v == pytest.approx(0.5, abs=1e-10)


@given(st.floats(0.05, 0.9), st.floats(0.05, 0.9), st.floats(0.3, 0.995))
def test_dominance(alpha, beta, delta):
    params = JumpGameParams(alpha, beta)
    s = solve_game(params, delta)
    tab = payoff_table(params, delta, range(2 * s.a_sharp + 11), range(2 * s.b_sharp + 11))
    # at b = 0 player 2 jumps at once and every a ties at payoff 1
    assert np.all(tab[s.a_sharp] >= tab.max(axis=0) - 1e-15)
    live = tab.max(axis=0) < 1 - 1e-9  # columns not saturated at 1 in floating point
    assert np.all(np.argmax(tab[:, live], axis=0) == s.a_sharp)
    assert np.all(np.argmin(tab, axis=1) == s.b_sharp)
    assert s.value == pytest.approx(profile_payoff(params, delta, s.a_sharp, s.b_sharp), abs=1e-12)


@pytest.mark.parametrize("alpha,beta,delta", [(0.5, 0.5, 0.5), (0.2, 0.3, 0.9), (0.6, 0.2, 0.99)])
def test_vi_oracle(alpha, beta, delta):
    params = JumpGameParams(alpha, beta)
    assert zerosum_vi_oracle(params, delta, 60) == pytest.approx(solve_game(params, delta).value, abs=1e-8)


def test_vi_oracle_impatient_player_two():
    assert zerosum_vi_oracle(JumpGameParams(0.3, 0.3), 0.1, 40) >= 0.9


def test_vi_oracle_cap_too_small():
    with pytest.raises(DomainError):
        zerosum_vi_oracle(JumpGameParams(0.05, 0.05), 0.999, 6)


def test_asymptotic_bounds_examples():
    b = asymptotic_bounds(JumpGameParams.from_n(100))
    beta = 1 / 101
    expect = 1 / (1 + 2 * math.sqrt(math.sqrt(beta) * (1 - beta) / 0.99))
    assert b["delta1_liminf_lower"] == pytest.approx(expect, rel=1e-14)
    assert b["delta1_liminf_lower"] == pytest.approx(0.6131524580556382, rel=1e-12)
    seq = [asymptotic_bounds(JumpGameParams.from_n(10**k)) for k in (2, 4, 8, 16)]
    lows = [x["delta1_liminf_lower"] for x in seq]
    highs = [x["delta2_limsup_upper"] for x in seq]
    assert lows == sorted(lows) and highs == sorted(highs, reverse=True)
    assert lows[-1] > 0.999 and highs[-1] < 0.001
    for alpha in (0.1, 0.5, 0.9):
        b = asymptotic_bounds(JumpGameParams(alpha, alpha))
        assert b["delta1_liminf_lower"] <= 1 and b["delta2_limsup_upper"] >= 0


def test_find_parameters_goldens():
    # frozen after first computation by a plain scan over n
    assert find_parameters(0.25)[0] == 1296
    assert find_parameters(0.45)[0] == 36


@pytest.mark.parametrize("eps", [0.2, 0.25, 0.3, 0.45])
def test_find_parameters_postcondition(eps):
    n, alpha, beta = find_parameters(eps)
    params = JumpGameParams(alpha, beta)
    b = asymptotic_bounds(params)
    assert params.B < 0.25
    assert b["delta1_liminf_lower"] > 1 - eps and b["delta2_limsup_upper"] < eps
    prev = asymptotic_bounds(JumpGameParams.from_n(n - 1))
    assert not (prev["delta1_liminf_lower"] > 1 - eps and prev["delta2_limsup_upper"] < eps)


def test_find_parameters_domain():
    with pytest.raises(DomainError):
        find_parameters(0.5)
    with pytest.raises(DomainError):
        oscillation_parameters(0.01, 0.99, n_cap=10)


def test_ab_constants():
    params = JumpGameParams(0.2, 0.3)
    assert params.A == pytest.approx(math.log(0.8 / 0.7) / math.log(0.3))
    assert params.B == pytest.approx(math.log(0.2) / math.log(0.3) - 1)


def test_enumeration_requires_small_b():
    with pytest.raises(DomainError):
        joint_delta_enumerate(JumpGameParams(0.1, 0.5), "Delta1", 3)


@pytest.mark.parametrize("which", ["Delta1", "Delta2"])
def test_enumeration_points(which):
    params = JumpGameParams.from_n(20)
    pts = joint_delta_enumerate(params, which, 8)
    assert len(pts) == 8
    logs = [p.delta.log_complement for p in pts]
    assert all(x > y for x, y in zip(logs, logs[1:]))
    for p in pts:
        assert check_joint_point(params, p)
        assert 0.5 <= p.eta <= 1.5
        exact, other = (params.alpha, params.beta) if which == "Delta1" else (params.beta, params.alpha)
        assert level_set_classify(exact, p.delta).tag == "Delta1"
        assert level_set_classify(other, p.delta).tag == "Delta2"


def test_enumeration_is_exhaustive_at_small_depth():
    params = JumpGameParams.from_n(5)
    from nonconv.mdp import delta_from_level

    brute = [a for a in range(200)
             if level_set_classify(params.beta, delta_from_level(params.alpha, a)).tag == "Delta2"
             and delta_from_level(params.alpha, a).delta >= params.beta]
    pts = joint_delta_enumerate(params, "Delta1", len(brute[:20]))
    assert [p.a for p in pts] == brute[:20]


def test_oscillation_realised():
    n = find_parameters(0.25)[0]
    params = JumpGameParams.from_n(n)
    b = asymptotic_bounds(params)
    for p in joint_delta_enumerate(params, "Delta1", 6):
        assert solve_game(params, p.delta).value >= b["delta1_liminf_lower"] - 0.02
    for p in joint_delta_enumerate(params, "Delta2", 6):
        assert solve_game(params, p.delta).value <= b["delta2_limsup_upper"] + 0.02
