import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nonconv.mdp import (MdpParams, asymptotic_ratio, critical_threshold, delta_from_level, level_set_classify,
                         mdp_value, mdp_vi_oracle, score, score_bounds)
from nonconv.numerics import DiscountFactor, DomainError
from nonconv.risk import RiskChain, hit_factor

HALF = MdpParams(0.5)


def test_score_goldens():
    assert score(HALF, 0.5, 0) == 0.0
    assert score(HALF, 0.5, 1) == pytest.approx(1 / 12, rel=1e-14)
    assert score(HALF, 0.5, 2) == pytest.approx(3 / 88, rel=1e-14)


@given(st.floats(0.05, 0.95), st.floats(0.05, 0.999), st.integers(0, 25))
def test_score_is_success_probability_times_hit_factor(alpha, delta, a):
    expect = (1 - alpha ** a) * hit_factor(RiskChain(alpha), delta, a)
    assert score(MdpParams(alpha), delta, a) == pytest.approx(expect, rel=1e-11, abs=1e-300)


def test_score_accepts_real_levels_and_rejects_negative():
    assert 0 < score(HALF, 0.9, 1.5) < 1
    with pytest.raises(DomainError):
        score(HALF, 0.9, -0.5)


def test_value_golden():
    res = mdp_value(HALF, 0.5)
    assert res.value == pytest.approx(1 / 12, rel=1e-14) and res.argmax == 1


def test_value_tends_to_one_and_zero():
    alpha = 0.1
    d = DiscountFactor.from_log_complement(math.log(0.9) + 16 * math.log(alpha))
    assert mdp_value(MdpParams(alpha), d).value >= 0.99
    assert mdp_value(MdpParams(alpha), 1e-6).value < 1e-6


def test_critical_threshold_examples():
    assert critical_threshold(0.5, 7 / 8) == pytest.approx(1.0, abs=1e-14)
    assert critical_threshold(0.5, 1 - 0.5 * 0.5 ** 6) == pytest.approx(3.0, abs=1e-12)
    # frozen by direct evaluation of the closed form
    assert critical_threshold(0.1, 0.99) == pytest.approx(0.9771212547196625, rel=1e-12)
    with pytest.raises(DomainError):
        critical_threshold(0.5, 0.4)


def test_delta_from_level_examples():
    assert delta_from_level(0.5, 1).delta == pytest.approx(7 / 8, abs=1e-15)
    d = delta_from_level(0.1, 8)
    assert d.complement == pytest.approx(0.9e-16, rel=1e-12)
    assert 1.0 - d.delta != d.complement  # delta as a float loses the complement
    assert critical_threshold(0.5, delta_from_level(0.5, 1, 0.5)) == pytest.approx(1.25, abs=1e-12)
    with pytest.raises(DomainError):
        delta_from_level(0.5, 0, -1.0)
    with pytest.raises(DomainError):
        delta_from_level(0.5, 2, 2.0)


@given(st.floats(0.02, 0.95), st.integers(0, 2000), st.floats(-1.5, 1.5))
def test_delta_from_level_round_trip(alpha, a, eta):
    if 2 * a + eta < 0:
        return
    d = delta_from_level(alpha, a, eta)
    assert critical_threshold(alpha, d) == pytest.approx(a + eta / 2, abs=1e-10 * max(1, a))


@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.8])
def test_level_set_classify(alpha):
    for a in (1, 4, 30):
        t = level_set_classify(alpha, delta_from_level(alpha, a, 0.0))
        assert t.tag == "Delta1" and t.a == a
        t = level_set_classify(alpha, delta_from_level(alpha, a, 1.0))
        assert t.tag == "Delta2" and abs(t.eta) == pytest.approx(1.0)
        assert level_set_classify(alpha, delta_from_level(alpha, a, 0.2)).tag == "Neither"


@given(st.floats(0.02, 0.24), st.floats(-12.0, -0.3))
def test_argmax_near_critical_threshold(alpha, log10_x):
    d = DiscountFactor.from_log_complement(log10_x * math.log(10))
    if d.log_complement > math.log1p(-alpha):
        return
    res = mdp_value(MdpParams(alpha), d)
    c = critical_threshold(alpha, d)
    assert res.argmax in (math.floor(c), math.ceil(c))
    levels = np.arange(0, int(2 * c) + 65)
    scores = [score(MdpParams(alpha), d, a) for a in levels]
    assert res.value >= max(scores) - 1e-15


@pytest.mark.parametrize("reward", [0.5, 1.0, 7.0])
def test_argmax_independent_of_reward(reward):
    for delta in (0.6, 0.95, 0.999):
        base = mdp_value(MdpParams(0.3), delta)
        res = mdp_value(MdpParams(0.3, reward), delta)
        assert res.argmax == base.argmax
        assert res.value == pytest.approx(reward * base.value, rel=1e-14)


def test_windowed_scan_on_huge_levels():
    d = DiscountFactor.from_log_complement(-2.0e6)
    res = mdp_value(MdpParams(0.1), d)
    assert res.windowed
    c = critical_threshold(0.1, d)
    assert abs(res.argmax - c) <= 1
    assert res.log_gap < 0


@given(st.floats(0.02, 0.95), st.floats(-14.0, -0.05))
def test_sandwich(alpha, log10_x):
    d = DiscountFactor.from_log_complement(log10_x * math.log(10))
    if d.log_complement > math.log1p(-alpha):
        return
    assert score_bounds(MdpParams(alpha), d).holds


def test_sandwich_examples():
    for alpha, delta in [(0.5, 7 / 8), (0.1, 1 - 0.9 * 0.01 ** 3)]:
        b = score_bounds(MdpParams(alpha), delta)
        assert b.lower <= b.score <= b.upper


def test_asymptotic_ratio_on_grid():
    ratio = asymptotic_ratio(MdpParams(0.1), delta_from_level(0.1, 10))
    assert abs(ratio - 2 / math.sqrt(0.9)) <= 0.05 * 2 / math.sqrt(0.9)


@pytest.mark.parametrize("alpha,delta", [(0.5, 0.5), (0.3, 0.9), (0.1, 0.99), (0.7, 0.95)])
def test_vi_oracle_agrees(alpha, delta):
    v, jump = mdp_vi_oracle(MdpParams(alpha), delta, 60)
    res = mdp_value(MdpParams(alpha), delta)
    assert v == pytest.approx(res.value, abs=1e-8)
    assert jump[res.argmax] and not jump[: res.argmax].any()


def test_vi_oracle_domain():
    assert mdp_vi_oracle(HALF, 0.0, 40)[0] == 0.0
    with pytest.raises(DomainError):
        mdp_vi_oracle(MdpParams(0.1), 0.99, 5)
    with pytest.raises(DomainError):
        mdp_vi_oracle(HALF, 0.9999, 60)
