import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nonconv.classic import build_example1, build_example15
from nonconv.core import (Belief, FiniteStochasticGame, HiddenStochasticGame, NotKnownPayoffsError,
                          belief_game_reduce, belief_update, eval_discounted_payoffs, game_from_dict, game_to_dict,
                          known_payoffs_partition, load_game, save_game)
from nonconv.hidden import build_gamma_star
from nonconv.jump import JumpGameParams, profile_payoff
from nonconv.numerics import DomainError

STAR = JumpGameParams(0.2, 0.3)


def revealing(game: FiniteStochasticGame, start: int) -> HiddenStochasticGame:
    """Hidden game whose signal is the next state."""
    K = game.n_states
    T = np.zeros(game.transition.shape + (K,))
    for k2 in range(K):
        T[..., k2, k2] = game.transition[..., k2]
    init = np.zeros((K, K))
    init[start, start] = 1.0
    return HiddenStochasticGame(list(game.states), list(game.actions1), list(game.actions2), list(game.states),
                                T, game.payoff1, game.payoff2, init)


def test_transition_rows_validated():
    T = np.zeros((1, 1, 1, 1))
    T[0, 0, 0, 0] = 0.9
    with pytest.raises(DomainError):
        FiniteStochasticGame(["k"], ["a"], ["b"], T, np.zeros((1, 1, 1)), np.zeros((1, 1, 1)))
    with pytest.raises(DomainError):
        FiniteStochasticGame(["k"], ["a"], ["b"], np.ones((1, 1, 1, 1)), np.zeros((2, 1, 1)), np.zeros((1, 1, 1)))


def test_absorbing_mask():
    g = build_example1()
    assert [s for s, m in zip(g.states, g.absorbing()) if m] == g.states[3:]


@pytest.mark.parametrize("delta", [0.0, 0.3, 0.9, 0.999])
def test_absorbing_state_repeats_payoff(delta):
    g = build_example1()
    r = eval_discounted_payoffs(g, np.zeros(7, int), np.zeros(7, int), delta)
    assert r[g.index("(-1,-1)*")] == pytest.approx([-1, -1])
    assert r[g.index("k1")] == pytest.approx([0.5, 0.0])


def test_eval_rejects_bad_profile():
    g = build_example1()
    with pytest.raises(DomainError):
        eval_discounted_payoffs(g, np.zeros(3, int), np.zeros(7, int), 0.5)
    with pytest.raises(DomainError):
        eval_discounted_payoffs(g, np.full((7, 2), 0.7), np.zeros(7, int), 0.5)
    with pytest.raises(DomainError):
        eval_discounted_payoffs(g, np.zeros(7, int), np.zeros(7, int), 1.0)


@given(st.integers(0, 2**32 - 1), st.floats(0.05, 0.95))
def test_eval_matches_forward_series(seed, delta):
    rng = np.random.default_rng(seed)
    g = build_example15()
    x = rng.dirichlet(np.ones(2), size=g.n_states)
    y = rng.dirichlet(np.ones(3), size=g.n_states)
    r = eval_discounted_payoffs(g, x, y, delta)
    P = np.einsum("ki,kj,kijl->kl", x, y, g.transition)
    u = np.einsum("ki,kj,kij->k", x, y, g.payoff1)
    T = int(math.ceil(math.log(1e-13) / math.log(delta)))
    acc, mu = np.zeros(g.n_states), np.eye(g.n_states)
    for t in range(T):
        acc += (1 - delta) * delta ** t * mu @ u
        mu = mu @ P
    bound = delta ** T * 60.0
    assert np.all(np.abs(acc - r[:, 0]) <= bound + 1e-10)


def test_gamma_star_belief_update_examples():
    g = build_gamma_star(STAR)
    a = STAR.alpha
    q = 0.37
    b = Belief(np.array([q, 1 - q, 0, 0, 0, 0]))
    post, p = belief_update(g, b, 0, 0, g.signal_index("s1'"))
    assert p == pytest.approx(a)
    assert post.probs[:2] == pytest.approx([q * a, 1 - q * a])
    post, p = belief_update(g, b, 0, 1, g.signal_index("s1"))
    assert p == pytest.approx(1 - a)
    assert post.probs[0] == pytest.approx(1.0)
    star = Belief.point(6, g.index("1*"))
    post, p = belief_update(g, star, 1, 1, g.signal_index("s1*"))
    assert p == 1.0 and post.probs[g.index("1*")] == 1.0
    with pytest.raises(DomainError):
        belief_update(g, b, 0, 0, g.signal_index("s2"))


def test_iterated_quiet_signals_walk_the_grid():
    g = build_gamma_star(STAR)
    b = Belief.point(6, g.index("(1,1)"))
    for k in range(1, 8):
        b, p = belief_update(g, b, 0, 0, g.signal_index("s1'"))
        assert p == pytest.approx(STAR.alpha)
        assert b.probs[g.index("(1,1)")] == pytest.approx(STAR.alpha ** k, rel=1e-14)


@given(st.lists(st.floats(0.0, 1.0), min_size=6, max_size=6), st.integers(0, 1), st.integers(0, 1))
def test_bayes_consistency(w, i, j):
    w = np.array(w)
    if w.sum() <= 0:
        return
    g = build_gamma_star(STAR)
    b = Belief(w / w.sum())
    total = np.zeros(6)
    for s in range(len(g.signals)):
        joint = b.probs @ g.transition[:, i, j, :, s]
        if joint.sum() <= 0:
            continue
        post, p = belief_update(g, b, i, j, s)
        assert abs(post.probs.sum() - 1) <= 1e-12
        total += p * post.probs
    uncond = np.einsum("k,kls->l", b.probs, g.transition[:, i, j])
    assert np.allclose(total, uncond, atol=1e-10)


def test_belief_support_distinct_and_normalised():
    b = Belief(np.array([0.25, 0.0, 0.75]))
    assert b.support == [(0, 0.25), (2, 0.75)]
    with pytest.raises(ValueError):
        b.probs[0] = 1.0


def test_reduction_of_gamma_star_lives_on_the_grids():
    d = 6
    g = build_gamma_star(STAR)
    red = belief_game_reduce(g, d)
    side1, side2 = set(), set()
    for b in red.beliefs:
        sup = {g.states[k]: p for k, p in b.support}
        if len(sup) == 1:
            continue
        if set(sup) == {"(1,1)", "(1,0)"}:
            lvl = math.log(sup["(1,1)"]) / math.log(STAR.alpha)
            side1.add(round(lvl))
        else:
            assert set(sup) == {"(2,1)", "(2,0)"}
            lvl = math.log(sup["(2,1)"]) / math.log(STAR.beta)
            side2.add(round(lvl))
        assert abs(lvl - round(lvl)) < 1e-9
    assert side2 == set(range(1, d + 1))
    assert side1 == set(range(1, d - 1))
    assert red.initial.sum() == pytest.approx(1.0)
    assert red.truncated


def test_reduction_depth_one():
    g = build_gamma_star(STAR)
    red = belief_game_reduce(g, 1)
    assert max(red.depth) == 1
    assert len(red.beliefs) == 3  # initial, one quiet signal, immediate jump


def test_reduction_cap():
    with pytest.raises(DomainError, match="exceeds 5"):
        belief_game_reduce(build_gamma_star(STAR), 10, max_states=5)


def test_reduction_of_revealing_game_is_the_game():
    g = build_example1()
    red = belief_game_reduce(revealing(g, 0), 10)
    assert len(red.beliefs) == g.n_states
    order = [int(np.argmax(b.probs)) for b in red.beliefs]
    assert all(b.probs.max() == 1.0 for b in red.beliefs)
    assert np.allclose(red.game.transition, g.transition[order][:, :, :, order])
    assert np.allclose(red.game.payoff1, g.payoff1[order])


def test_reduction_value_matches_jump_game():
    delta = 0.6
    g = build_gamma_star(STAR)
    red = belief_game_reduce(g, 40)
    a, b = 2, 1
    x = np.zeros(len(red.beliefs), int)
    y = np.zeros(len(red.beliefs), int)
    for n, bel in enumerate(red.beliefs):
        p11, p21 = bel.probs[g.index("(1,1)")], bel.probs[g.index("(2,1)")]
        p10, p20 = bel.probs[g.index("(1,0)")], bel.probs[g.index("(2,0)")]
        if p11 + p10 > 0 and p11 <= STAR.alpha ** a * (1 + 1e-9):
            x[n] = 1
        if p21 + p20 > 0 and p21 <= STAR.beta ** b * (1 + 1e-9):
            y[n] = 1
    r = eval_discounted_payoffs(red.game, x, y, delta)
    start = int(np.argmax(red.initial))
    assert r[start, 0] == pytest.approx(profile_payoff(STAR, delta, a, b), abs=delta ** 40 + 1e-12)


def test_reduction_coupled_paths():
    g = build_gamma_star(STAR)
    red = belief_game_reduce(g, 30)
    rng = np.random.default_rng(0)
    for _ in range(200):
        hb = Belief(red.beliefs[int(np.argmax(red.initial))].probs)
        rb = int(np.argmax(red.initial))
        for _ in range(25):
            i, j = rng.integers(0, 2, size=2)
            sig_p = np.einsum("k,kls->s", hb.probs, g.transition[:, i, j])
            s = int(np.searchsorted(np.cumsum(sig_p), rng.random() * sig_p.sum(), side="right"))
            s = min(s, len(sig_p) - 1)
            while sig_p[s] == 0:
                s -= 1
            hb, _ = belief_update(g, hb, i, j, s)
            rb = red.successor[(rb, i, j, s)]
            if rb in red.truncated:
                break
            assert np.allclose(hb.probs, red.beliefs[rb].probs, atol=1e-12)


def test_known_payoffs_gamma_star():
    g = build_gamma_star(STAR)
    cells = known_payoffs_partition(g)
    assert sorted(map(sorted, cells)) == sorted(map(sorted, [["(1,1)", "(1,0)"], ["(2,1)", "(2,0)"],
                                                              ["1*"], ["0*"]]))


def test_known_payoffs_revealing_game_singletons():
    cells = known_payoffs_partition(revealing(build_example1(), 0))
    assert all(len(c) == 1 for c in cells) and len(cells) == 7


def test_known_payoffs_failure_witness():
    g = build_gamma_star(STAR)
    g.payoff1[g.index("(1,0)")] = 0.5
    with pytest.raises(NotKnownPayoffsError) as exc:
        known_payoffs_partition(g)
    assert set(exc.value.states) == {"(1,1)", "(1,0)"}


@pytest.mark.parametrize("make", [build_example1, build_example15, lambda: build_gamma_star(STAR)])
def test_json_round_trip(make, tmp_path):
    g = make()
    path = tmp_path / "g.json"
    save_game(g, path)
    h = load_game(path)
    assert type(h) is type(g)
    assert h.states == g.states and h.actions1 == g.actions1
    assert np.array_equal(h.transition, g.transition)
    assert np.array_equal(h.payoff1, g.payoff1) and np.array_equal(h.payoff2, g.payoff2)
    assert json.loads(path.read_text()) == game_to_dict(h)


def test_json_schema_errors():
    data = game_to_dict(build_example1())
    bad = dict(data, kind="other")
    with pytest.raises(DomainError):
        game_from_dict(bad)
    bad = dict(data, transitions=data["transitions"] + [["k9", "T", "L", "k1", 0.1]])
    with pytest.raises(DomainError, match="unknown state"):
        game_from_dict(bad)
    bad = dict(data, transitions=data["transitions"][1:])
    with pytest.raises(DomainError):
        game_from_dict(bad)
