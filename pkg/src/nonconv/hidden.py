"""Hidden version of the jump game and the 13-state game built on top of it.

In the hidden jump game the risk level is not observed: players only see
whether the last step was a reset.  Their belief then moves on the grid
``{alpha**a}``, so the belief game is the jump game itself.  Two rescaled
copies, one per player, plus an initial coordination stage and an additive
"choose your opponent's payoff" game give a game whose equilibrium payoffs
jump between two disjoint squares as the discount factor tends to one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .core import HiddenStochasticGame
from .jump import (GameSolution, JointLevelPoint, JumpGameParams, joint_delta_enumerate,
                   oscillation_parameters, profile_payoff, solve_game)
from .numerics import DiscountFactor, DomainError, as_discount, horizon_cap
from .solvers import MCResult, as_stream, mc_engine

STAR_STATES = ["(1,1)", "(1,0)", "(2,1)", "(2,0)", "1*", "0*"]
STAR_SIGNALS = ["s1", "s1'", "s1*", "s2", "s2'", "s0*"]


class CertificateError(RuntimeError):
    """A required inequality failed; ``certificates`` lists all of them."""

    def __init__(self, message, certificates=()):
        super().__init__(message)
        self.certificates = list(certificates)


def build_gamma_star(params: JumpGameParams) -> HiddenStochasticGame:
    """Hidden jump game on six states with six signals.

    ``(1, 1)`` means player 1 would fail if she jumped now, ``(1, 0)`` that
    she would succeed; likewise for player 2.  Player 1 earns 1 in player 2's
    states and in ``1*``.
    """
    a, b = params.alpha, params.beta
    st = {s: n for n, s in enumerate(STAR_STATES)}
    sg = {s: n for n, s in enumerate(STAR_SIGNALS)}
    T = np.zeros((6, 2, 2, 6, 6))

    def put(k, i, j, k2, s, p):
        T[st[k], i, j, st[k2], sg[s]] += p

    for j in (0, 1):
        put("(1,1)", 1, j, "0*", "s0*", 1.0)
        put("(1,0)", 1, j, "(2,1)", "s2", 1.0)
        put("(1,1)", 0, j, "(1,1)", "s1", 1.0 - a)
        put("(1,1)", 0, j, "(1,1)", "s1'", a * a)
        put("(1,1)", 0, j, "(1,0)", "s1'", a * (1.0 - a))
        put("(1,0)", 0, j, "(1,1)", "s1", 1.0 - a)
        put("(1,0)", 0, j, "(1,0)", "s1'", a)
    for i in (0, 1):
        put("(2,1)", i, 1, "1*", "s1*", 1.0)
        put("(2,0)", i, 1, "(1,1)", "s1", 1.0)
        put("(2,1)", i, 0, "(2,1)", "s2", 1.0 - b)
        put("(2,1)", i, 0, "(2,1)", "s2'", b * b)
        put("(2,1)", i, 0, "(2,0)", "s2'", b * (1.0 - b))
        put("(2,0)", i, 0, "(2,1)", "s2", 1.0 - b)
        put("(2,0)", i, 0, "(2,0)", "s2'", b)
    T[st["1*"], :, :, st["1*"], sg["s1*"]] = 1.0
    T[st["0*"], :, :, st["0*"], sg["s0*"]] = 1.0
    u1 = np.zeros((6, 2, 2))
    for k in ("(2,1)", "(2,0)", "1*"):
        u1[st[k]] = 1.0
    init = np.zeros((6, 6))
    init[st["(2,1)"], sg["s2"]] = 1.0
    return HiddenStochasticGame(list(STAR_STATES), ["W1", "J1"], ["W2", "J2"], list(STAR_SIGNALS),
                                T, u1, 1.0 - u1, init, metadata={"alpha": a, "beta": b})


# simulation under belief-threshold strategies ----------------------------------


@dataclass(frozen=True)
class ThresholdPolicy:
    """Per-signal jump rule.

    After signal ``s`` the player ``controller[s]`` (0 or 1, -1 for none)
    jumps iff the belief on ``risk_state[s]`` is at most ``threshold[s]``;
    ``grid_base[s]`` is the ratio of the belief grid used for diagnostics.
    """

    controller: np.ndarray
    risk_state: np.ndarray
    threshold: np.ndarray
    grid_base: np.ndarray


def gamma_star_policy(params: JumpGameParams, a: int, b: int) -> ThresholdPolicy:
    ctrl = np.full(6, -1, dtype=np.int64)
    risk = np.full(6, -1, dtype=np.int64)
    thr = np.zeros(6)
    base = np.ones(6)
    for s in ("s1", "s1'"):
        n = STAR_SIGNALS.index(s)
        ctrl[n], risk[n], thr[n], base[n] = 0, STAR_STATES.index("(1,1)"), params.alpha ** a, params.alpha
    for s in ("s2", "s2'"):
        n = STAR_SIGNALS.index(s)
        ctrl[n], risk[n], thr[n], base[n] = 1, STAR_STATES.index("(2,1)"), params.beta ** b, params.beta
    return ThresholdPolicy(ctrl, risk, thr, base)


@dataclass(frozen=True)
class SimulationResult:
    estimate: MCResult
    max_grid_error: float


def hsg_simulate(hsg: HiddenStochasticGame, policy: ThresholdPolicy, delta, samples: int, seed,
                 *, use_numba=None, chunk_size: int = 20_000) -> SimulationResult:
    """Monte Carlo of player 1's discounted payoff with Bayes-filtered beliefs.

    Trajectories stop at ``ceil(ln 1e-12 / ln delta)`` periods; absorbing
    states contribute their exact tail.
    """
    d = as_discount(delta)
    horizon = horizon_cap(d)
    q = np.ascontiguousarray(hsg.transition)
    K, I, J, _, S = q.shape
    cum = np.ascontiguousarray(np.cumsum(q.reshape(K, I, J, K * S), axis=-1))
    init_cum = np.cumsum(hsg.initial.reshape(-1))
    absorbing = hsg.absorbing()
    errs = []

    def sampler(rng, n):
        u = rng.random((n, horizon))
        pay, err = _kernels.hsg_paths(q, cum, np.ascontiguousarray(hsg.payoff1), absorbing, init_cum,
                                      np.ascontiguousarray(hsg.initial), policy.controller,
                                      policy.risk_state, policy.threshold, policy.grid_base,
                                      d.delta, u, use_numba=use_numba)
        errs.append(float(err.max()))
        return pay

    est = mc_engine(sampler, samples, as_stream(seed), chunk_size)
    return SimulationResult(est, max(errs))


def prop6_check(params: JumpGameParams, delta, samples: int = 100_000, seed=0, *, use_numba=None):
    """Simulate the hidden game under the equilibrium thresholds of the jump game."""
    sol = solve_game(params, delta)
    hsg = build_gamma_star(params)
    sim = hsg_simulate(hsg, gamma_star_policy(params, sol.a_sharp, sol.b_sharp), delta, samples,
                       seed, use_numba=use_numba)
    est = sim.estimate
    z = (est.mean - sol.value) / est.stderr if est.stderr > 0 else (0.0 if est.mean == sol.value else math.inf)
    return {"value": sol.value, "a_sharp": sol.a_sharp, "b_sharp": sol.b_sharp, "mc_mean": est.mean,
            "mc_stderr": est.stderr, "z": z, "max_grid_error": sim.max_grid_error}


def gamma_star_value_check(params: JumpGameParams, delta, a: int, b: int, samples: int = 100_000,
                           seed=0, *, use_numba=None):
    """Simulated payoff of the ``(a, b)`` belief-threshold profile and its closed form.

    Returns ``(SimulationResult, exact)``.
    """
    sim = hsg_simulate(build_gamma_star(params), gamma_star_policy(params, a, b), delta, samples, seed,
                       use_numba=use_numba)
    return sim, profile_payoff(params, delta, a, b)


# the 13-state game -----------------------------------------------------------------


def _check_eps_r(eps, r):
    if not 0.0 < eps <= 5.0 / 12.0:
        raise DomainError("epsilon must lie in (0, 5/12]")
    if not 0.0 < r < eps / 5.0:
        raise DomainError("r must lie in (0, epsilon/5)")


def final_game_parameters(eps: float, r: float, n_cap: int = 10**8):
    """Smallest ``n`` whose limit bounds straddle ``[eps - 5r, eps + 5r]``."""
    _check_eps_r(eps, r)
    return oscillation_parameters(eps - 5 * r, eps + 5 * r, n_cap)


@dataclass
class FinalGame:
    hsg: HiddenStochasticGame
    epsilon: float
    r: float
    params: JumpGameParams
    cells: dict = field(default_factory=dict)

    def value(self, delta) -> float:
        """Value of the rescaled hidden jump game, ``r + (1 - 2r) v``."""
        return self.r + (1.0 - 2.0 * self.r) * solve_game(self.params, delta).value


FINAL_ACTIONS1 = ["W1T", "W1B", "J1T", "J1B"]
FINAL_ACTIONS2 = ["W2L", "W2R", "J2L", "J2R"]


def rescale_embed(hsg: HiddenStochasticGame, r: float) -> HiddenStochasticGame:
    """Same game with every payoff ``x`` replaced by ``r + (1 - 2r) x``."""
    if not 0.0 <= r < 0.5:
        raise DomainError("r must lie in [0, 1/2)")
    return replace(hsg, payoff1=r + (1.0 - 2.0 * r) * hsg.payoff1, payoff2=r + (1.0 - 2.0 * r) * hsg.payoff2,
                   metadata=dict(hsg.metadata, rescaled=r))


def build_final_game(eps: float, r: float, params: JumpGameParams | None = None) -> FinalGame:
    """Assemble the 13-state game.

    First stage in ``k1``: ``(W, W)`` leads to an absorbing state paying
    ``(eps, eps)``, ``(J, J)`` to one paying ``(1-eps, 1-eps)``, ``(J, W)``
    into the rescaled hidden jump game where player 1 is the first mover and
    ``(W, J)`` into the copy with roles exchanged.  The second action
    coordinate chooses the opponent's payoff ``+r`` or ``-r`` every period.
    """
    _check_eps_r(eps, r)
    if params is None:
        n, _, _ = final_game_parameters(eps, r)
        params = JumpGameParams.from_n(n)
    star = rescale_embed(build_gamma_star(params), r)
    g1 = star.payoff1[:, 0, 0]
    g2 = star.payoff2[:, 0, 0]
    states = ["k1", "(e,e)*", "(1-e,1-e)*"] + [f"G1:{s}" for s in STAR_STATES[:4]] \
        + [f"G2:{s}" for s in STAR_STATES[:4]] + ["0*", "1*"]
    signals = ["k1", "(e,e)*", "(1-e,1-e)*"] + [f"G1:{s}" for s in ("s1", "s1'", "s2", "s2'")] \
        + [f"G2:{s}" for s in ("s1", "s1'", "s2", "s2'")] + ["s0*", "s1*"]
    S_ = {s: n for n, s in enumerate(states)}
    G_ = {s: n for n, s in enumerate(signals)}
    # where the copies send the hidden-game states and signals
    map1_state = {k: f"G1:{k}" for k in STAR_STATES[:4]} | {"0*": "0*", "1*": "1*"}
    map2_state = {k: f"G2:{k}" for k in STAR_STATES[:4]} | {"0*": "1*", "1*": "0*"}
    map1_sig = {s: f"G1:{s}" for s in ("s1", "s1'", "s2", "s2'")} | {"s0*": "s0*", "s1*": "s1*"}
    map2_sig = {s: f"G2:{s}" for s in ("s1", "s1'", "s2", "s2'")} | {"s0*": "s1*", "s1*": "s0*"}
    K, I, J, S = len(states), 4, 4, len(signals)
    T = np.zeros((K, I, J, K, S))
    U1 = np.zeros((K, I, J))
    U2 = np.zeros((K, I, J))
    first = lambda i: i // 2
    second = lambda i: i % 2

    for i in range(I):
        for j in range(J):
            gi, gj = first(i), first(j)
            for n_star, ks in enumerate(STAR_STATES[:4]):
                for k2 in range(6):
                    for s in range(6):
                        p1 = star.transition[n_star, gi, gj, k2, s]
                        if p1:
                            T[S_[f"G1:{ks}"], i, j, S_[map1_state[STAR_STATES[k2]]],
                              G_[map1_sig[STAR_SIGNALS[s]]]] += p1
                        # in the second copy player 2 moves first
                        p2 = star.transition[n_star, gj, gi, k2, s]
                        if p2:
                            T[S_[f"G2:{ks}"], i, j, S_[map2_state[STAR_STATES[k2]]],
                              G_[map2_sig[STAR_SIGNALS[s]]]] += p2
                U1[S_[f"G1:{ks}"], i, j] = g1[n_star]
                U2[S_[f"G1:{ks}"], i, j] = g2[n_star]
                U1[S_[f"G2:{ks}"], i, j] = g2[n_star]
                U2[S_[f"G2:{ks}"], i, j] = g1[n_star]
            T[S_["0*"], i, j, S_["0*"], G_["s0*"]] = 1.0
            T[S_["1*"], i, j, S_["1*"], G_["s1*"]] = 1.0
            U1[S_["0*"], i, j], U2[S_["0*"], i, j] = g1[STAR_STATES.index("0*")], g2[STAR_STATES.index("0*")]
            U1[S_["1*"], i, j], U2[S_["1*"], i, j] = g1[STAR_STATES.index("1*")], g2[STAR_STATES.index("1*")]
            for k, pay in (("(e,e)*", eps), ("(1-e,1-e)*", 1.0 - eps)):
                T[S_[k], i, j, S_[k], G_[k]] = 1.0
                U1[S_[k], i, j] = U2[S_[k], i, j] = pay
            k1 = S_["k1"]
            if gi == 0 and gj == 0:
                T[k1, i, j, S_["(e,e)*"], G_["(e,e)*"]] = 1.0
                U1[k1, i, j] = U2[k1, i, j] = eps
            elif gi == 1 and gj == 1:
                T[k1, i, j, S_["(1-e,1-e)*"], G_["(1-e,1-e)*"]] = 1.0
                U1[k1, i, j] = U2[k1, i, j] = 1.0 - eps
            elif gi == 1:
                T[k1, i, j, S_["G1:(2,1)"], G_["G1:s2"]] = 1.0
            else:
                T[k1, i, j, S_["G2:(2,1)"], G_["G2:s2"]] = 1.0
    # additive game: each player picks the other's payoff
    plus1 = np.where(np.array([second(j) for j in range(J)]) == 0, r, -r)
    plus2 = np.where(np.array([second(i) for i in range(I)]) == 0, r, -r)
    U1 = U1 + plus1[None, None, :]
    U2 = U2 + plus2[None, :, None]
    init = np.zeros((K, S))
    init[S_["k1"], G_["k1"]] = 1.0
    hsg = HiddenStochasticGame(states, list(FINAL_ACTIONS1), list(FINAL_ACTIONS2), signals, T, U1, U2, init,
                               metadata={"epsilon": eps, "r": r, "alpha": params.alpha, "beta": params.beta})
    return FinalGame(hsg, eps, r, params)


def swap_players(hsg: HiddenStochasticGame, state_map: dict, signal_map: dict) -> HiddenStochasticGame:
    """Exchange the players' identities, relabelling states and signals."""
    sp = np.array([hsg.states.index(state_map[s]) for s in hsg.states])
    gp = np.array([hsg.signals.index(signal_map[s]) for s in hsg.signals])
    K, S = hsg.n_states, len(hsg.signals)
    T = np.zeros_like(hsg.transition.transpose(0, 2, 1, 3, 4))
    src = hsg.transition.transpose(0, 2, 1, 3, 4)
    T[np.ix_(sp, range(T.shape[1]), range(T.shape[2]), sp, gp)] = src
    U1 = np.zeros_like(hsg.payoff2.transpose(0, 2, 1))
    U2 = np.zeros_like(U1)
    U1[sp] = hsg.payoff2.transpose(0, 2, 1)
    U2[sp] = hsg.payoff1.transpose(0, 2, 1)
    init = np.zeros_like(hsg.initial)
    init[np.ix_(sp, gp)] = hsg.initial
    return HiddenStochasticGame(list(hsg.states), list(hsg.actions2), list(hsg.actions1), list(hsg.signals),
                                T, U1, U2, init, dict(hsg.metadata))


FINAL_STATE_SWAP = {"k1": "k1", "(e,e)*": "(e,e)*", "(1-e,1-e)*": "(1-e,1-e)*", "0*": "1*", "1*": "0*"} \
    | {f"G1:{s}": f"G2:{s}" for s in STAR_STATES[:4]} | {f"G2:{s}": f"G1:{s}" for s in STAR_STATES[:4]}
FINAL_SIGNAL_SWAP = {"k1": "k1", "(e,e)*": "(e,e)*", "(1-e,1-e)*": "(1-e,1-e)*", "s0*": "s1*", "s1*": "s0*"} \
    | {f"G1:{s}": f"G2:{s}" for s in ("s1", "s1'", "s2", "s2'")} \
    | {f"G2:{s}": f"G1:{s}" for s in ("s1", "s1'", "s2", "s2'")}


def payoff_ranges(game: FinalGame) -> dict:
    """Per-state ``(min, max)`` of both players' stage payoffs."""
    h = game.hsg
    return {s: (float(min(h.payoff1[k].min(), h.payoff2[k].min())),
                float(max(h.payoff1[k].max(), h.payoff2[k].max()))) for k, s in enumerate(h.states)}


# regimes and certificates -------------------------------------------------------------


@dataclass(frozen=True)
class Square:
    center: tuple
    half_side: float

    @property
    def lo(self):
        return (self.center[0] - self.half_side, self.center[1] - self.half_side)

    @property
    def hi(self):
        return (self.center[0] + self.half_side, self.center[1] + self.half_side)

    def disjoint(self, other: "Square") -> bool:
        return any(self.hi[i] < other.lo[i] or other.hi[i] < self.lo[i] for i in range(2))


@dataclass(frozen=True)
class Certificate:
    name: str
    margin: float

    @property
    def holds(self) -> bool:
        return self.margin > 0.0


@dataclass(frozen=True)
class RegimeResult:
    regime: str  # "E1", "E2" or "Unclassified"
    value: float  # v_{alpha,beta,delta}
    value_delta: float  # r + (1 - 2r) v
    square: Square | None
    certificates: tuple = ()


def square_for(game: FinalGame, regime: str, eta: float = 0.0) -> Square:
    e, r = game.epsilon, game.r
    c = e if regime == "E1" else 1.0 - e
    return Square((c, c), r + 2.0 * eta)


def regime_classify(game: FinalGame, delta) -> RegimeResult:
    """Which equilibrium-payoff square ``delta`` certifies, if any.

    ``E1`` needs ``delta >= 1 - 2r`` and ``v < eps - 5r``; ``E2`` needs
    ``delta >= 1/(1 + 2r)`` and ``v > eps + 5r``.
    """
    d = as_discount(delta)
    e, r = game.epsilon, game.r
    v = solve_game(game.params, d).value
    vd = r + (1.0 - 2.0 * r) * v
    x = d.complement
    if x <= 2 * r and v < e - 5 * r:
        return RegimeResult("E1", v, vd, square_for(game, "E1"), tuple(_e1_certs(e, r, d.delta, vd)))
    if x <= 2 * r / (1 + 2 * r) and v > e + 5 * r:
        return RegimeResult("E2", v, vd, square_for(game, "E2"), tuple(_e2_certs(e, r, d.delta, vd)))
    return RegimeResult("Unclassified", v, vd, None)


def _e1_certs(e, r, delta, vd, tag=""):
    A = lambda y: y * (e - r) + (1 - y) * (delta * (1 - vd) - r)
    B = lambda y: y * (delta * (vd + 3 * r) + (1 - delta) * r) + (1 - y) * (1 - e + r)
    return [
        Certificate(f"delta*v_delta < eps - 2r(1+delta){tag}", e - 2 * r * (1 + delta) - delta * vd),
        Certificate(f"delta(1-v_delta) - r > 1 - eps + r{tag}", delta * (1 - vd) - r - (1 - e + r)),
        Certificate(f"A > B at y=0{tag}", A(0.0) - B(0.0)),
        Certificate(f"A > B at y=1{tag}", A(1.0) - B(1.0)),
    ]


def _e2_certs(e, r, delta, vd, tag=""):
    A = lambda y: y * (e + r) + (1 - y) * ((1 - delta) * r + delta * (1 - vd + 3 * r))
    B = lambda y: y * ((1 - delta) * (-r) + delta * (vd - r)) + (1 - y) * (1 - e - r)
    return [
        Certificate(f"delta*v_delta > eps + 2r{tag}", delta * vd - (e + 2 * r)),
        Certificate(f"delta*v_delta > eps + 2r + delta(1+2r) - 1{tag}",
                    delta * vd - (e + 2 * r + delta * (1 + 2 * r) - 1)),
        Certificate(f"B' > A' at y=0{tag}", B(0.0) - A(0.0)),
        Certificate(f"B' > A' at y=1{tag}", B(1.0) - A(1.0)),
    ]


def first_stage_certificates(game: FinalGame, delta, regime: str | None = None) -> list:
    """Inequalities making the first-stage coordination an equilibrium.

    In ``E1`` waiting is a strict best reply to waiting (for any mixture
    ``y`` of the opponent's two first-stage moves, checked at the extremes);
    in ``E2`` jumping is.
    """
    d = as_discount(delta)
    res = regime_classify(game, d)
    regime = regime or res.regime
    if regime == "E1":
        return _e1_certs(game.epsilon, game.r, d.delta, res.value_delta)
    if regime == "E2":
        return _e2_certs(game.epsilon, game.r, d.delta, res.value_delta)
    raise DomainError(f"delta is in neither regime (v = {res.value:.6g})")


@dataclass(frozen=True)
class PerturbedBound:
    regime: str
    eta: float
    square: Square
    certificates: list


def perturbation_cap(game: FinalGame) -> float:
    return game.r * (game.epsilon - 5 * game.r) / 4.0


def perturbed_bounds(game: FinalGame, delta, eta: float) -> PerturbedBound:
    """Equilibrium payoffs under payoff perturbations of size at most ``eta``.

    Requires ``0 <= eta < r (eps - 5r) / 4``; the squares widen to half side
    ``r + 2 eta``.  Raises :class:`CertificateError` naming any failing
    inequality.
    """
    if not 0.0 <= eta < perturbation_cap(game):
        raise DomainError(f"eta must lie in [0, {perturbation_cap(game):.6g})")
    d = as_discount(delta)
    res = regime_classify(game, d)
    if res.regime == "Unclassified":
        raise DomainError("delta is in neither regime")
    e, r, dl, vd = game.epsilon, game.r, d.delta, res.value_delta
    rr = r + eta
    if res.regime == "E1":
        certs = [Certificate("v_delta <= eps - 4(r+eta)", e - 4 * rr - vd),
                 Certificate("v_delta <= eps - 2(r+eta) + delta - 1", e - 2 * rr + dl - 1 - vd)]
        certs += _e1_certs(e, rr, dl, vd, tag=" (perturbed)")[2:]
    else:
        certs = [Certificate("delta*v_delta > eps - 1 + 2(r+eta) + delta(1 + 2(r+eta))",
                             dl * vd - (e - 1 + 2 * rr + dl * (1 + 2 * rr))),
                 Certificate("delta*v_delta > eps + 2(r+eta)", dl * vd - (e + 2 * rr))]
        certs += _e2_certs(e, rr, dl, vd, tag=" (perturbed)")[2:]
    sq1, sq2 = square_for(game, "E1", eta), square_for(game, "E2", eta)
    certs.append(Certificate("perturbed squares disjoint", sq2.lo[0] - sq1.hi[0]))
    failed = [c for c in certs if not c.holds]
    if failed:
        raise CertificateError(f"failed: {failed[0].name} (margin {failed[0].margin:.3g})", certs)
    return PerturbedBound(res.regime, eta, square_for(game, res.regime, eta), certs)


def regime_walk(game: FinalGame, side: str, count: int, start: int = 0) -> list:
    """Discount factors approaching one on the side where the game favours one square.

    ``side="Delta1"`` walks discount factors where player 2 has the exact
    threshold (small values, square around ``eps``); ``"Delta2"`` walks those
    where player 1 does (large values, square around ``1 - eps``).
    """
    joint = {"Delta1": "Delta2", "Delta2": "Delta1"}[side]
    pts = joint_delta_enumerate(game.params, joint, count, start)
    return [(p, regime_classify(game, p.delta)) for p in pts]


def find_regime_point(game: FinalGame, regime: str, max_points: int = 200):
    """First enumerated discount factor whose regime is ``regime``."""
    side = {"E1": "Delta1", "E2": "Delta2"}[regime]
    for p, res in regime_walk(game, side, max_points):
        if res.regime == regime:
            return p, res
    raise CertificateError(f"no {regime} point within {max_points} enumerated discount factors")
