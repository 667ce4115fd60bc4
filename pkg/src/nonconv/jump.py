"""Zero-sum jump game between two risk chains.

Player 1 earns 1 per period while play is in player 2's zone and 0 in her own
zone.  The player whose zone it is may jump to the other zone; the jump fails
with probability equal to the current risk, which ends the game in favour of
the opponent.  Play starts in player 2's zone at risk 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import FiniteStochasticGame
from .mdp import MdpParams, critical_threshold, level_set_classify, log_gap, log_score, mdp_value
from .numerics import DiscountFactor, DomainError, as_discount, check_probability, frac
from .risk import _check_level
from .solvers import VIConfig, single_controller_vi

SCAN_CHUNK = 1 << 20


@dataclass(frozen=True)
class JumpGameParams:
    alpha: float
    beta: float

    def __post_init__(self):
        check_probability("alpha", self.alpha)
        check_probability("beta", self.beta)

    @classmethod
    def from_n(cls, n: int) -> "JumpGameParams":
        """``alpha = 1/n``, ``beta = 1/(n + 1)``."""
        if n < 2:
            raise DomainError("n must be at least 2")
        return cls(1.0 / n, 1.0 / (n + 1))

    @property
    def A(self) -> float:
        """``ln((1 - alpha)/(1 - beta)) / ln beta``."""
        return math.log1p((self.beta - self.alpha) / (1.0 - self.beta)) / math.log(self.beta)

    @property
    def B(self) -> float:
        """``ln alpha / ln beta - 1``."""
        return math.log1p((self.alpha - self.beta) / self.beta) / math.log(self.beta)


@dataclass(frozen=True)
class GameSolution:
    a_sharp: int
    b_sharp: int
    value: float
    log_gap_alpha: float
    log_gap_beta: float


@dataclass(frozen=True)
class JointLevelPoint:
    which: str
    a: int
    b: int
    eta: float
    delta: DiscountFactor


def _combine(lg_a, lg_b, ls_b):
    """``(1 - s_b) / (1 - s_a s_b)`` from ``log(1 - s_a)``, ``log(1 - s_b)``, ``log s_b``."""
    z = np.asarray(lg_a - lg_b + ls_b, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.where(z > 0, np.exp(-z) / (1.0 + np.exp(-z)), 1.0 / (1.0 + np.exp(z)))
    return out if out.ndim else float(out)


def _parts(alpha, d, level):
    if d.delta == 0.0:
        z = np.zeros(np.shape(level))
        return z, z - np.inf
    return log_gap(alpha, d.log_complement, level), log_score(alpha, d.log_complement, level)


def profile_payoff(params: JumpGameParams, delta, a, b) -> float:
    """Player 1's payoff when she uses threshold ``a`` and player 2 uses ``b``."""
    d = as_discount(delta)
    _check_level(a)
    _check_level(b)
    lg_a, _ = _parts(params.alpha, d, a)
    lg_b, ls_b = _parts(params.beta, d, b)
    return _combine(lg_a, lg_b, ls_b)


def payoff_table(params: JumpGameParams, delta, a_range, b_range) -> np.ndarray:
    d = as_discount(delta)
    a = np.asarray(list(a_range), dtype=float)
    b = np.asarray(list(b_range), dtype=float)
    if np.any(a < 0) or np.any(b < 0):
        raise DomainError("threshold levels must be non-negative")
    lg_a, _ = _parts(params.alpha, d, a)
    lg_b, ls_b = _parts(params.beta, d, b)
    return _combine(lg_a[:, None], lg_b[None, :], ls_b[None, :])


def solve_game(params: JumpGameParams, delta) -> GameSolution:
    """Equilibrium thresholds and value ``(1 - v_beta)/(1 - v_alpha v_beta)``.

    Each player's best threshold does not depend on the opponent, so the
    pair of one-player optima is an equilibrium in dominant strategies.
    """
    d = as_discount(delta)
    ra = mdp_value(MdpParams(params.alpha), d)
    rb = mdp_value(MdpParams(params.beta), d)
    lg_a, _ = _parts(params.alpha, d, ra.argmax)
    lg_b, ls_b = _parts(params.beta, d, rb.argmax)
    return GameSolution(ra.argmax, rb.argmax, _combine(lg_a, lg_b, ls_b), float(lg_a), float(lg_b))


def asymptotic_bounds(params: JumpGameParams) -> dict:
    """Limit bounds on the value along the two joint level sets.

    ``liminf >= 1/(1 + 2 sqrt(beta**.5 (1-beta)/(1-alpha)))`` where player 1's
    threshold is exact, and ``limsup <= 1/(1 + sqrt((1-beta)/(alpha**.5 (1-alpha)))/2)``
    where player 2's is.
    """
    a, b = params.alpha, params.beta
    low = 1.0 / (1.0 + 2.0 * math.sqrt(math.sqrt(b) * (1 - b) / (1 - a)))
    high = 1.0 / (1.0 + 0.5 * math.sqrt((1 - b) / (math.sqrt(a) * (1 - a))))
    return {"delta1_liminf_lower": low, "delta2_limsup_upper": high}


def _bounds_vec(n):
    a = 1.0 / n
    b = 1.0 / (n + 1.0)
    low = 1.0 / (1.0 + 2.0 * np.sqrt(np.sqrt(b) * (1 - b) / (1 - a)))
    high = 1.0 / (1.0 + 0.5 * np.sqrt((1 - b) / (np.sqrt(a) * (1 - a))))
    return low, high


def oscillation_parameters(low_target: float, high_target: float, n_cap: int = 10**6):
    """Smallest ``n >= 2`` whose limit bounds beat both targets strictly.

    With ``alpha = 1/n`` and ``beta = 1/(n+1)`` this asks for
    ``liminf > high_target`` on the first joint set and
    ``limsup < low_target`` on the second.
    """
    if not 0.0 < low_target < high_target < 1.0:
        raise DomainError("need 0 < low_target < high_target < 1")
    start = 2
    while start <= n_cap:
        n = np.arange(start, min(start + SCAN_CHUNK, n_cap + 1), dtype=float)
        low, high = _bounds_vec(n)
        B = -np.log1p(1.0 / n) / np.log(n + 1.0)
        ok = (low > high_target) & (high < low_target) & (B < 0.25)
        hit = np.flatnonzero(ok)
        if hit.size:
            m = int(n[hit[0]])
            return m, 1.0 / m, 1.0 / (m + 1)
        start += SCAN_CHUNK
    raise DomainError(f"no n <= {n_cap} meets the targets ({low_target}, {high_target})")


def find_parameters(epsilon: float, n_cap: int = 10**6):
    """Smallest ``n`` with limit bounds ``>= 1 - epsilon`` and ``<= epsilon`` (strictly)."""
    if not 0.0 < epsilon < 0.5:
        raise DomainError("epsilon must lie in (0, 1/2)")
    return oscillation_parameters(epsilon, 1.0 - epsilon, n_cap)


def joint_delta_enumerate(params: JumpGameParams, which: str, count: int, start: int = 0,
                          scan_cap: int = 10**9) -> list:
    """First ``count`` discount factors of a joint level set, increasing in delta.

    ``"Delta1"``: player 1's critical threshold is the integer ``a`` and player
    2's has fractional part in ``[1/4, 3/4]``.  ``"Delta2"``: the roles swap.
    Each point carries ``delta = 1 - (1 - p) p**(2 level)`` for the exact
    player and ``(b, eta)`` (or ``(a, eta)``) with ``eta in [1/2, 3/2]`` for
    the other.
    """
    if which not in ("Delta1", "Delta2"):
        raise DomainError("which must be 'Delta1' or 'Delta2'")
    if params.B >= 0.25:
        raise DomainError(f"B(alpha, beta) = {params.B:.4g} must be below 1/4")
    if count < 0 or start < 0:
        raise DomainError("count and start must be non-negative")
    if which == "Delta1":
        p, c = params.alpha, params.beta
    else:
        p, c = params.beta, params.alpha
    lp, lc_ = math.log(p), math.log(c)
    l1mp = math.log1p(-p)
    # companion threshold at level m: c0 + m (1 + kappa)
    c0 = math.log1p((c - p) / (1.0 - c)) / (2.0 * lc_)
    kappa = math.log1p((p - c) / c) / lc_
    out = []
    m0 = start
    while len(out) < count:
        if m0 - start > scan_cap:
            raise DomainError(f"fewer than {count} points within {scan_cap} levels")
        m = np.arange(m0, m0 + SCAN_CHUNK, dtype=float)
        f = frac(c0 + m * kappa)
        cand = np.flatnonzero((f >= 0.25 - 1e-7) & (f <= 0.75 + 1e-7) & (c0 + m * (1.0 + kappa) >= 0))
        for idx in cand:
            level = int(m[idx])
            d = DiscountFactor.from_log_complement(l1mp + 2 * level * lp)
            if d.log_complement > math.log1p(-c):
                continue
            crit = critical_threshold(c, d)
            fr = crit - math.floor(crit)
            if not 0.25 <= fr <= 0.75:
                continue
            other = int(math.floor(crit))
            eta = 2.0 * (crit - other)
            a, b = (level, other) if which == "Delta1" else (other, level)
            out.append(JointLevelPoint(which, a, b, eta, d))
            if len(out) == count:
                break
        m0 += SCAN_CHUNK
    return out


def check_joint_point(params: JumpGameParams, point: JointLevelPoint) -> bool:
    """Both level-set memberships of a point, recomputed from its delta."""
    ta = level_set_classify(params.alpha, point.delta)
    tb = level_set_classify(params.beta, point.delta)
    if point.which == "Delta1":
        return ta.tag == "Delta1" and tb.tag == "Delta2"
    return ta.tag == "Delta2" and tb.tag == "Delta1"


# value-iteration oracle ----------------------------------------------------------


def build_jump_game(params: JumpGameParams, L: int):
    """Finite truncation of the jump game on risk levels ``0..L``.

    Returns ``(game, controllers, start_index)``.  Waiting at level ``L`` keeps
    the level at ``L``.
    """
    L = _check_level(L)
    states = [f"1:{a}" for a in range(L + 1)] + [f"2:{b}" for b in range(L + 1)] + ["0*", "1*"]
    K = len(states)
    one = lambda a: a
    two = lambda b: L + 1 + b
    lose, win = 2 * L + 2, 2 * L + 3
    T = np.zeros((K, 2, 2, K))
    U = np.zeros((K, 2, 2))
    controllers = np.zeros(K, dtype=int)
    for lvl in range(L + 1):
        k = one(lvl)
        controllers[k] = 1
        T[k, 0, :, one(min(lvl + 1, L))] += params.alpha
        T[k, 0, :, one(0)] += 1.0 - params.alpha
        risk = params.alpha ** lvl
        T[k, 1, :, lose] = risk
        T[k, 1, :, two(0)] = 1.0 - risk
        k = two(lvl)
        controllers[k] = 2
        U[k] = 1.0
        T[k, :, 0, two(min(lvl + 1, L))] += params.beta
        T[k, :, 0, two(0)] += 1.0 - params.beta
        risk = params.beta ** lvl
        T[k, :, 1, win] = risk
        T[k, :, 1, one(0)] = 1.0 - risk
    T[lose, :, :, lose] = 1.0
    T[win, :, :, win] = 1.0
    U[win] = 1.0
    game = FiniteStochasticGame(states, ["W", "J"], ["W", "J"], T, U, 1.0 - U,
                                metadata={"alpha": params.alpha, "beta": params.beta, "L": L})
    return game, controllers, two(0)


def zerosum_vi_oracle(params: JumpGameParams, delta, L: int = 80, cfg: VIConfig = VIConfig()) -> float:
    """Game value from value iteration on the truncated jump game."""
    d = as_discount(delta)
    if d.delta > 0.999:
        raise DomainError("the value-iteration oracle is meant for delta <= 0.999")
    sol = solve_game(params, d)
    if max(sol.a_sharp, sol.b_sharp) >= L - 5:
        raise DomainError(f"level cap L = {L} too small for thresholds ({sol.a_sharp}, {sol.b_sharp})")
    game, controllers, start = build_jump_game(params, L)
    res = single_controller_vi(game, controllers, delta, cfg)
    return float(res.values[start])
