"""One-player stopping problem driven by the risk chain.

The decision maker waits while the risk is high and jumps once it is at most
``alpha**a``.  A jump succeeds with probability ``1 - risk`` and then pays
``reward`` forever; failure pays nothing forever.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import (DiscountFactor, DomainError, as_discount, check_probability, frac,
                       log1mexp, logaddexp, logsubexp)
from .risk import _check_level, log_hit_factor
from .solvers import VIConfig, mdp_value_iteration

FULL_SCAN_LIMIT = 1 << 17
WINDOW = 64


@dataclass(frozen=True)
class MdpParams:
    alpha: float
    reward: float = 1.0

    def __post_init__(self):
        check_probability("alpha", self.alpha)
        if not self.reward > 0:
            raise DomainError("reward must be positive")


@dataclass(frozen=True)
class MdpValue:
    value: float
    argmax: int
    log_gap: float  # log(1 - v) for a unit reward
    windowed: bool = False


@dataclass(frozen=True)
class LevelSetTag:
    tag: str  # "Delta1", "Delta2" or "Neither"
    a: int
    eta: float


# log-space score ----------------------------------------------------------------


def log_score(alpha, log_complement, a):
    """``log s(a)`` where ``s(a) = (1 - alpha**a) E(delta**T_a)``."""
    a = np.asarray(a, dtype=float)
    out = log1mexp(a * math.log(alpha)) + log_hit_factor(alpha, log_complement, a)
    return out if np.ndim(out) else float(out)


def log_gap(alpha, log_complement, a):
    """``log(1 - s(a))`` computed without cancellation.

    ``1 - s = [x (alpha**-a delta**-(a+1) - alpha + alpha**(a+1)) + alpha**a (1 - alpha)]
    / [1 - alpha + x alpha**-a delta**-(a+1)]`` with ``x = 1 - delta``.
    """
    la = math.log(alpha)
    l1ma = math.log1p(-alpha)
    lc = float(log_complement)
    ld = log1mexp(lc)
    a = np.asarray(a, dtype=float)
    if ld == -math.inf:
        out = np.zeros_like(a)
        return out if out.ndim else 0.0
    L1 = -a * la - (a + 1.0) * ld
    t1 = logaddexp(logsubexp(L1, la), (a + 1.0) * la)
    numer = np.logaddexp(lc + t1, a * la + l1ma)
    denom = np.logaddexp(l1ma, lc + L1)
    out = numer - denom
    return out if out.ndim else float(out)


def score(params: MdpParams, delta, a) -> float:
    """Discounted payoff of the threshold strategy that jumps at risk ``alpha**a``."""
    d = as_discount(delta)
    if not (np.isfinite(a) and a >= 0):
        raise DomainError("threshold level must be a non-negative real")
    if d.delta == 0.0:
        return 0.0
    ls = log_score(params.alpha, d.log_complement, a)
    if ls > -math.log(2):
        return params.reward * -math.expm1(log_gap(params.alpha, d.log_complement, a))
    return params.reward * math.exp(ls)


def _raw_threshold(alpha, d: DiscountFactor):
    return (d.log_complement - math.log1p(-alpha)) / (2.0 * math.log(alpha))


def critical_threshold(alpha: float, delta) -> float:
    """``a* = [ln(1 - delta) - ln(1 - alpha)] / (2 ln alpha)``, defined for ``delta >= alpha``."""
    check_probability("alpha", alpha)
    d = as_discount(delta)
    # delta >= alpha  <=>  1 - delta <= 1 - alpha
    if d.log_complement > math.log1p(-alpha):
        raise DomainError(f"critical threshold needs delta >= alpha = {alpha}")
    return max(0.0, _raw_threshold(alpha, d))


def delta_from_level(alpha: float, a: int, eta: float = 0.0) -> DiscountFactor:
    """``delta = 1 - (1 - alpha) alpha**(2a + eta)``."""
    check_probability("alpha", alpha)
    a = _check_level(a)
    if not -1.5 <= eta <= 1.5:
        raise DomainError("eta must lie in [-3/2, 3/2]")
    if 2 * a + eta < 0:
        raise DomainError("2a + eta must be non-negative so that delta >= alpha")
    return DiscountFactor.from_log_complement(math.log1p(-alpha) + (2 * a + eta) * math.log(alpha))


def level_set_classify(alpha: float, delta, tol: float = 1e-9) -> LevelSetTag:
    """Locate ``delta`` relative to the grid where ``a*`` is an integer."""
    c = critical_threshold(alpha, delta)
    nearest = int(np.rint(c))
    eta = 2.0 * (c - nearest)
    if abs(c - nearest) <= tol:
        return LevelSetTag("Delta1", nearest, eta)
    f = frac(c)
    if 0.25 <= f <= 0.75:
        return LevelSetTag("Delta2", nearest, eta)
    return LevelSetTag("Neither", nearest, eta)


# optimisation over thresholds ---------------------------------------------------


def _best(alpha, lc, levels):
    ls = log_score(alpha, lc, levels)
    lg = log_gap(alpha, lc, levels)
    if np.max(ls) > -math.log(2):
        i = int(np.argmin(lg))
    else:
        i = int(np.argmax(ls))
    return i, ls, lg


def _window_certificate(alpha, lc, lo, hi, best_gap):
    """True when every level outside ``[lo, hi]`` has a larger gap than ``best_gap``."""
    la = math.log(alpha)
    ok = True
    if lo > 0:
        # s(a) <= 1 - alpha**a, so 1 - s(a) >= alpha**(lo - 1) for a < lo
        ok &= best_gap < (lo - 1) * la
    # for a > hi: 1 - s(a) >= (z - alpha x) / (1 - alpha + z), z = x alpha**-(hi + 1)
    lz = lc - (hi + 1) * la
    bound = logsubexp(lz, la + lc) - logaddexp(math.log1p(-alpha), lz)
    ok &= best_gap < bound
    return bool(ok)


def mdp_value(params: MdpParams, delta) -> MdpValue:
    """Best threshold value ``v = max_a s(a)`` and the smallest maximiser.

    Levels ``0..ceil(2 a*) + 64`` are scanned.  When that range is huge (very
    patient players) only a window of width 64 around ``a*`` is scanned, and a
    bound on the score outside the window certifies the result.
    """
    d = as_discount(delta)
    alpha = params.alpha
    if d.delta == 0.0:
        return MdpValue(0.0, 0, 0.0)
    lc = d.log_complement
    c = max(0.0, _raw_threshold(alpha, d))
    a_max = int(math.ceil(2 * c)) + WINDOW
    windowed = a_max > FULL_SCAN_LIMIT
    if not windowed:
        levels = np.arange(a_max + 1, dtype=float)
        i, ls, lg = _best(alpha, lc, levels)
        # tiny scores are resolved in log-score, large ones in log-gap
        bracketed = lg[-1] > lg[i] if ls[i] > -math.log(2) else ls[-1] < ls[i]
        if not bracketed:
            raise RuntimeError("threshold scan did not bracket the maximiser")
        a_best = i
    else:
        lo = max(0, int(math.floor(c)) - WINDOW)
        hi = int(math.ceil(c)) + WINDOW
        levels = np.arange(lo, hi + 1, dtype=float)
        i, ls, lg = _best(alpha, lc, levels)
        if not _window_certificate(alpha, lc, lo, hi, lg[i]):
            raise RuntimeError("window around the critical threshold is not certified")
        a_best = lo + i
    gap = float(lg[i])
    if ls[i] > -math.log(2):
        v = -math.expm1(gap)
    else:
        v = math.exp(ls[i])
    return MdpValue(params.reward * v, a_best, gap, windowed)


def asymptotic_ratio(params: MdpParams, delta) -> float:
    """``(1 - v) / sqrt(1 - delta)`` for a unit reward."""
    d = as_discount(delta)
    res = mdp_value(MdpParams(params.alpha), d)
    return math.exp(res.log_gap - 0.5 * d.log_complement)


@dataclass(frozen=True)
class ScoreBounds:
    a_star: float
    score: float
    lower: float
    upper: float
    off_grid_upper: float
    log_gap: float
    log_gap_lower: float
    log_gap_upper: float
    log_gap_off_grid: float
    holds: bool


def score_bounds(params: MdpParams, delta, slack: float = 1e-12) -> ScoreBounds:
    """Sandwich on the score at the critical threshold, plus the off-grid cap.

    With ``r = sqrt((1 - delta)/(1 - alpha))``::

        1 - 2 delta**(-a*-1) r <= s(a*) <= 1 - 2 r + 3 r**2
        s(a) <= 1 - alpha**(-1/4) r + r**2 (alpha + alpha**(-1/2))   if |a - a*| >= 1/4

    Everything is compared through ``log(1 - s)``.
    """
    d = as_discount(delta)
    alpha = params.alpha
    c = critical_threshold(alpha, d)
    lc = d.log_complement
    la = math.log(alpha)
    lr = 0.5 * (lc - math.log1p(-alpha))
    ld = d.log_delta
    g_upper = math.log(2.0) - (c + 1.0) * ld + lr
    two_r, three_r2 = math.log(2.0) + lr, math.log(3.0) + 2 * lr
    g_lower = logsubexp(two_r, three_r2) if two_r > three_r2 else -math.inf
    g_off = -0.25 * la + lr
    pen = 2 * lr + logaddexp(la, -0.5 * la)
    g_off = logsubexp(g_off, pen) if g_off > pen else -math.inf
    g = log_gap(alpha, lc, c)
    holds = (g_lower <= g + slack) and (g <= g_upper + slack)

    def s_of(lgap):
        return -math.expm1(lgap) if math.isfinite(lgap) else 1.0

    return ScoreBounds(c, s_of(g), s_of(g_upper), s_of(g_lower), s_of(g_off),
                       g, g_lower, g_upper, g_off, bool(holds))


# value-iteration oracle -----------------------------------------------------------


def mdp_vi_oracle(params: MdpParams, delta, L: int = 60, cfg: VIConfig = VIConfig()):
    """Optimal value by value iteration on levels ``0..L`` plus two absorbing states.

    Waiting at level ``L`` keeps the level at ``L`` with probability ``alpha``.
    Returns ``(value at level 0, jump decision per level)``.
    """
    d = as_discount(delta)
    alpha = params.alpha
    L = _check_level(L)
    if d.delta > 0.999:
        raise DomainError("the value-iteration oracle is meant for delta <= 0.999")
    best = mdp_value(MdpParams(alpha), d).argmax
    if best >= L - 5:
        raise DomainError(f"level cap L = {L} too small for optimal threshold {best} (need L >= {best + 5})")
    S = L + 3
    win, lose = L + 1, L + 2
    P = np.zeros((2, S, S))
    R = np.zeros((2, S))
    for a in range(L + 1):
        P[0, a, min(a + 1, L)] += alpha
        P[0, a, 0] += 1.0 - alpha
        risk = alpha ** a
        P[1, a, win] = 1.0 - risk
        P[1, a, lose] = risk
    for k in (win, lose):
        P[:, k, k] = 1.0
    R[:, win] = params.reward
    res = mdp_value_iteration(P, R, d, cfg)
    return float(res.values[0]), res.policy[: L + 1].astype(bool)
