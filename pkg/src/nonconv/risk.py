"""Geometric risk chain on the grid ``{alpha**a}``.

The risk starts at 1 in period 1.  Each later period it is multiplied by
``alpha`` with probability ``alpha`` and reset to 1 otherwise.  ``T_a`` is the
first period in which the risk is at most ``alpha**a``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .numerics import DomainError, as_discount, check_probability, horizon_cap, log1mexp, logaddexp
from .solvers import MCResult, as_stream, mc_engine


@dataclass(frozen=True)
class RiskChain:
    alpha: float

    def __post_init__(self):
        check_probability("alpha", self.alpha)

    @property
    def log_alpha(self):
        return math.log(self.alpha)


def _check_level(a):
    if isinstance(a, (bool, np.bool_)) or int(a) != a or a < 0:
        raise DomainError(f"level must be a non-negative integer, got {a!r}")
    return int(a)


def log_hit_factor(alpha: float, log_complement, a):
    """``log E(delta**T_a)`` for real ``a >= 0`` (vectorised over ``a``)."""
    la = math.log(alpha)
    l1ma = math.log1p(-alpha)
    ld = log1mexp(log_complement)
    a = np.asarray(a, dtype=float)
    num = logaddexp(l1ma, la + log_complement)  # log(1 - alpha delta)
    den = np.logaddexp(l1ma, log_complement - a * la - (a + 1.0) * ld)
    out = num - den
    return out if out.ndim else float(out)


def hit_factor(chain: RiskChain, delta, a) -> float:
    """Closed form ``E(delta**T_a) = (1 - alpha delta) / (1 - alpha + (1-delta) alpha**-a delta**-(a+1))``."""
    d = as_discount(delta)
    a = _check_level(a)
    if d.delta == 0.0:
        return 0.0
    return math.exp(log_hit_factor(chain.alpha, d.log_complement, a))


def hit_factor_recursion(chain: RiskChain, delta, a_max: int) -> np.ndarray:
    """``E(delta**T_a)`` for ``a = 0..a_max`` by first-step analysis.

    ``m_0 = delta`` and ``m_a = alpha delta m_{a-1} / (1 - (1 - alpha) m_{a-1})``.
    """
    d = as_discount(delta)
    a_max = _check_level(a_max)
    alpha = chain.alpha
    out = np.empty(a_max + 1)
    m = d.delta
    out[0] = m
    for a in range(1, a_max + 1):
        # 1 - (1 - alpha) m computed as alpha + (1 - alpha)(1 - m) to avoid cancellation
        m = alpha * d.delta * m / (alpha + (1.0 - alpha) * (1.0 - m))
        out[a] = m
    return out


def expected_hitting_time(chain: RiskChain, a) -> float:
    """``E(T_a)`` with ``E(T_0) = 1`` and ``E(T_a) = E(T_{a-1}) / alpha + 1``."""
    a = _check_level(a)
    t = 1.0
    for _ in range(a):
        t = t / chain.alpha + 1.0
    return t


def _hit_sampler(chain, d, a, t_max, use_numba):
    alpha = chain.alpha
    la = chain.log_alpha
    ld = d.log_delta
    p = math.exp(a * la)
    log1m_p = math.log1p(-p) if p < 1.0 else -math.inf
    one_minus_p = -math.expm1(a * la)

    def sampler(rng, n):
        # failed runs before the first run of `a` successes: geometric(alpha**a)
        u = 1.0 - rng.random(n)
        with np.errstate(divide="ignore", invalid="ignore"):
            f = np.floor(np.log(u) / log1m_p)
        f = np.where(np.isfinite(f), f, 0.0)
        f = np.minimum(f, t_max + 1).astype(np.int64)
        eligible = 1 + f + a <= t_max
        u_len = rng.random(int(f[eligible].sum()))
        return _kernels.hit_times(f, u_len, a, la, one_minus_p, ld, t_max, use_numba=use_numba)

    return sampler


def hit_factor_mc(chain: RiskChain, delta, a, samples: int, seed, *, use_numba=None,
                  chunk_size: int = 20_000) -> MCResult:
    """Monte Carlo estimate of ``E(delta**T_a)``.

    Trajectories are cut at ``T_max = ceil(ln 1e-12 / ln delta)``, which biases
    the estimate by less than ``1e-12``.
    """
    d = as_discount(delta)
    a = _check_level(a)
    if samples < 1:
        raise DomainError("samples must be positive")
    if d.delta == 0.0:
        return MCResult(0.0, 0.0, samples)
    if a == 0:
        return MCResult(d.delta, 0.0, samples)
    t_max = horizon_cap(d)
    return mc_engine(_hit_sampler(chain, d, a, t_max, use_numba), samples, as_stream(seed), chunk_size)


def simulate_hitting_times(chain: RiskChain, a: int, n: int, rng: np.random.Generator,
                           t_cap: int = 10_000) -> np.ndarray:
    """Step-by-step simulation of ``T_a`` (reference implementation, small ``n``)."""
    a = _check_level(a)
    out = np.empty(n, dtype=np.int64)
    for m in range(n):
        level, t = 0, 1
        while level < a and t < t_cap:
            t += 1
            level = level + 1 if rng.random() < chain.alpha else 0
        out[m] = t
    return out
