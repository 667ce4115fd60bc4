"""Generic solvers: value iteration for one-controller games and Monte Carlo."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _kernels
from .core import FiniteStochasticGame
from .numerics import DiscountFactor, DomainError, as_discount


@dataclass(frozen=True)
class SeedStream:
    """Independent random stream ``stream_index`` derived from ``root_seed``.

    Streams are split with ``numpy.random.SeedSequence`` spawn keys, so
    distinct indices never share state.
    """

    root_seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.root_seed, spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.PCG64(seq))

    def child(self, index: int) -> "SeedStream":
        return SeedStream(self.root_seed, self.stream_index * 1_000_003 + index + 1)


def as_stream(seed) -> SeedStream:
    if isinstance(seed, SeedStream):
        return seed
    return SeedStream(int(seed), 0)


@dataclass(frozen=True)
class MCResult:
    mean: float
    stderr: float
    samples: int


def mc_engine(sampler: Callable[[np.random.Generator, int], np.ndarray], samples: int,
              stream, chunk_size: int = 20_000) -> MCResult:
    """Average ``sampler(rng, m)`` over ``samples`` draws taken in fixed-size chunks.

    ``sampler`` returns one discounted payoff per trajectory.  The chunking is
    fixed, so the result depends only on the stream and the sample count.
    """
    if samples < 1:
        raise DomainError("samples must be positive")
    rng = as_stream(stream).generator()
    parts = []
    left = samples
    while left:
        m = min(chunk_size, left)
        parts.append(np.asarray(sampler(rng, m), dtype=float))
        left -= m
    values = np.concatenate(parts)
    se = float(values.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return MCResult(float(values.mean()), se, samples)


# value iteration ---------------------------------------------------------------


@dataclass(frozen=True)
class VIConfig:
    tol: float = 1e-12
    max_iter: int = 10_000_000
    use_numba: bool | None = None


@dataclass
class VIResult:
    values: np.ndarray
    policy: np.ndarray
    iterations: int
    residual: float


def _vi_tolerance(d: DiscountFactor, tol: float) -> float:
    # Stop at residual tol * (1 - delta); the fixed-point error is then <= tol.
    return tol * d.complement


def mdp_value_iteration(P, R, delta, cfg: VIConfig = VIConfig()) -> VIResult:
    """Maximise normalised discounted reward.

    ``P`` has shape ``(A, S, S)`` and ``R`` shape ``(A, S)``.
    """
    d = as_discount(delta)
    P = np.asarray(P, dtype=float)
    R = np.asarray(R, dtype=float)
    if P.ndim != 3 or P.shape[1] != P.shape[2] or R.shape != P.shape[:2]:
        raise DomainError("expected P of shape (A, S, S) and R of shape (A, S)")
    Ps = np.transpose(P, (1, 0, 2))
    Rs = R.T
    sense = np.ones(P.shape[1], dtype=np.int64)
    V, pol, it, res = _kernels.value_iteration(Ps, Rs, sense, d.delta, d.complement,
                                               _vi_tolerance(d, cfg.tol), cfg.max_iter,
                                               use_numba=cfg.use_numba)
    if res > _vi_tolerance(d, cfg.tol):
        raise RuntimeError(f"value iteration stopped after {it} sweeps with residual {res:g}")
    return VIResult(V, pol, it, res)


def single_controller_vi(game: FiniteStochasticGame, controllers, delta,
                         cfg: VIConfig = VIConfig()) -> VIResult:
    """Value of a zero-sum game in which one player acts in each state.

    ``controllers[k]`` is 1 (player 1 maximises ``payoff1``), 2 (player 2
    minimises it) or 0 (nobody acts).  The non-controlling player's action
    must not affect payoffs or transitions.
    """
    d = as_discount(delta)
    K, I, J = game.transition.shape[:3]
    controllers = np.asarray(controllers, dtype=int)
    if controllers.shape != (K,):
        raise DomainError("one controller per state is required")
    n_act = max(I, J)
    P = np.zeros((K, n_act, K))
    R = np.zeros((K, n_act))
    sense = np.ones(K, dtype=np.int64)
    for k in range(K):
        T, U = game.transition[k], game.payoff1[k]
        c = controllers[k]
        if c == 1:
            if not (np.all(T == T[:, :1]) and np.all(U == U[:, :1])):
                raise DomainError(f"state {game.states[k]!r}: player 2 affects play in a player-1 state")
            rows, urow = T[:, 0], U[:, 0]
        elif c == 2:
            if not (np.all(T == T[:1]) and np.all(U == U[:1])):
                raise DomainError(f"state {game.states[k]!r}: player 1 affects play in a player-2 state")
            rows, urow = T[0], U[0]
            sense[k] = -1
        elif c == 0:
            if not (np.all(T == T[:1, :1]) and np.all(U == U[:1, :1])):
                raise DomainError(f"state {game.states[k]!r} has no controller but actions matter")
            rows, urow = T[:1, 0], U[:1, 0]
        else:
            raise DomainError(f"controller must be 0, 1 or 2, got {c}")
        m = rows.shape[0]
        P[k, :m] = rows
        R[k, :m] = urow
        P[k, m:] = rows[-1]
        R[k, m:] = urow[-1]
    V, pol, it, res = _kernels.value_iteration(P, R, sense, d.delta, d.complement,
                                               _vi_tolerance(d, cfg.tol), cfg.max_iter,
                                               use_numba=cfg.use_numba)
    if res > _vi_tolerance(d, cfg.tol):
        raise RuntimeError(f"value iteration stopped after {it} sweeps with residual {res:g}")
    return VIResult(V, pol, it, res)
