"""Hot loops: hitting-time sampling, hidden-game trajectories, Bellman sweeps.

Each kernel has a plain loop version (compiled with ``numba.njit`` when
available) and a vectorised numpy version.  Both consume the same pre-drawn
uniforms, so they return the same samples.  Set ``NONCONV_DISABLE_NUMBA=1`` to
force the numpy path.
"""
from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("NONCONV_DISABLE_NUMBA", "") in ("", "0")

JUMP_TOL = 1e-9


def _jit(fn):
    if not NUMBA_AVAILABLE:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


def _pick(use_numba):
    return USE_NUMBA if use_numba is None else (use_numba and NUMBA_AVAILABLE)


# hitting times of the risk chain ------------------------------------------


def _hit_loop(fail_counts, u_len, a, cuts, log_delta, t_max, out):
    pos = 0
    for i in range(fail_counts.shape[0]):
        f = fail_counts[i]
        if 1 + f + a > t_max:
            out[i] = 0.0
            continue
        t = 1 + a + f
        for m in range(f):
            u = u_len[pos + m]
            length = 0
            while length < a - 1 and u >= cuts[length]:
                length += 1
            t += length
            if t > t_max:
                break
        pos += f
        out[i] = math.exp(t * log_delta) if t <= t_max else 0.0


_hit_loop_jit = _jit(_hit_loop)


def _hit_numpy(fail_counts, u_len, a, cuts, log_delta, t_max, out):
    eligible = 1 + fail_counts + a <= t_max
    counts = np.where(eligible, fail_counts, 0)
    lengths = np.searchsorted(cuts, u_len, side="right")
    ends = np.cumsum(counts)
    csum = np.concatenate(([0], np.cumsum(lengths)))
    total = (csum[ends] - csum[ends - counts]).astype(float)
    t = 1.0 + a + counts + total
    keep = eligible & (t <= t_max)
    out[:] = np.where(keep, np.exp(np.where(keep, t, 0.0) * log_delta), 0.0)


def hit_times(fail_counts, u_len, a, log_alpha, one_minus_p, log_delta, t_max, *, use_numba=None):
    """Discounted hitting factors ``delta**T`` (zero past ``t_max``).

    ``fail_counts[i]`` is the number of failed runs before the first run of
    ``a`` successes; ``u_len`` holds one uniform per failed run of every
    eligible sample, in sample order.  A failed run has ``k`` successes when
    its uniform lies between the ``k``-th and ``k+1``-th cut point
    ``(1 - alpha**k) / (1 - alpha**a)``.
    """
    a = int(a)
    k = np.arange(1, max(a, 1), dtype=float)
    cuts = -np.expm1(k * float(log_alpha)) / float(one_minus_p) if a > 1 else np.empty(0)
    out = np.empty(fail_counts.shape[0])
    fn = _hit_loop_jit if _pick(use_numba) else _hit_numpy
    fn(fail_counts, u_len, a, cuts, float(log_delta), int(t_max), out)
    return out


# hidden-game trajectories ---------------------------------------------------


def _hsg_loop(q, cum, payoff, absorbing, init_cum, init_pi, controller, risk_state,
              threshold, grid_base, delta, uniforms, out_pay, out_err):
    n, horizon = uniforms.shape
    n_states = q.shape[0]
    n_signals = q.shape[4]
    ks = n_states * n_signals
    comp = 1.0 - delta
    belief = np.empty(n_states)
    new = np.empty(n_states)
    for m in range(n):
        u = uniforms[m, 0]
        idx = 0
        for c in range(ks):
            if init_cum[c] <= u:
                idx += 1
        if idx > ks - 1:
            idx = ks - 1
        k = idx // n_signals
        s = idx % n_signals
        norm = 0.0
        for h in range(n_states):
            belief[h] = init_pi[h, s]
            norm += belief[h]
        for h in range(n_states):
            belief[h] = belief[h] / norm
        weight = 1.0
        total = 0.0
        err = 0.0
        for t in range(1, horizon + 1):
            i = 0
            j = 0
            ctrl = controller[s]
            if ctrl >= 0:
                jump = 1 if belief[risk_state[s]] <= threshold[s] * (1.0 + 1e-9) else 0
                if ctrl == 0:
                    i = jump
                else:
                    j = jump
            if absorbing[k]:
                total += weight * payoff[k, i, j]
                break
            total += weight * comp * payoff[k, i, j]
            weight *= delta
            if t == horizon:
                break
            u = uniforms[m, t]
            idx = 0
            for c in range(ks):
                if cum[k, i, j, c] <= u:
                    idx += 1
            if idx > ks - 1:
                idx = ks - 1
            k2 = idx // n_signals
            s2 = idx % n_signals
            norm = 0.0
            for h2 in range(n_states):
                acc = 0.0
                for h in range(n_states):
                    acc += belief[h] * q[h, i, j, h2, s2]
                new[h2] = acc
                norm += acc
            for h in range(n_states):
                belief[h] = new[h] / norm
            k = k2
            s = s2
            if controller[s] >= 0:
                p = belief[risk_state[s]]
                base = grid_base[s]
                level = round(math.log(p) / math.log(base))
                d = abs(p - base ** level)
                if d > err:
                    err = d
        out_pay[m] = total
        out_err[m] = err


_hsg_loop_jit = _jit(_hsg_loop)


def _count_le(cum_rows, u):
    idx = np.zeros(u.shape[0], dtype=np.int64)
    for c in range(cum_rows.shape[1]):
        idx += cum_rows[:, c] <= u
    return np.minimum(idx, cum_rows.shape[1] - 1)


def _hsg_numpy(q, cum, payoff, absorbing, init_cum, init_pi, controller, risk_state,
               threshold, grid_base, delta, uniforms, out_pay, out_err):
    n, horizon = uniforms.shape
    n_states = q.shape[0]
    n_signals = q.shape[4]
    comp = 1.0 - delta
    idx = _count_le(np.broadcast_to(init_cum, (n, init_cum.shape[0])), uniforms[:, 0])
    k = idx // n_signals
    s = idx % n_signals
    belief = init_pi[:, s].T.copy()
    norm = np.zeros(n)
    for h in range(n_states):
        norm += belief[:, h]
    belief /= norm[:, None]
    weight = np.ones(n)
    total = np.zeros(n)
    err = np.zeros(n)
    alive = np.ones(n, dtype=bool)
    rows = np.arange(n)
    for t in range(1, horizon + 1):
        ctrl = controller[s]
        risk = belief[rows, np.maximum(risk_state[s], 0)]
        jump = (risk <= threshold[s] * (1.0 + 1e-9)).astype(np.int64)
        i = np.where(ctrl == 0, jump, 0)
        j = np.where(ctrl == 1, jump, 0)
        pay = payoff[k, i, j]
        absorbed = alive & absorbing[k]
        total = np.where(absorbed, total + weight * pay, total)
        alive &= ~absorbed
        total = np.where(alive, total + weight * comp * pay, total)
        weight = weight * delta
        if t == horizon or not alive.any():
            break
        idx = _count_le(cum[k, i, j], uniforms[:, t])
        k2 = idx // n_signals
        s2 = idx % n_signals
        sel = q[:, i, j, :, s2]  # (n, from, to)
        new = np.zeros((n, n_states))
        for h in range(n_states):
            new += belief[:, h, None] * sel[:, h, :]
        norm = np.zeros(n)
        for h in range(n_states):
            norm += new[:, h]
        with np.errstate(invalid="ignore", divide="ignore"):
            new = new / norm[:, None]
        belief = np.where(alive[:, None], new, belief)
        k = np.where(alive, k2, k)
        s = np.where(alive, s2, s)
        has = alive & (controller[s] >= 0)
        if has.any():
            p = belief[rows, np.maximum(risk_state[s], 0)]
            base = grid_base[s]
            with np.errstate(invalid="ignore", divide="ignore"):
                level = np.round(np.log(p) / np.log(base))
                d = np.abs(p - np.power(base, level))
            err = np.where(has & (d > err), d, err)
    out_pay[:] = total
    out_err[:] = err


def hsg_paths(q, cum, payoff, absorbing, init_cum, init_pi, controller, risk_state,
              threshold, grid_base, delta, uniforms, *, use_numba=None):
    """Simulate belief-threshold play; return discounted payoffs and grid errors."""
    n = uniforms.shape[0]
    out_pay = np.empty(n)
    out_err = np.empty(n)
    fn = _hsg_loop_jit if _pick(use_numba) else _hsg_numpy
    fn(q, cum, payoff, absorbing, init_cum, init_pi, controller, risk_state,
       threshold, grid_base, float(delta), uniforms, out_pay, out_err)
    return out_pay, out_err


# Bellman sweeps for single-controller games --------------------------------


def _vi_loop(P, R, sense, delta, comp, V, tol, max_iter, policy):
    n_states, n_actions, _ = P.shape
    new = np.empty(n_states)
    resid = math.inf
    it = 0
    while it < max_iter:
        it += 1
        resid = 0.0
        for k in range(n_states):
            best = 0.0
            arg = 0
            for a in range(n_actions):
                acc = 0.0
                for k2 in range(n_states):
                    acc += P[k, a, k2] * V[k2]
                val = comp * R[k, a] + delta * acc
                if a == 0 or (sense[k] > 0 and val > best) or (sense[k] < 0 and val < best):
                    best = val
                    arg = a
            new[k] = best
            policy[k] = arg
            d = abs(best - V[k])
            if d > resid:
                resid = d
        for k in range(n_states):
            V[k] = new[k]
        if resid <= tol:
            break
    return it, resid


_vi_loop_jit = _jit(_vi_loop)


def _vi_numpy(P, R, sense, delta, comp, V, tol, max_iter, policy):
    it = 0
    resid = math.inf
    maximise = sense > 0
    while it < max_iter:
        it += 1
        Q = comp * R + delta * (P @ V)
        pol = np.where(maximise, np.argmax(Q, axis=1), np.argmin(Q, axis=1))
        new = Q[np.arange(Q.shape[0]), pol]
        resid = float(np.max(np.abs(new - V)))
        V[:] = new
        policy[:] = pol
        if resid <= tol:
            break
    return it, resid


def value_iteration(P, R, sense, delta, comp, tol, max_iter, V0=None, *, use_numba=None):
    """Iterate ``V <- opt_a [comp * R + delta * P V]`` until the residual is ``<= tol``.

    ``sense[k]`` is ``+1`` for a maximising controller and ``-1`` for a
    minimising one.  Returns ``(V, policy, iterations, residual)``.
    """
    P = np.ascontiguousarray(P, dtype=float)
    R = np.ascontiguousarray(R, dtype=float)
    sense = np.ascontiguousarray(sense, dtype=np.int64)
    V = np.zeros(P.shape[0]) if V0 is None else np.array(V0, dtype=float)
    policy = np.zeros(P.shape[0], dtype=np.int64)
    fn = _vi_loop_jit if _pick(use_numba) else _vi_numpy
    it, resid = fn(P, R, sense, float(delta), float(comp), V, float(tol), int(max_iter), policy)
    return V, policy, int(it), float(resid)
