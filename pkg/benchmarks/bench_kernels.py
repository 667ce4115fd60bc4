"""Time the numba kernels against the numpy fallback.

Each case is warmed up once (JIT compilation is excluded), then timed as the
best of ``--repeat`` runs.  Both paths see the same uniforms, so the results
must agree and are checked.

    python3 benchmarks/bench_kernels.py [--quick] [--json out.json]
"""
from __future__ import annotations

import argparse
import json
import time

import numpy as np

from nonconv import _kernels
from nonconv.hidden import build_gamma_star, gamma_star_policy, hsg_simulate
from nonconv.jump import JumpGameParams, build_jump_game
from nonconv.risk import RiskChain, hit_factor_mc
from nonconv.solvers import VIConfig, single_controller_vi


def case_hitting(samples):
    chain = RiskChain(0.3)
    return lambda nb: hit_factor_mc(chain, 0.99, 6, samples, 1, use_numba=nb).mean


def case_hidden(samples):
    params = JumpGameParams(0.2, 0.3)
    game = build_gamma_star(params)
    policy = gamma_star_policy(params, 1, 1)
    return lambda nb: hsg_simulate(game, policy, 0.9, samples, 1, use_numba=nb).estimate.mean


def case_vi(levels):
    game, controllers, start = build_jump_game(JumpGameParams(0.2, 0.3), levels)
    return lambda nb: single_controller_vi(game, controllers, 0.999, VIConfig(use_numba=nb)).values[start]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="smaller problem sizes")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="also write the timings here")
    args = ap.parse_args()
    if not _kernels.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed")
    scale = 10 if args.quick else 1
    cases = {
        "hitting times (alpha=.3, delta=.99, a=6)": case_hitting(200_000 // scale),
        "hidden game paths (delta=.9)": case_hidden(50_000 // scale),
        "value iteration (jump game, L=80, delta=.999)": case_vi(80),
    }
    rows = []
    print(f"{'kernel':48s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s}")
    for name, run in cases.items():
        run(True)  # compile
        t_nb, v_nb = best_of(lambda: run(True), args.repeat)
        t_np, v_np = best_of(lambda: run(False), args.repeat)
        if not np.isclose(v_nb, v_np, rtol=1e-10, atol=1e-12):
            raise SystemExit(f"{name}: numba {v_nb!r} and numpy {v_np!r} disagree")
        rows.append({"kernel": name, "numba_s": t_nb, "numpy_s": t_np, "speedup": t_np / t_nb})
        print(f"{name:48s} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:8.1f}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
