"""Command-line front end.

Every subcommand builds a report envelope (command, parameters, a git-style
hash of the inputs, seed, result rows and certificates) and writes it as JSON
or CSV.  Exit status: 0 on success, 2 on a parameter-domain violation, 3 when
a requested certificate fails.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import hashlib
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import classic, core, hidden, jump, mdp, risk
from .numerics import EXPLICIT_COMPLEMENT_BELOW, DiscountFactor, DomainError

log = logging.getLogger("nonconv")

EXIT_OK, EXIT_DOMAIN, EXIT_CERT = 0, 2, 3


# report envelope -----------------------------------------------------------------


def _plain(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (tuple, set)):
        return list(obj)
    if isinstance(obj, DiscountFactor):
        return {"delta": obj.delta, "one_minus_delta": obj.complement, "log_one_minus_delta": obj.log_complement}
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def content_hash(payload: dict) -> str:
    """Git blob hash of the canonical JSON encoding of ``payload``."""
    body = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=_plain).encode()
    return hashlib.sha1(b"blob %d\0" % len(body) + body).hexdigest()


@dataclass
class ReportEnvelope:
    command: str
    parameters: dict
    seed: int | None
    results: list = field(default_factory=list)
    certificates: list = field(default_factory=list)
    timestamp: str | None = None

    @property
    def input_hash(self) -> str:
        return content_hash({"command": self.command, "parameters": self.parameters, "seed": self.seed})

    def add_certificates(self, certs):
        for c in certs:
            self.certificates.append({"name": c.name, "margin": c.margin, "holds": c.holds})

    @property
    def passed(self) -> bool:
        return all(c["holds"] for c in self.certificates)

    def to_dict(self) -> dict:
        out = {"command": self.command, "parameters": self.parameters, "input_hash": self.input_hash,
               "seed": self.seed, "results": self.results, "certificates": self.certificates,
               "passed": self.passed}
        if self.timestamp is not None:
            out["timestamp"] = self.timestamp
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=_plain) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        keys = []
        for row in self.results:
            keys += [k for k in row if k not in keys]
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for row in self.results:
            w.writerow({k: _csv_cell(v) for k, v in row.items()})
        return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple, dict, np.ndarray)):
        return json.dumps(v, default=_plain)
    return v


# argument helpers -------------------------------------------------------------------


def discount_from_args(args, required: bool = True):
    given = [n for n in ("delta", "one_minus_delta", "log_one_minus_delta") if getattr(args, n, None) is not None]
    if len(given) > 1:
        raise DomainError("give only one of --delta, --one-minus-delta, --log-one-minus-delta")
    if not given:
        if required:
            raise DomainError("a discount factor is required (--delta, --one-minus-delta or --log-one-minus-delta)")
        return None
    if given[0] == "delta":
        d = DiscountFactor.from_delta(args.delta)
        if d.complement < EXPLICIT_COMPLEMENT_BELOW:
            raise DomainError("1 - delta < 1e-12 loses precision as --delta; use --one-minus-delta")
        return d
    if given[0] == "one_minus_delta":
        return DiscountFactor.from_complement(args.one_minus_delta)
    return DiscountFactor.from_log_complement(args.log_one_minus_delta)


def _add_discount(p, required=True):
    g = p.add_argument_group("discount factor" + ("" if required else " (optional)"))
    g.add_argument("--delta", type=float)
    g.add_argument("--one-minus-delta", type=float)
    g.add_argument("--log-one-minus-delta", type=float)


def _add_pair(p):
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--n", type=int, help="use alpha = 1/n, beta = 1/(n+1)")


def _pair(args) -> jump.JumpGameParams:
    if args.n is not None:
        if args.alpha is not None or args.beta is not None:
            raise DomainError("give either --n or --alpha/--beta")
        return jump.JumpGameParams.from_n(args.n)
    if args.alpha is None or args.beta is None:
        raise DomainError("--alpha and --beta (or --n) are required")
    return jump.JumpGameParams(args.alpha, args.beta)


def _d_row(d: DiscountFactor) -> dict:
    return {"delta": d.delta, "one_minus_delta": d.complement, "log_one_minus_delta": d.log_complement}


def _final_game(args) -> hidden.FinalGame:
    params = jump.JumpGameParams.from_n(args.n) if args.n is not None else None
    return hidden.build_final_game(args.epsilon, args.r, params)


# risk ------------------------------------------------------------------------------------


def cmd_risk_factor(args, env):
    d = discount_from_args(args)
    chain = risk.RiskChain(args.alpha)
    row = {"alpha": args.alpha, **_d_row(d), "a": args.a, "closed": risk.hit_factor(chain, d, args.a)}
    if args.a == int(args.a):
        row["recursion"] = float(risk.hit_factor_recursion(chain, d, int(args.a))[-1])
    if args.samples:
        mc = risk.hit_factor_mc(chain, d, int(args.a), args.samples, args.seed)
        row.update(mc_mean=mc.mean, mc_stderr=mc.stderr, samples=args.samples)
    env.results.append(row)


def cmd_risk_table(args, env):
    d = discount_from_args(args)
    chain = risk.RiskChain(args.alpha)
    rec = risk.hit_factor_recursion(chain, d, args.a_max)
    for a in range(args.a_max + 1):
        env.results.append({"a": a, "closed": risk.hit_factor(chain, d, a), "recursion": float(rec[a]),
                            "expected_time": risk.expected_hitting_time(chain, a)})


def cmd_risk_time(args, env):
    chain = risk.RiskChain(args.alpha)
    env.results.append({"alpha": args.alpha, "a": args.a, "expected_time": risk.expected_hitting_time(chain, args.a)})


# mdp ----------------------------------------------------------------------------------------


def cmd_mdp_score(args, env):
    d = discount_from_args(args)
    p = mdp.MdpParams(args.alpha, args.reward)
    for a in range(args.a_max + 1) if args.a is None else [args.a]:
        env.results.append({"a": a, "score": mdp.score(p, d, a)})


def cmd_mdp_value(args, env):
    d = discount_from_args(args)
    p = mdp.MdpParams(args.alpha, args.reward)
    res = mdp.mdp_value(p, d)
    row = {"alpha": args.alpha, **_d_row(d), "value": res.value, "argmax": res.argmax,
           "log_one_minus_value": res.log_gap, "windowed": res.windowed}
    if d.delta >= args.alpha:
        row["a_star"] = mdp.critical_threshold(args.alpha, d)
    if args.oracle:
        v, _ = mdp.mdp_vi_oracle(p, d, args.levels)
        row["vi_value"] = v
    env.results.append(row)


def cmd_mdp_threshold(args, env):
    d = discount_from_args(args)
    tag = mdp.level_set_classify(args.alpha, d, args.tol)
    env.results.append({"alpha": args.alpha, **_d_row(d), "a_star": mdp.critical_threshold(args.alpha, d),
                        "tag": tag.tag, "nearest": tag.a, "eta": tag.eta})


def cmd_mdp_level(args, env):
    d = mdp.delta_from_level(args.alpha, args.a, args.eta)
    env.results.append({"alpha": args.alpha, "a": args.a, "eta": args.eta, **_d_row(d)})


def cmd_mdp_bounds(args, env):
    d = discount_from_args(args)
    b = mdp.score_bounds(mdp.MdpParams(args.alpha), d)
    env.results.append({"a_star": b.a_star, "score": b.score, "lower": b.lower, "upper": b.upper,
                        "off_grid_upper": b.off_grid_upper, "ratio": mdp.asymptotic_ratio(mdp.MdpParams(args.alpha), d)})
    env.add_certificates([hidden.Certificate("score sandwich", 1.0 if b.holds else -1.0)])


# jump game ------------------------------------------------------------------------------------


def cmd_jump_table(args, env):
    d = discount_from_args(args)
    params = _pair(args)
    tab = jump.payoff_table(params, d, range(args.a_max + 1), range(args.b_max + 1))
    for a in range(args.a_max + 1):
        for b in range(args.b_max + 1):
            env.results.append({"a": a, "b": b, "g": float(tab[a, b])})


def cmd_jump_solve(args, env):
    d = discount_from_args(args)
    params = _pair(args)
    s = jump.solve_game(params, d)
    row = {"alpha": params.alpha, "beta": params.beta, **_d_row(d), "a_sharp": s.a_sharp,
           "b_sharp": s.b_sharp, "value": s.value}
    if args.oracle:
        row["vi_value"] = jump.zerosum_vi_oracle(params, d, args.levels)
    env.results.append(row)


def cmd_jump_enumerate(args, env):
    params = _pair(args)
    for i, p in enumerate(jump.joint_delta_enumerate(params, args.which, args.count, args.start)):
        env.results.append({"index": args.start + i, "which": p.which, "a": p.a, "b": p.b, "eta": p.eta,
                            **_d_row(p.delta), "value": jump.solve_game(params, p.delta).value})


def cmd_jump_bounds(args, env):
    params = _pair(args)
    env.results.append({"alpha": params.alpha, "beta": params.beta, "A": params.A, "B": params.B,
                        **jump.asymptotic_bounds(params)})


def cmd_jump_find_params(args, env):
    n, a, b = jump.find_parameters(args.epsilon, args.n_cap)
    params = jump.JumpGameParams(a, b)
    env.results.append({"epsilon": args.epsilon, "n": n, "alpha": a, "beta": b, "B": params.B,
                        **jump.asymptotic_bounds(params)})


def cmd_jump_curve(args, env):
    """Value against the discount factor on a log grid of ``1 - delta``."""
    params = _pair(args)
    for lx in np.linspace(math.log(args.x_max), math.log(args.x_min), args.points):
        d = DiscountFactor.from_log_complement(float(lx))
        s = jump.solve_game(params, d)
        env.results.append({**_d_row(d), "value": s.value, "a_sharp": s.a_sharp, "b_sharp": s.b_sharp})


# hidden games --------------------------------------------------------------------------------


def cmd_hsg_build(args, env):
    params = _pair(args)
    g = hidden.build_gamma_star(params)
    if args.out_game:
        core.save_game(g, args.out_game)
    env.results.append({"states": g.n_states, "signals": len(g.signals), "file": args.out_game})


def cmd_hsg_simulate(args, env):
    d = discount_from_args(args)
    params = _pair(args)
    if args.a is None or args.b is None:
        s = jump.solve_game(params, d)
        a, b = s.a_sharp, s.b_sharp
    else:
        a, b = args.a, args.b
    sim, exact = hidden.gamma_star_value_check(params, d, a, b, args.samples, args.seed)
    env.results.append({"a": a, "b": b, "mc_mean": sim.estimate.mean, "mc_stderr": sim.estimate.stderr,
                        "exact": exact, "max_grid_error": sim.max_grid_error})


def cmd_hsg_prop6(args, env):
    d = discount_from_args(args)
    params = _pair(args)
    out = hidden.prop6_check(params, d, args.samples, args.seed)
    env.results.append(out)
    env.add_certificates([hidden.Certificate("Monte Carlo within 3 standard errors", 3.0 - abs(out["z"])),
                          hidden.Certificate("beliefs on the risk grid", args.tol - out["max_grid_error"])])


def cmd_hsg_reduce(args, env):
    g = core.load_game(args.game)
    if not isinstance(g, core.HiddenStochasticGame):
        raise DomainError("belief reduction needs a hidden stochastic game file")
    red = core.belief_game_reduce(g, args.depth)
    for i, b in enumerate(red.beliefs):
        env.results.append({"belief": i, "depth": red.depth[i], "truncated": i in red.truncated,
                            "support": {g.states[k]: p for k, p in b.support}})


def cmd_hsg_known(args, env):
    g = core.load_game(args.game)
    if not isinstance(g, core.HiddenStochasticGame):
        raise DomainError("known-payoffs check needs a hidden stochastic game file")
    try:
        blocks = core.known_payoffs_partition(g)
    except core.NotKnownPayoffsError as exc:
        env.results.append({"known_payoffs": False, "witnesses": list(exc.states)})
        env.add_certificates([hidden.Certificate("known payoffs", -1.0)])
        return
    env.results.append({"known_payoffs": True, "blocks": blocks})
    env.add_certificates([hidden.Certificate("known payoffs", 1.0)])


# final game ------------------------------------------------------------------------------------


def cmd_final_params(args, env):
    n, a, b = hidden.final_game_parameters(args.epsilon, args.r)
    env.results.append({"epsilon": args.epsilon, "r": args.r, "n": n, "alpha": a, "beta": b,
                        **jump.asymptotic_bounds(jump.JumpGameParams(a, b))})


def cmd_final_build(args, env):
    fg = _final_game(args)
    if args.out_game:
        core.save_game(fg.hsg, args.out_game)
    for s, (lo, hi) in hidden.payoff_ranges(fg).items():
        env.results.append({"state": s, "payoff_min": lo, "payoff_max": hi})


def _regime_row(fg, res, d):
    row = {**_d_row(d), "regime": res.regime, "value": res.value, "value_delta": res.value_delta}
    if res.square is not None:
        row.update(square_lo=list(res.square.lo), square_hi=list(res.square.hi))
    return row


def _regime_margin(fg, res, d):
    e, r = fg.epsilon, fg.r
    if res.regime == "E2" or res.value > e:
        return min(res.value - (e + 5 * r), 2 * r / (1 + 2 * r) - d.complement)
    return min((e - 5 * r) - res.value, 2 * r - d.complement)


def cmd_final_classify(args, env):
    fg = _final_game(args)
    if args.index is not None:
        p, res = hidden.regime_walk(fg, args.which, 1, args.index)[0]
        d = p.delta
        head = {"index": args.index, "which": args.which, "a": p.a, "b": p.b, "eta": p.eta}
    else:
        d = discount_from_args(args)
        res = hidden.regime_classify(fg, d)
        head = {}
    env.results.append({**head, **_regime_row(fg, res, d)})
    env.add_certificates([hidden.Certificate(f"regime condition ({res.regime})", _regime_margin(fg, res, d))])
    env.add_certificates(res.certificates)


def cmd_final_find(args, env):
    fg = _final_game(args)
    p, res = hidden.find_regime_point(fg, args.regime, args.max_points)
    env.results.append({"which": p.which, "a": p.a, "b": p.b, "eta": p.eta, **_regime_row(fg, res, p.delta)})
    env.add_certificates(hidden.first_stage_certificates(fg, p.delta, res.regime))


def cmd_final_certify(args, env):
    fg = _final_game(args)
    d = discount_from_args(args)
    res = hidden.regime_classify(fg, d)
    env.results.append(_regime_row(fg, res, d))
    env.add_certificates(hidden.first_stage_certificates(fg, d))


def cmd_final_perturb(args, env):
    fg = _final_game(args)
    d = discount_from_args(args)
    eta = hidden.perturbation_cap(fg) / 2 if args.eta is None else args.eta
    try:
        pb = hidden.perturbed_bounds(fg, d, eta)
    except hidden.CertificateError as exc:
        env.results.append({**_d_row(d), "eta": eta, "error": str(exc)})
        env.add_certificates(exc.certificates)
        return
    env.results.append({**_d_row(d), "regime": pb.regime, "eta": eta, "cap": hidden.perturbation_cap(fg),
                        "square_lo": list(pb.square.lo), "square_hi": list(pb.square.hi)})
    env.add_certificates(pb.certificates)


def cmd_final_squares(args, env):
    """Corner data for the two regime squares (and perturbed ones when ``--eta`` is set)."""
    fg = hidden.FinalGame(None, args.epsilon, args.r, None) if args.n is None else _final_game(args)
    etas = [0.0] if args.eta is None else [0.0, args.eta]
    for eta in etas:
        for regime in ("E1", "E2"):
            sq = hidden.square_for(fg, regime, eta)
            env.results.append({"regime": regime, "eta": eta, "x_lo": sq.lo[0], "x_hi": sq.hi[0],
                                "y_lo": sq.lo[1], "y_hi": sq.hi[1]})
    sq1, sq2 = (hidden.square_for(fg, g, etas[-1]) for g in ("E1", "E2"))
    env.add_certificates([hidden.Certificate("squares disjoint", sq2.lo[0] - sq1.hi[0])])


# examples ----------------------------------------------------------------------------------------


def _desc(desc: classic.EquilibriumSetDescription) -> dict:
    return {"kind": desc.kind, "relation": desc.relation, **{f"set_{k}": v for k, v in desc.data.items()}}


def cmd_ex1(args, env):
    d = discount_from_args(args)
    N, desc = classic.ex1_regime(d, args.tol)
    n, dist = classic.ex1_grid_distance(d)
    env.results.append({**_d_row(d), "N": N, "log_half_over_log_delta": n, "grid_distance": dist, **_desc(desc)})


def cmd_ex1_spe(args, env):
    d = discount_from_args(args, required=False)
    chk = classic.ex1_spe_check(d, args.N, args.stages)
    env.results.append({"N": args.N, "stages": args.N if args.stages is None else args.stages,
                        "payoff_k3": chk.payoff_k3, "payoff_k1": chk.payoff_k1,
                        "deviations": [list(x) for x in chk.deviations]})
    first = chk.deviations[0] if chk.deviations else None
    name = "no profitable one-shot deviation" + (f" (state {first[0]}, player {first[1]}, action {first[2]})"
                                                 if first else "")
    env.add_certificates([hidden.Certificate(name, -first[3] if first else 1.0)])


def cmd_ex15_nash(args, env):
    if args.face:
        eqs = classic.bimatrix_support_enum(*classic.ex15_face_matrices()).equilibria
        cols = ["M", "R"]
    else:
        eqs = classic.ex15_stage_nash(args.cont_a, args.cont_b)
        cols = ["L", "M", "R"]
    for e in eqs:
        env.results.append({"x": {a: float(p) for a, p in zip("TB", e.x)},
                            "y": {a: float(p) for a, p in zip(cols, e.y)},
                            "payoff1": e.payoff1, "payoff2": e.payoff2})
    if args.cont_b is not None and not args.face:
        env.results.append({"indifference_x": classic.ex15_indifference(args.cont_b)})


def cmd_ex15_set(args, env):
    d = discount_from_args(args)
    env.results.append({**_d_row(d), "state": args.state, **_desc(classic.ex15_payoff_set(d, args.state, args.tol))})


def cmd_ex15_family(args, env):
    d = discount_from_args(args)
    for ep in classic.EX15_ENDPOINTS:
        for N in range(args.n_max + 1):
            env.results.append({"N": N, "endpoint": list(ep),
                                "formula": classic.ex15_family_payoff(d, N, ep),
                                "by_play": classic.ex15_family_by_play(d, N, ep)})


def cmd_stationary_verify(args, env):
    d = discount_from_args(args)
    if args.game:
        game = core.load_game(args.game)
        with open(args.profile) as fh:
            prof = json.load(fh)
        x, y, r = (np.asarray(prof[k], dtype=float) for k in ("x", "y", "r"))
    else:
        game, x, y, r = classic.ex1_stationary_profile(d)
        if args.violate:
            x = x.copy()
            x[game.index("k1")] = [0.0, 1.0]
            r = core.eval_discounted_payoffs(game, x, y, d)
    res = classic.stationary_eq_verify(game, d, x, y, r, args.tol)
    env.results.append({"passed": res.passed, "max_violation": res.max_violation,
                        "r": {s: r[k] for k, s in enumerate(game.states)}})
    env.add_certificates([hidden.Certificate(name, -amt) for name, amt in res.violations]
                         or [hidden.Certificate("stationary equilibrium system", 1.0)])


def cmd_export(args, env):
    for name, g in (("example1", classic.build_example1()), ("example15", classic.build_example15())):
        path = f"{args.dir}/{name}.json"
        core.save_game(g, path)
        env.results.append({"game": name, "file": path, "states": g.n_states})


# parser -------------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--timestamp", action="store_true", help="add a timestamp (not hashed)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="nonconv", description=__doc__.splitlines()[0])
    top = parser.add_subparsers(dest="group", required=True)

    def sub(group, name, func, help_, discount=None):
        p = group.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        if discount is not None:
            _add_discount(p, discount)
        return p

    g = top.add_parser("risk", help="risk chain hitting times").add_subparsers(dest="cmd", required=True)
    p = sub(g, "factor", cmd_risk_factor, "E(delta**T_a)", True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--samples", type=int, default=0, help="also estimate by Monte Carlo")
    p = sub(g, "table", cmd_risk_table, "closed form and recursion for a = 0..a-max", True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--a-max", type=int, default=8)
    p = sub(g, "time", cmd_risk_time, "expected hitting time")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--a", type=int, required=True)

    g = top.add_parser("mdp", help="one-player threshold problem").add_subparsers(dest="cmd", required=True)
    p = sub(g, "score", cmd_mdp_score, "threshold scores", True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--reward", type=float, default=1.0)
    p.add_argument("--a", type=float)
    p.add_argument("--a-max", type=int, default=10)
    p = sub(g, "value", cmd_mdp_value, "optimal value and threshold", True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--reward", type=float, default=1.0)
    p.add_argument("--oracle", action="store_true", help="also run value iteration")
    p.add_argument("--levels", type=int, default=60)
    p = sub(g, "threshold", cmd_mdp_threshold, "critical threshold and level-set tag", True)
    p.add_argument("--alpha", type=float, required=True)
    p = sub(g, "level", cmd_mdp_level, "discount factor for a level and offset")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--eta", type=float, default=0.0)
    p = sub(g, "bounds", cmd_mdp_bounds, "score bounds at the critical threshold", True)
    p.add_argument("--alpha", type=float, required=True)

    g = top.add_parser("jump", help="zero-sum jump game").add_subparsers(dest="cmd", required=True)
    p = sub(g, "table", cmd_jump_table, "payoff table g(a, b)", True)
    _add_pair(p)
    p.add_argument("--a-max", type=int, default=10)
    p.add_argument("--b-max", type=int, default=10)
    p = sub(g, "solve", cmd_jump_solve, "equilibrium thresholds and value", True)
    _add_pair(p)
    p.add_argument("--oracle", action="store_true", help="also run value iteration")
    p.add_argument("--levels", type=int, default=80)
    p = sub(g, "enumerate", cmd_jump_enumerate, "joint level-set discount factors")
    _add_pair(p)
    p.add_argument("--which", choices=["Delta1", "Delta2"], required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--start", type=int, default=0)
    p = sub(g, "bounds", cmd_jump_bounds, "limit bounds on the value")
    _add_pair(p)
    p = sub(g, "find-params", cmd_jump_find_params, "smallest n separating the limit bounds")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--n-cap", type=int, default=10**6)
    p = sub(g, "curve", cmd_jump_curve, "value against delta (plot data)")
    _add_pair(p)
    p.add_argument("--x-max", type=float, default=1e-2, help="largest 1 - delta")
    p.add_argument("--x-min", type=float, default=1e-8, help="smallest 1 - delta")
    p.add_argument("--points", type=int, default=400)

    g = top.add_parser("hsg", help="hidden stochastic games").add_subparsers(dest="cmd", required=True)
    p = sub(g, "build", cmd_hsg_build, "six-state hidden jump game")
    _add_pair(p)
    p.add_argument("--out-game", help="write the game as JSON")
    p = sub(g, "simulate", cmd_hsg_simulate, "Monte Carlo under threshold play", True)
    _add_pair(p)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--samples", type=int, default=100_000)
    p = sub(g, "prop6-check", cmd_hsg_prop6, "simulated value against the closed form", True)
    _add_pair(p)
    p.add_argument("--samples", type=int, default=100_000)
    p = sub(g, "reduce", cmd_hsg_reduce, "belief reduction of a game file")
    p.add_argument("--game", required=True)
    p.add_argument("--depth", type=int, default=6)
    p = sub(g, "known-payoffs", cmd_hsg_known, "check the known-payoffs property of a game file")
    p.add_argument("--game", required=True)

    g = top.add_parser("final", help="13-state oscillating game").add_subparsers(dest="cmd", required=True)

    def final_args(p):
        p.add_argument("--epsilon", type=float, default=0.3)
        p.add_argument("--r", type=float, default=0.05)
        p.add_argument("--n", type=int, help="override alpha = 1/n, beta = 1/(n+1)")

    p = sub(g, "params", cmd_final_params, "smallest n with strict regime margins")
    p.add_argument("--epsilon", type=float, default=0.3)
    p.add_argument("--r", type=float, default=0.05)
    p = sub(g, "build", cmd_final_build, "build the game and list payoff ranges")
    final_args(p)
    p.add_argument("--out-game", help="write the game as JSON")
    p = sub(g, "classify", cmd_final_classify, "regime of a discount factor", False)
    final_args(p)
    p.add_argument("--which", choices=["Delta1", "Delta2"], default="Delta1")
    p.add_argument("--index", type=int, help="use the index-th discount factor of the walk")
    p = sub(g, "find", cmd_final_find, "first enumerated discount factor in a regime")
    final_args(p)
    p.add_argument("--regime", choices=["E1", "E2"], required=True)
    p.add_argument("--max-points", type=int, default=200)
    p = sub(g, "certify", cmd_final_certify, "first-stage certificates", True)
    final_args(p)
    p = sub(g, "perturb", cmd_final_perturb, "bounds under payoff perturbations", True)
    final_args(p)
    p.add_argument("--eta", type=float, help="perturbation size (default: half the cap)")
    p = sub(g, "squares", cmd_final_squares, "regime square corners (plot data)")
    final_args(p)
    p.add_argument("--eta", type=float)

    g = top.add_parser("examples", help="the two small examples").add_subparsers(dest="cmd", required=True)
    p = sub(g, "ex1", cmd_ex1, "regime of the seven-state example", True)
    p = sub(g, "ex1-spe", cmd_ex1_spe, "one-shot deviation check on the grid", False)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--stages", type=int)
    p = sub(g, "ex15-nash", cmd_ex15_nash, "equilibria of the k2 stage game")
    p.add_argument("--cont-a", type=float, default=-6.0)
    p.add_argument("--cont-b", type=float, default=-5.0)
    p.add_argument("--face", action="store_true", help="only columns M and R")
    p = sub(g, "ex15-set", cmd_ex15_set, "equilibrium payoff set", True)
    p.add_argument("--state", choices=["k1", "k2"], default="k2")
    p = sub(g, "ex15-family", cmd_ex15_family, "k2 payoff family, formula and by play", True)
    p.add_argument("--n-max", type=int, default=5)
    p = sub(g, "stationary-verify", cmd_stationary_verify, "check a stationary profile", True)
    p.add_argument("--game", help="game JSON (default: the seven-state example)")
    p.add_argument("--profile", help="JSON with x, y, r")
    p.add_argument("--violate", action="store_true", help="use B at k1 in the built-in profile")
    p = sub(g, "export", cmd_export, "write the example games as JSON")
    p.add_argument("--dir", default=".")
    return parser


_SKIP = {"func", "format", "out", "seed", "timestamp", "verbose", "group", "cmd"}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    params = {k: v for k, v in sorted(vars(args).items()) if k not in _SKIP and v is not None}
    env = ReportEnvelope(f"{args.group} {args.cmd}", params, args.seed)
    if args.timestamp:
        env.timestamp = _dt.datetime.now(_dt.timezone.utc).isoformat()
    try:
        args.func(args, env)
    except (DomainError, core.NotKnownPayoffsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except hidden.CertificateError as exc:
        env.add_certificates(getattr(exc, "certificates", ()))
        print(f"certificate failed: {exc}", file=sys.stderr)
        _emit(env, args, stdout)
        return EXIT_CERT
    _emit(env, args, stdout)
    for c in env.certificates:
        if not c["holds"]:
            print(f"certificate failed: {c['name']} (margin {c['margin']:.3g})", file=sys.stderr)
    return EXIT_OK if env.passed else EXIT_CERT


def _emit(env, args, stdout):
    text = env.to_json() if args.format == "json" else env.to_csv()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
