"""Two small stochastic games whose equilibrium payoff sets do not converge,
a support-enumeration solver for small bimatrix games, and a checker for
stationary equilibria.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .core import FiniteStochasticGame, eval_discounted_payoffs
from .numerics import DiscountFactor, DomainError, as_discount

log = logging.getLogger(__name__)


# support enumeration -------------------------------------------------------------


@dataclass(frozen=True)
class Equilibrium:
    x: np.ndarray
    y: np.ndarray
    payoff1: float
    payoff2: float

    @property
    def support(self):
        return tuple(np.flatnonzero(self.x > 0)), tuple(np.flatnonzero(self.y > 0))


@dataclass
class SupportEnumResult:
    equilibria: list
    # support pairs on which a continuum of equilibria exists
    components: list = field(default_factory=list)

    @property
    def full_square_component(self) -> bool:
        return any(len(s1) == self.shape[0] and len(s2) == self.shape[1] for s1, s2 in self.components)

    shape: tuple = (0, 0)


def _indifference(M, rows, cols):
    """Solve ``sum_{c in cols} M[r, c] w_c = v`` for all ``r in rows`` and ``sum w = 1``.

    Returns ``(w, v, unique, consistent)``.
    """
    k = len(cols)
    lhs = np.zeros((len(rows) + 1, k + 1))
    lhs[:-1, :k] = M[np.ix_(rows, cols)]
    lhs[:-1, k] = -1.0
    lhs[-1, :k] = 1.0
    rhs = np.zeros(len(rows) + 1)
    rhs[-1] = 1.0
    sol, _, rank, _ = np.linalg.lstsq(lhs, rhs, rcond=None)
    consistent = np.allclose(lhs @ sol, rhs, atol=1e-10)
    return sol[:k], sol[k], rank == k + 1, consistent


def bimatrix_support_enum(A, B, tol: float = 1e-10) -> SupportEnumResult:
    """All Nash equilibria of a small bimatrix game by support enumeration.

    ``A`` and ``B`` are the row and column player's payoffs.  Support pairs
    whose indifference systems have a continuum of solutions are reported in
    ``components`` (with one representative equilibrium when it exists).
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape or A.ndim != 2:
        raise DomainError("payoff matrices must have the same 2-D shape")
    m, n = A.shape
    if m != 2 or not 1 <= n <= 8:
        raise DomainError("support enumeration expects 2 rows and at most 8 columns")
    found, components = [], []
    for k1 in range(1, m + 1):
        for S1 in itertools.combinations(range(m), k1):
            for k2 in range(1, n + 1):
                for S2 in itertools.combinations(range(n), k2):
                    y_s, v1, u_y, c_y = _indifference(A, S1, S2)
                    x_s, v2, u_x, c_x = _indifference(B.T, S2, S1)
                    if not (c_y and c_x):
                        continue
                    x = np.zeros(m)
                    y = np.zeros(n)
                    x[list(S1)] = x_s
                    y[list(S2)] = y_s
                    if np.any(x < -tol) or np.any(y < -tol):
                        continue
                    if (A @ y).max() > v1 + tol or (x @ B).max() > v2 + tol:
                        continue
                    if not (u_x and u_y):
                        components.append((S1, S2))
                    elif np.any(x_s <= tol) or np.any(y_s <= tol):
                        continue  # found again on the smaller support
                    x = np.clip(x, 0.0, None)
                    y = np.clip(y, 0.0, None)
                    x /= x.sum()
                    y /= y.sum()
                    eq = Equilibrium(x, y, float(x @ A @ y), float(x @ B @ y))
                    if not any(np.allclose(eq.x, e.x, atol=1e-9) and np.allclose(eq.y, e.y, atol=1e-9)
                               for e in found):
                        found.append(eq)
    res = SupportEnumResult(found, components)
    res.shape = (m, n)
    return res


def additive_game_matrices(r: float):
    """2x2 game where each player's action sets the other's payoff to ``+r`` or ``-r``."""
    A = np.array([[r, -r], [r, -r]], dtype=float)
    return A, A.T.copy()


def is_nash(A, B, x, y, tol=1e-9) -> bool:
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    return bool((A @ y).max() <= x @ A @ y + tol and (x @ B).max() <= x @ B @ y + tol)


# equilibrium-set descriptions --------------------------------------------------------


@dataclass(frozen=True)
class EquilibriumSetDescription:
    """What is known about an equilibrium payoff set.

    ``kind`` is ``"Singleton"``, ``"Segment"``, ``"ParamFamily"`` or
    ``"BandExclusion"``; ``relation`` says whether the set equals, contains or
    avoids the described object.
    """

    kind: str
    relation: str
    data: dict


# Example 1 ------------------------------------------------------------------------------

EX1_STATES = ["k1", "k2", "k3", "(1/2,0)*", "(0,1/2)*", "(-1,-1)*", "(0,1)*"]


def build_example1() -> FiniteStochasticGame:
    """Seven-state game: player 1 may exit at ``k1``, player 2 at ``k2``; ``k3`` is a
    coordination game whose cooperative cell keeps play in ``k3``."""
    st = {s: n for n, s in enumerate(EX1_STATES)}
    K = len(EX1_STATES)
    T = np.zeros((K, 2, 2, K))
    U1 = np.zeros((K, 2, 2))
    U2 = np.zeros((K, 2, 2))
    T[st["k1"], 0, :, st["(1/2,0)*"]] = 1.0
    U1[st["k1"], 0, :], U2[st["k1"], 0, :] = 0.5, 0.0
    T[st["k1"], 1, :, st["k2"]] = 1.0
    U1[st["k1"], 1, :], U2[st["k1"], 1, :] = 0.5, 0.5
    T[st["k2"], :, 0, st["(0,1/2)*"]] = 1.0
    T[st["k2"], :, 1, st["k3"]] = 1.0
    U1[st["k2"]], U2[st["k2"]] = 0.5, 0.5
    k3 = st["k3"]
    T[k3, 0, 0, k3] = 1.0
    U1[k3, 0, 0], U2[k3, 0, 0] = 1.0, 0.0
    for i, j in ((0, 1), (1, 0)):
        T[k3, i, j, st["(-1,-1)*"]] = 1.0
        U1[k3, i, j] = U2[k3, i, j] = -1.0
    T[k3, 1, 1, st["(0,1)*"]] = 1.0
    U1[k3, 1, 1], U2[k3, 1, 1] = 0.0, 1.0
    for s, (p1, p2) in (("(1/2,0)*", (0.5, 0.0)), ("(0,1/2)*", (0.0, 0.5)),
                        ("(-1,-1)*", (-1.0, -1.0)), ("(0,1)*", (0.0, 1.0))):
        T[st[s], :, :, st[s]] = 1.0
        U1[st[s]], U2[st[s]] = p1, p2
    return FiniteStochasticGame(list(EX1_STATES), ["T", "B"], ["L", "R"], T, U1, U2)


def ex1_grid_distance(delta):
    """``(n, |n - round(n)|)`` with ``n = ln(1/2) / ln(delta)``."""
    d = as_discount(delta)
    if d.delta == 0.0:
        return 0.0, math.inf
    n = math.log(0.5) / d.log_delta
    return n, abs(n - round(n))


def _grid_level(delta, tol):
    n, dist = ex1_grid_distance(delta)
    N = round(n) if math.isfinite(dist) else 0
    if N >= 1 and dist <= tol * max(1.0, n):
        return int(N)
    return None


def ex1_regime(delta, tol: float = 1e-9):
    """``(N, payoff set)``: ``N`` if ``delta**N = 1/2`` for an integer ``N`` (within ``tol``).

    On the grid the equilibrium payoffs contain the segment ``{1/2} x [0, 1/2]``;
    off the grid they reduce to ``{(1/2, 0)}``.
    """
    d = as_discount(delta)
    if not 0.0 < d.delta < 1.0:
        raise DomainError("delta must lie in (0, 1)")
    N = _grid_level(d, tol)
    if N is None:
        return None, EquilibriumSetDescription("Singleton", "equals", {"point": (0.5, 0.0)})
    return N, EquilibriumSetDescription("Segment", "contains",
                                        {"from": (0.5, 0.0), "to": (0.5, 0.5), "N": N})


@dataclass
class SPECheck:
    passed: bool
    payoff_k3: np.ndarray
    payoff_k1: np.ndarray
    deviations: list


def _ex1_automaton(stages: int):
    """Example 1 with ``k3`` unrolled into phases ``0..stages``.

    Phase ``t < stages`` plays ``(T, L)``; phase ``stages`` plays ``(B, R)``.
    """
    base = build_example1()
    bst = {s: n for n, s in enumerate(base.states)}
    phases = [f"k3@{t}" for t in range(stages + 1)]
    states = ["k1", "k2"] + phases + EX1_STATES[3:]
    st = {s: n for n, s in enumerate(states)}
    K = len(states)
    T = np.zeros((K, 2, 2, K))
    U1 = np.zeros((K, 2, 2))
    U2 = np.zeros((K, 2, 2))

    def relabel(k_old):
        return st["k3@0"] if base.states[k_old] == "k3" else st[base.states[k_old]]

    for s in ["k1", "k2"] + EX1_STATES[3:]:
        for k2 in range(base.n_states):
            T[st[s], :, :, relabel(k2)] += base.transition[bst[s], :, :, k2]
        U1[st[s]], U2[st[s]] = base.payoff1[bst[s]], base.payoff2[bst[s]]
    k3 = bst["k3"]
    for t, name in enumerate(phases):
        U1[st[name]], U2[st[name]] = base.payoff1[k3], base.payoff2[k3]
        for i in range(2):
            for j in range(2):
                for k2 in range(base.n_states):
                    p = base.transition[k3, i, j, k2]
                    if not p:
                        continue
                    if base.states[k2] == "k3":
                        T[st[name], i, j, st[phases[min(t + 1, stages)]]] += p
                    else:
                        T[st[name], i, j, relabel(k2)] += p
    game = FiniteStochasticGame(states, ["T", "B"], ["L", "R"], T, U1, U2)
    x = np.zeros(K, dtype=int)
    y = np.zeros(K, dtype=int)
    x[st["k1"]] = 1  # B: enter k2
    y[st["k2"]] = 1  # R: enter k3
    x[st[phases[-1]]] = 1
    y[st[phases[-1]]] = 1
    return game, x, y


def one_shot_deviations(game: FiniteStochasticGame, x, y, delta, tol: float = 1e-12):
    """Profitable one-shot deviations from a pure Markov profile.

    Returns a list of ``(state, player, action, gain)``.
    """
    d = as_discount(delta)
    V = eval_discounted_payoffs(game, x, y, d)
    out = []
    for k, name in enumerate(game.states):
        i0, j0 = int(x[k]), int(y[k])
        for i in range(len(game.actions1)):
            if i == i0:
                continue
            val = d.complement * game.payoff1[k, i, j0] + d.delta * game.transition[k, i, j0] @ V[:, 0]
            if val > V[k, 0] + tol:
                out.append((name, 1, game.actions1[i], float(val - V[k, 0])))
        for j in range(len(game.actions2)):
            if j == j0:
                continue
            val = d.complement * game.payoff2[k, i0, j] + d.delta * game.transition[k, i0, j] @ V[:, 1]
            if val > V[k, 1] + tol:
                out.append((name, 2, game.actions2[j], float(val - V[k, 1])))
    return out, V


def ex1_spe_check(delta, N: int, stages: int | None = None, tol: float = 1e-12) -> SPECheck:
    """One-shot-deviation check of the profile reaching ``k3`` and alternating there.

    Player 1 enters ``k2``, player 2 enters ``k3``, then ``(T, L)`` is played
    ``stages`` times (default ``N``) followed by ``(B, R)``.  Requires
    ``delta**N = 1/2``; ``delta = None`` picks ``(1/2)**(1/N)``.
    """
    if int(N) != N or N < 1:
        raise DomainError("N must be a positive integer")
    N = int(N)
    d = DiscountFactor.from_delta(0.5 ** (1.0 / N)) if delta is None else as_discount(delta)
    if d.delta == 0.0 or abs(math.exp(N * d.log_delta) - 0.5) > 1e-9:
        raise DomainError(f"delta**N must equal 1/2 (within 1e-9) for N = {N}")
    stages = N if stages is None else stages
    if stages < 0:
        raise DomainError("stages must be non-negative")
    game, x, y = _ex1_automaton(stages)
    devs, V = one_shot_deviations(game, x, y, d, tol)
    return SPECheck(not devs, V[game.index("k3@0")], V[game.index("k1")], devs)


def ex1_stationary_profile(delta):
    """Stationary equilibrium with payoff ``(1/2, 0)``: exit at ``k1``, exit at ``k2``,
    cooperate at ``k3``.  Returns ``(x, y, r)`` as mixed strategies and values."""
    d = as_discount(delta)
    game = build_example1()
    K = game.n_states
    x = np.zeros((K, 2))
    y = np.zeros((K, 2))
    x[:, 0] = 1.0
    y[:, 0] = 1.0
    r = eval_discounted_payoffs(game, x, y, d)
    return game, x, y, r


# Example 1.5 ------------------------------------------------------------------------------

EX15_ABSORBING = [(1, 1), (-30, -30), (-12, -11), (-4, -7), (-22, -12), (3, -2), (-9, -4)]
EX15_K2 = [[None, (-12, -11), (-4, -7)], [(-22, -12), (3, -2), (-9, -4)]]


def _abs_name(p):
    return f"({p[0]},{p[1]})*"


def build_example15() -> FiniteStochasticGame:
    """Nine-state game: ``k1``, ``k2`` and seven absorbing states."""
    states = ["k1", "k2"] + [_abs_name(p) for p in EX15_ABSORBING]
    st = {s: n for n, s in enumerate(states)}
    K = len(states)
    T = np.zeros((K, 2, 3, K))
    U1 = np.zeros((K, 2, 3))
    U2 = np.zeros((K, 2, 3))

    def cell(k, i, j, pay, nxt):
        T[st[k], i, j, st[nxt]] = 1.0
        U1[st[k], i, j], U2[st[k], i, j] = pay

    cell("k1", 0, 0, (1, 1), _abs_name((1, 1)))
    cell("k1", 1, 0, (-1, -1), "k2")
    for i in range(2):
        for j in (1, 2):
            cell("k1", i, j, (-30, -30), _abs_name((-30, -30)))
    cell("k2", 0, 0, (-1, -1), "k2")
    for i in range(2):
        for j in range(3):
            if EX15_K2[i][j] is not None:
                cell("k2", i, j, EX15_K2[i][j], _abs_name(EX15_K2[i][j]))
    for p in EX15_ABSORBING:
        T[st[_abs_name(p)], :, :, st[_abs_name(p)]] = 1.0
        U1[st[_abs_name(p)]], U2[st[_abs_name(p)]] = p
    return FiniteStochasticGame(states, ["T", "B"], ["L", "M", "R"], T, U1, U2)


def ex15_stage_matrices(cont_a: float, cont_b: float):
    """Stage game at ``k2`` with ``(cont_a, cont_b)`` as the continuation after ``(T, L)``."""
    A = np.array([[cont_a, -12.0, -4.0], [-22.0, 3.0, -9.0]])
    B = np.array([[cont_b, -11.0, -7.0], [-12.0, -2.0, -4.0]])
    return A, B


def ex15_stage_nash(cont_a: float, cont_b: float) -> list:
    """All equilibria of the ``k2`` stage game.

    Requires ``cont_a`` in ``[-10, 3]`` and ``cont_b`` in ``[-13/2, -1]``.
    """
    if not -10.0 <= cont_a <= 3.0:
        raise DomainError("continuation payoff of player 1 must lie in [-10, 3]")
    if not -6.5 <= cont_b <= -1.0:
        raise DomainError("continuation payoff of player 2 must lie in [-13/2, -1]")
    res = bimatrix_support_enum(*ex15_stage_matrices(cont_a, cont_b))
    if res.components:
        log.warning("stage game has equilibrium components on supports %s", res.components)
    return res.equilibria


def ex15_face_matrices():
    """The ``k2`` stage game without column ``L``."""
    A, B = ex15_stage_matrices(0.0, 0.0)
    return A[:, 1:], B[:, 1:]


def ex15_indifference(cont_b: float) -> float:
    """Probability of ``T`` that makes player 2 indifferent between ``L`` and ``M``."""
    return 10.0 / (21.0 + cont_b)


EX15_ENDPOINTS = ((3.0, -2.0), (-6.0, -5.0))


def ex15_family_payoff(delta, N, endpoint) -> np.ndarray:
    """``(1 - delta**N)(-1, -1) + delta**N u``; ``N = None`` stands for never absorbing."""
    d = as_discount(delta)
    if N is None:
        return np.array([-1.0, -1.0])
    w = math.exp(N * d.log_delta) if d.delta > 0 else float(N == 0)
    return (1.0 - w) * np.array([-1.0, -1.0]) + w * np.asarray(endpoint, dtype=float)


def ex15_family_by_play(delta, N: int, endpoint) -> np.ndarray:
    """Same payoff obtained by evaluating the strategy profile in the game itself.

    ``k2`` is unrolled into ``N + 1`` phases; ``(T, L)`` is played in the first
    ``N`` and the absorbing profile (``(B, M)`` or the mixed one) in the last.
    """
    d = as_discount(delta)
    base = build_example15()
    k2 = base.index("k2")
    phases = [f"k2@{t}" for t in range(N + 1)]
    others = [s for s in base.states if s not in ("k1", "k2")]
    states = phases + others
    st = {s: n for n, s in enumerate(states)}
    K = len(states)
    T = np.zeros((K, 2, 3, K))
    U1 = np.zeros((K, 2, 3))
    U2 = np.zeros((K, 2, 3))
    for t, name in enumerate(phases):
        U1[st[name]], U2[st[name]] = base.payoff1[k2], base.payoff2[k2]
        for k_next in range(base.n_states):
            nxt = base.states[k_next]
            if nxt == "k2":
                T[st[name], :, :, st[phases[min(t + 1, N)]]] += base.transition[k2, :, :, k_next]
            elif nxt != "k1":
                T[st[name], :, :, st[nxt]] += base.transition[k2, :, :, k_next]
    for s in others:
        k = base.index(s)
        T[st[s], :, :, st[s]] = 1.0
        U1[st[s]], U2[st[s]] = base.payoff1[k], base.payoff2[k]
    game = FiniteStochasticGame(states, base.actions1, base.actions2, T, U1, U2)
    x = np.zeros((K, 2))
    y = np.zeros((K, 3))
    x[:, 0] = 1.0
    y[:, 0] = 1.0
    if tuple(endpoint) == EX15_ENDPOINTS[0]:
        x[st[phases[-1]]] = [0.0, 1.0]
        y[st[phases[-1]]] = [0.0, 1.0, 0.0]
    elif tuple(endpoint) == EX15_ENDPOINTS[1]:
        x[st[phases[-1]]] = [1 / 3, 2 / 3]
        y[st[phases[-1]]] = [0.0, 0.25, 0.75]
    else:
        raise DomainError("endpoint must be (3, -2) or (-6, -5)")
    return eval_discounted_payoffs(game, x, y, d)[st["k2@0"]]


def ex15_payoff_set(delta, state: str = "k2", tol: float = 1e-9) -> EquilibriumSetDescription:
    """Equilibrium payoffs from ``k2`` (exact family) or what is known from ``k1``.

    From ``k1``: if ``delta**M = 1/2`` for an integer ``M`` the payoffs contain
    ``{1} x [-1, 1]``; otherwise none has ``u2`` in ``(-1, 1)``.
    """
    d = as_discount(delta)
    if not 0.0 < d.delta < 1.0:
        raise DomainError("delta must lie in (0, 1)")
    if state == "k2":
        return EquilibriumSetDescription("ParamFamily", "equals",
                                         {"base": (-1.0, -1.0), "endpoints": EX15_ENDPOINTS,
                                          "N": "0, 1, 2, ... or never"})
    if state != "k1":
        raise DomainError("state must be 'k1' or 'k2'")
    M = _grid_level(d, tol)
    if M is None:
        return EquilibriumSetDescription("BandExclusion", "avoids", {"u2_open_interval": (-1.0, 1.0)})
    return EquilibriumSetDescription("Segment", "contains", {"from": (1.0, -1.0), "to": (1.0, 1.0), "M": M})


# stationary equilibria ------------------------------------------------------------------


@dataclass
class VerifyResult:
    passed: bool
    violations: list  # (constraint name, amount)
    max_violation: float


def stationary_eq_verify(game: FiniteStochasticGame, delta, x, y, r, tol: float = 1e-9) -> VerifyResult:
    """Check a stationary profile and its values against the equilibrium system.

    The constraints are: ``x(k)`` and ``y(k)`` are probability vectors; no
    pure action beats ``r_p(k)`` against the opponent's mixed action; and
    ``r`` equals the discounted payoff of the profile in every state.
    """
    d = as_discount(delta)
    K, I, J = game.transition.shape[:3]
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = np.asarray(r, dtype=float)
    if x.shape != (K, I) or y.shape != (K, J) or r.shape != (K, 2):
        raise DomainError("shapes must be x: (K, I), y: (K, J), r: (K, 2)")
    viol = []

    def add(name, amount):
        if amount > tol:
            viol.append((name, float(amount)))

    for k, s in enumerate(game.states):
        add(f"simplex_x[{s}]", abs(x[k].sum() - 1.0))
        add(f"simplex_y[{s}]", abs(y[k].sum() - 1.0))
        add(f"nonneg_x[{s}]", -x[k].min())
        add(f"nonneg_y[{s}]", -y[k].min())
    # continuation-adjusted payoffs for every pure action pair
    c1 = d.complement * game.payoff1 + d.delta * game.transition @ r[:, 0]
    c2 = d.complement * game.payoff2 + d.delta * game.transition @ r[:, 1]
    for k, s in enumerate(game.states):
        p1 = c1[k] @ y[k]  # player 1's payoff from each pure action
        p2 = x[k] @ c2[k]
        for i in range(I):
            add(f"best_reply_p1[{s},{game.actions1[i]}]", p1[i] - r[k, 0])
        for j in range(J):
            add(f"best_reply_p2[{s},{game.actions2[j]}]", p2[j] - r[k, 1])
        add(f"consistency_r1[{s}]", abs(x[k] @ c1[k] @ y[k] - r[k, 0]))
        add(f"consistency_r2[{s}]", abs(x[k] @ c2[k] @ y[k] - r[k, 1]))
    worst = max((v for _, v in viol), default=0.0)
    return VerifyResult(not viol, viol, worst)
