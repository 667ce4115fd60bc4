"""Finite stochastic games, hidden stochastic games and their belief reductions."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import jsonschema
import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .numerics import DiscountFactor, DomainError, as_discount

ROW_TOL = 1e-12
MERGE_TOL = 1e-12


class NotKnownPayoffsError(ValueError):
    """The known-payoffs hypothesis fails; carries the offending pair of states."""

    def __init__(self, message, states):
        super().__init__(message)
        self.states = states


def _check_rows(arr, axis_from, what):
    if np.any(arr < -ROW_TOL):
        raise DomainError(f"{what}: negative transition probability")
    sums = arr.sum(axis=axis_from)
    bad = np.argwhere(np.abs(sums - 1.0) > ROW_TOL)
    if bad.size:
        raise DomainError(f"{what}: transition row {tuple(bad[0])} sums to {sums[tuple(bad[0])]!r}")


@dataclass
class FiniteStochasticGame:
    """Two-player stochastic game with observed states.

    ``transition[k, i, j, k2]`` is the probability of moving from ``k`` to
    ``k2`` under actions ``(i, j)``; ``payoff1``/``payoff2`` have shape
    ``(K, I, J)``.
    """

    states: list
    actions1: list
    actions2: list
    transition: np.ndarray
    payoff1: np.ndarray
    payoff2: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.transition = np.asarray(self.transition, dtype=float)
        self.payoff1 = np.asarray(self.payoff1, dtype=float)
        self.payoff2 = np.asarray(self.payoff2, dtype=float)
        K, I, J = len(self.states), len(self.actions1), len(self.actions2)
        if self.transition.shape != (K, I, J, K):
            raise DomainError(f"transition has shape {self.transition.shape}, expected {(K, I, J, K)}")
        for u in (self.payoff1, self.payoff2):
            if u.shape != (K, I, J):
                raise DomainError(f"payoff has shape {u.shape}, expected {(K, I, J)}")
        _check_rows(self.transition, 3, "game")

    @property
    def n_states(self):
        return len(self.states)

    def index(self, state) -> int:
        return self.states.index(state)

    def absorbing(self) -> np.ndarray:
        """Boolean mask of states that keep themselves with probability one."""
        K = self.n_states
        diag = self.transition[np.arange(K), :, :, np.arange(K)]
        return np.all(diag == 1.0, axis=(1, 2))


@dataclass
class HiddenStochasticGame:
    """Stochastic game where players see public signals instead of states.

    ``transition[k, i, j, k2, s]`` is the probability of the pair ``(k2, s)``;
    ``initial[k, s]`` is the distribution of the first state and signal.
    """

    states: list
    actions1: list
    actions2: list
    signals: list
    transition: np.ndarray
    payoff1: np.ndarray
    payoff2: np.ndarray
    initial: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.transition = np.asarray(self.transition, dtype=float)
        self.payoff1 = np.asarray(self.payoff1, dtype=float)
        self.payoff2 = np.asarray(self.payoff2, dtype=float)
        self.initial = np.asarray(self.initial, dtype=float)
        K, I, J, S = len(self.states), len(self.actions1), len(self.actions2), len(self.signals)
        if self.transition.shape != (K, I, J, K, S):
            raise DomainError(f"transition has shape {self.transition.shape}, expected {(K, I, J, K, S)}")
        for u in (self.payoff1, self.payoff2):
            if u.shape != (K, I, J):
                raise DomainError(f"payoff has shape {u.shape}, expected {(K, I, J)}")
        if self.initial.shape != (K, S):
            raise DomainError(f"initial has shape {self.initial.shape}, expected {(K, S)}")
        _check_rows(self.transition, (3, 4), "hidden game")
        if abs(self.initial.sum() - 1.0) > ROW_TOL or np.any(self.initial < 0):
            raise DomainError("initial distribution must be a probability vector")

    @property
    def n_states(self):
        return len(self.states)

    def index(self, state) -> int:
        return self.states.index(state)

    def signal_index(self, signal) -> int:
        return self.signals.index(signal)

    def absorbing(self) -> np.ndarray:
        K = self.n_states
        diag = self.transition[np.arange(K), :, :, np.arange(K), :].sum(axis=-1)
        return np.all(diag == 1.0, axis=(1, 2))

    def state_game(self) -> FiniteStochasticGame:
        """The same dynamics with the signals forgotten and states observed."""
        return FiniteStochasticGame(list(self.states), list(self.actions1), list(self.actions2),
                                    self.transition.sum(axis=4), self.payoff1, self.payoff2)


# strategy profiles -----------------------------------------------------------


def _as_mixed(strategy, n_states, n_actions, who):
    s = np.asarray(strategy)
    if s.ndim == 1:
        if s.shape[0] != n_states:
            raise DomainError(f"{who}: expected one action per state")
        out = np.zeros((n_states, n_actions))
        out[np.arange(n_states), s.astype(int)] = 1.0
        return out
    s = s.astype(float)
    if s.shape != (n_states, n_actions):
        raise DomainError(f"{who}: strategy shape {s.shape}, expected {(n_states, n_actions)}")
    if np.any(s < -ROW_TOL) or np.any(np.abs(s.sum(axis=1) - 1.0) > 1e-9):
        raise DomainError(f"{who}: each row must be a probability vector")
    return s


def eval_discounted_payoffs(game: FiniteStochasticGame, x, y, delta) -> np.ndarray:
    """Exact normalised discounted payoffs of a stationary profile.

    Solves ``(I - delta P) r = (1 - delta) u`` for both players.  ``x`` and
    ``y`` are either arrays of pure action indices (one per state) or
    mixed-strategy matrices.  Returns an array of shape ``(K, 2)``.
    """
    d = as_discount(delta)
    K = game.n_states
    x = _as_mixed(x, K, len(game.actions1), "player 1")
    y = _as_mixed(y, K, len(game.actions2), "player 2")
    P = np.einsum("ki,kj,kijl->kl", x, y, game.transition)
    u = np.stack([np.einsum("ki,kj,kij->k", x, y, game.payoff1),
                  np.einsum("ki,kj,kij->k", x, y, game.payoff2)], axis=1)
    A = np.eye(K) - d.delta * P
    return np.linalg.solve(A, d.complement * u)


# beliefs -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Belief:
    """Probability vector over the hidden states."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def support(self):
        return [(int(k), float(p)) for k, p in enumerate(self.probs) if p > 0.0]

    def close_to(self, other: "Belief", tol=MERGE_TOL) -> bool:
        return bool(np.all(np.abs(self.probs - other.probs) <= tol))

    @classmethod
    def point(cls, n_states, k):
        p = np.zeros(n_states)
        p[k] = 1.0
        return cls(p)


def belief_update(hsg: HiddenStochasticGame, belief: Belief, a1: int, a2: int, signal: int):
    """Bayes update after actions ``(a1, a2)`` and the public ``signal``.

    Returns ``(posterior, probability of the signal)``.  Raises
    :class:`DomainError` when the signal has probability zero.
    """
    joint = belief.probs @ hsg.transition[:, a1, a2, :, signal]
    mass = float(joint.sum())
    if mass <= 0.0:
        raise DomainError(f"signal {hsg.signals[signal]!r} has probability zero under this belief")
    return Belief(joint / mass), mass


@dataclass
class BeliefReduction:
    """Belief game of a hidden game, truncated at a reachability depth.

    ``successor[(b, i, j, s)]`` is the index of the posterior belief; frontier
    beliefs whose posteriors fall outside the explored set are listed in
    ``truncated`` and redirect those transitions to themselves.
    """

    game: FiniteStochasticGame
    beliefs: list
    depth: list
    initial: np.ndarray
    successor: dict
    truncated: set


def _find(beliefs, b, tol):
    for idx, other in enumerate(beliefs):
        if other.close_to(b, tol):
            return idx
    return None


def belief_game_reduce(hsg: HiddenStochasticGame, depth: int, max_states: int = 10_000,
                       tol: float = MERGE_TOL) -> BeliefReduction:
    """Breadth-first enumeration of beliefs reachable in at most ``depth`` steps."""
    if depth < 0:
        raise DomainError("depth must be non-negative")
    K, I, J, S = hsg.transition.shape[0], len(hsg.actions1), len(hsg.actions2), len(hsg.signals)
    beliefs, level = [], []
    initial = {}
    for s in range(S):
        mass = hsg.initial[:, s].sum()
        if mass > 0:
            b = Belief(hsg.initial[:, s] / mass)
            idx = _find(beliefs, b, tol)
            if idx is None:
                beliefs.append(b)
                level.append(0)
                idx = len(beliefs) - 1
            initial[idx] = initial.get(idx, 0.0) + mass
    edges = {}
    successor = {}
    truncated = set()
    head = 0
    while head < len(beliefs):
        b_idx = head
        head += 1
        b = beliefs[b_idx]
        for i in range(I):
            for j in range(J):
                joint = np.einsum("k,kls->ls", b.probs, hsg.transition[:, i, j])
                for s in range(S):
                    mass = joint[:, s].sum()
                    if mass <= 0:
                        continue
                    post = Belief(joint[:, s] / mass)
                    idx = _find(beliefs, post, tol)
                    if idx is None:
                        if level[b_idx] >= depth:
                            truncated.add(b_idx)
                            idx = b_idx
                        else:
                            if len(beliefs) >= max_states:
                                raise DomainError(f"belief reduction exceeds {max_states} states")
                            beliefs.append(post)
                            level.append(level[b_idx] + 1)
                            idx = len(beliefs) - 1
                    successor[(b_idx, i, j, s)] = idx
                    edges[(b_idx, i, j, idx)] = edges.get((b_idx, i, j, idx), 0.0) + mass
    n = len(beliefs)
    trans = np.zeros((n, I, J, n))
    for (b_idx, i, j, idx), p in edges.items():
        trans[b_idx, i, j, idx] += p
    probs = np.array([b.probs for b in beliefs])
    u1 = np.einsum("bk,kij->bij", probs, hsg.payoff1)
    u2 = np.einsum("bk,kij->bij", probs, hsg.payoff2)
    names = [f"b{n_}" for n_ in range(n)]
    game = FiniteStochasticGame(names, list(hsg.actions1), list(hsg.actions2), trans, u1, u2,
                                metadata={"belief_reduction_depth": depth})
    init = np.zeros(n)
    for idx, p in initial.items():
        init[idx] = p
    return BeliefReduction(game, beliefs, level, init, successor, truncated)


def known_payoffs_partition(hsg: HiddenStochasticGame, tol: float = 0.0):
    """Coarsest partition of states that is revealed by the signals.

    States sharing a signal (in a transition or in the initial law) are merged.
    Payoffs must then be constant on each cell; otherwise
    :class:`NotKnownPayoffsError` is raised naming two witnesses.
    """
    K, S = hsg.n_states, len(hsg.signals)
    ds = DisjointSet(range(K))
    carriers = hsg.transition.sum(axis=(0, 1, 2)) > 0  # (K2, S)
    carriers |= hsg.initial > 0
    for s in range(S):
        ks = np.flatnonzero(carriers[:, s])
        for k in ks[1:]:
            ds.merge(int(ks[0]), int(k))
    cells = sorted((sorted(c) for c in ds.subsets()), key=lambda c: c[0])
    for cell in cells:
        ref = cell[0]
        for k in cell[1:]:
            for u, who in ((hsg.payoff1, 1), (hsg.payoff2, 2)):
                if np.max(np.abs(u[k] - u[ref])) > tol:
                    raise NotKnownPayoffsError(
                        f"states {hsg.states[ref]!r} and {hsg.states[k]!r} share a signal "
                        f"but give player {who} different payoffs", (hsg.states[ref], hsg.states[k]))
    return [[hsg.states[k] for k in cell] for cell in cells]


# JSON ----------------------------------------------------------------------------

GAME_SCHEMA = {
    "type": "object",
    "required": ["kind", "states", "actions1", "actions2", "transitions", "payoffs"],
    "properties": {
        "kind": {"enum": ["stochastic", "hidden"]},
        "states": {"type": "array", "items": {"type": "string"}, "minItems": 1, "uniqueItems": True},
        "actions1": {"type": "array", "items": {"type": "string"}, "minItems": 1, "uniqueItems": True},
        "actions2": {"type": "array", "items": {"type": "string"}, "minItems": 1, "uniqueItems": True},
        "signals": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
        "transitions": {
            "type": "array",
            "items": {"type": "array", "minItems": 5, "maxItems": 6},
        },
        "payoffs": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [{"type": "string"}, {"type": "string"}, {"type": "string"},
                                {"type": "number"}, {"type": "number"}],
                "minItems": 5, "maxItems": 5,
            },
        },
        "initial": {"type": "array", "items": {"type": "array", "minItems": 3, "maxItems": 3}},
        "metadata": {"type": "object"},
    },
}


def game_to_dict(game) -> dict:
    hidden = isinstance(game, HiddenStochasticGame)
    out = {
        "kind": "hidden" if hidden else "stochastic",
        "states": list(map(str, game.states)),
        "actions1": list(map(str, game.actions1)),
        "actions2": list(map(str, game.actions2)),
    }
    st, a1, a2 = out["states"], out["actions1"], out["actions2"]
    trans = []
    if hidden:
        out["signals"] = list(map(str, game.signals))
        for k, i, j, k2, s in zip(*np.nonzero(game.transition)):
            trans.append([st[k], a1[i], a2[j], st[k2], out["signals"][s], float(game.transition[k, i, j, k2, s])])
    else:
        for k, i, j, k2 in zip(*np.nonzero(game.transition)):
            trans.append([st[k], a1[i], a2[j], st[k2], float(game.transition[k, i, j, k2])])
    out["transitions"] = trans
    out["payoffs"] = [[st[k], a1[i], a2[j], float(game.payoff1[k, i, j]), float(game.payoff2[k, i, j])]
                      for k in range(len(st)) for i in range(len(a1)) for j in range(len(a2))]
    if hidden:
        out["initial"] = [[st[k], out["signals"][s], float(game.initial[k, s])]
                          for k, s in zip(*np.nonzero(game.initial))]
    out["metadata"] = _jsonable(game.metadata)
    return out


def _jsonable(obj):
    return json.loads(json.dumps(obj, default=float))


def game_from_dict(data: dict):
    try:
        jsonschema.validate(data, GAME_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise DomainError(f"invalid game file: {exc.message}") from None
    st = {s: n for n, s in enumerate(data["states"])}
    a1 = {s: n for n, s in enumerate(data["actions1"])}
    a2 = {s: n for n, s in enumerate(data["actions2"])}
    K, I, J = len(st), len(a1), len(a2)
    hidden = data["kind"] == "hidden"

    def look(table, key, what):
        try:
            return table[key]
        except KeyError:
            raise DomainError(f"unknown {what} {key!r}") from None

    u1 = np.zeros((K, I, J))
    u2 = np.zeros((K, I, J))
    for k, i, j, p1, p2 in data["payoffs"]:
        idx = (look(st, k, "state"), look(a1, i, "action"), look(a2, j, "action"))
        u1[idx], u2[idx] = p1, p2
    if hidden:
        sg = {s: n for n, s in enumerate(data.get("signals", []))}
        trans = np.zeros((K, I, J, K, len(sg)))
        for row in data["transitions"]:
            if len(row) != 6:
                raise DomainError("hidden-game transitions need [state, a1, a2, next, signal, prob]")
            k, i, j, k2, s, p = row
            trans[look(st, k, "state"), look(a1, i, "action"), look(a2, j, "action"),
                  look(st, k2, "state"), look(sg, s, "signal")] += p
        init = np.zeros((K, len(sg)))
        for k, s, p in data.get("initial", []):
            init[look(st, k, "state"), look(sg, s, "signal")] += p
        return HiddenStochasticGame(list(data["states"]), list(data["actions1"]), list(data["actions2"]),
                                    list(data["signals"]), trans, u1, u2, init, dict(data.get("metadata", {})))
    trans = np.zeros((K, I, J, K))
    for row in data["transitions"]:
        if len(row) != 5:
            raise DomainError("transitions need [state, a1, a2, next, prob]")
        k, i, j, k2, p = row
        trans[look(st, k, "state"), look(a1, i, "action"), look(a2, j, "action"), look(st, k2, "state")] += p
    return FiniteStochasticGame(list(data["states"]), list(data["actions1"]), list(data["actions2"]),
                                trans, u1, u2, dict(data.get("metadata", {})))


def save_game(game, path):
    with open(path, "w") as fh:
        json.dump(game_to_dict(game), fh, indent=1)


def load_game(path):
    with open(path) as fh:
        return game_from_dict(json.load(fh))


def stationary_from_actions(n_states: int, n_actions: int, choices: Sequence[int]):
    """Pure stationary strategy as a mixed-strategy matrix."""
    out = np.zeros((n_states, n_actions))
    out[np.arange(n_states), np.asarray(choices, dtype=int)] = 1.0
    return out


__all__ = [
    "Belief", "BeliefReduction", "DiscountFactor", "FiniteStochasticGame", "HiddenStochasticGame",
    "NotKnownPayoffsError", "belief_game_reduce", "belief_update", "eval_discounted_payoffs",
    "game_from_dict", "game_to_dict", "known_payoffs_partition", "load_game", "save_game",
]
