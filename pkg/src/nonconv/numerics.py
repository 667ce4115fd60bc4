"""Log-space helpers and the discount-factor representation.

Discount factors close to one are the normal case here, so every formula is
written in terms of ``x = 1 - delta`` and, when ``x`` itself underflows, in
terms of ``log x``.  The log complement is the authoritative field.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LN2 = math.log(2.0)

# Threshold below which the complement must be passed explicitly on the CLI.
EXPLICIT_COMPLEMENT_BELOW = 1e-12


class DomainError(ValueError):
    """A parameter lies outside the domain of the requested operation."""


def log1mexp(x):
    """Return ``log(1 - exp(x))`` for ``x <= 0`` without cancellation."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(x > -LN2, np.log(-np.expm1(x)), np.log1p(-np.exp(x)))
    return out if out.ndim else float(out)


def logaddexp(a, b):
    out = np.logaddexp(a, b)
    return out if np.ndim(out) else float(out)


def logsubexp(a, b):
    """Return ``log(exp(a) - exp(b))`` for ``a >= b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = a + log1mexp(b - a)
    return out if np.ndim(out) else float(out)


def frac(x):
    return x - np.floor(x)


@dataclass(frozen=True)
class DiscountFactor:
    """A discount factor ``delta`` in ``[0, 1)`` stored through its complement.

    ``complement`` is ``1 - delta`` as a float and may underflow to ``0.0`` for
    extremely patient players; ``log_complement`` is always finite and is what
    the formulas use.
    """

    log_complement: float
    complement: float

    def __post_init__(self):
        lc = self.log_complement
        if not math.isfinite(lc) or lc > 0.0:
            raise DomainError(f"log(1 - delta) must be finite and <= 0, got {lc}")

    @classmethod
    def from_delta(cls, delta: float) -> "DiscountFactor":
        delta = float(delta)
        if not 0.0 <= delta < 1.0:
            raise DomainError(f"delta must lie in [0, 1), got {delta}")
        x = 1.0 - delta
        return cls(math.log(x), x)

    @classmethod
    def from_complement(cls, x: float) -> "DiscountFactor":
        x = float(x)
        if not 0.0 < x <= 1.0:
            raise DomainError(f"1 - delta must lie in (0, 1], got {x}")
        return cls(math.log(x), x)

    @classmethod
    def from_log_complement(cls, lc: float) -> "DiscountFactor":
        lc = float(lc)
        return cls(lc, math.exp(lc))

    @property
    def delta(self) -> float:
        return 1.0 - self.complement

    @property
    def log_delta(self) -> float:
        return log1mexp(self.log_complement)

    def __float__(self):
        return self.delta

    def __repr__(self):
        if self.complement >= 1e-4:
            return f"DiscountFactor(delta={self.delta!r})"
        return f"DiscountFactor(log_complement={self.log_complement!r})"


def as_discount(d) -> DiscountFactor:
    """Coerce a float ``delta`` or a :class:`DiscountFactor`."""
    if isinstance(d, DiscountFactor):
        return d
    return DiscountFactor.from_delta(d)


def horizon_cap(delta: DiscountFactor, tail: float = 1e-12) -> int:
    """Smallest ``T`` with ``delta**T <= tail``."""
    ld = delta.log_delta
    if ld == -math.inf:
        return 1
    if ld == 0.0:
        raise DomainError("discount factor too close to one for a finite horizon")
    return int(math.ceil(math.log(tail) / ld))


def check_probability(name: str, p: float, *, open_left=True, open_right=True):
    p = float(p)
    lo_ok = p > 0.0 if open_left else p >= 0.0
    hi_ok = p < 1.0 if open_right else p <= 1.0
    if not (lo_ok and hi_ok and math.isfinite(p)):
        raise DomainError(f"{name} out of range: {p}")
    return p
