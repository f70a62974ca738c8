"""Exact p-value calculus.

Every composition rule maps the p of its child to a new p by a polynomial
with rational coefficients, so along any plan with rational lift targets
the p values stay in :class:`fractions.Fraction`. Denominators grow roughly
like 9^(2^t), which Python's big integers handle without trouble for the
depths we care about.
"""

from __future__ import annotations

import math
from functools import lru_cache
from fractions import Fraction
from numbers import Rational
from typing import NamedTuple

from .plan import Amplify, Base, CosPiOver, Iterate, Plan, PlanError, depth, queries

__all__ = [
    "iterate_p",
    "amplify_p",
    "chebyshev_t",
    "lift_p",
    "lift_mixing",
    "plan_p",
    "plan_p_float",
    "Exponent",
    "exponent",
]

ONE = Fraction(1)


def _as_fraction(p) -> Fraction:
    if isinstance(p, Fraction):
        return p
    if isinstance(p, (int, Rational)) and not isinstance(p, bool):
        return Fraction(p)
    raise TypeError(f"exact p values must be rational, got {type(p).__name__}")


def _check_range(p: Fraction) -> None:
    if not -1 <= p <= 1:
        raise ValueError(f"p must lie in [-1, 1], got {p}")


def iterate_p(p) -> Fraction:
    """p of the iterated algorithm: 1 - 4(1-p)^2/9."""
    p = _as_fraction(p)
    _check_range(p)
    return 1 - Fraction(4, 9) * (1 - p) ** 2


def chebyshev_t(c: int, p):
    """T_c(p) by the three-term recurrence; exact for rational ``p``."""
    if c < 0:
        raise ValueError("Chebyshev degree must be non-negative")
    prev, cur = 1, p
    if c == 0:
        return prev * (p ** 0)
    for _ in range(c - 1):
        prev, cur = cur, 2 * p * cur - prev
    return cur


def amplify_p(p, c: int) -> Fraction:
    """p of the c-fold amplified algorithm, cos(c arccos p) = T_c(p)."""
    if isinstance(c, bool) or not isinstance(c, int) or c < 2:
        raise ValueError(f"amplification factor must be an integer >= 2, got {c!r}")
    p = _as_fraction(p)
    _check_range(p)
    return chebyshev_t(c, p)


def lift_mixing(p, target) -> Fraction:
    """cos^2 of the ancilla mixing angle that lifts ``p`` to ``target``."""
    p = _as_fraction(p)
    target = _as_fraction(target)
    if p >= 1:
        raise ValueError("cannot lift an algorithm with p = 1: the mixing angle is undefined")
    if not p < target <= 1:
        raise ValueError(f"lift target must lie in (p, 1] = ({p}, 1], got {target}")
    return (1 - target) / (1 - p)


def lift_p(p, target) -> Fraction:
    """p after lifting; validates and returns ``target``."""
    lift_mixing(p, target)
    return _as_fraction(target)


@lru_cache(maxsize=4096)
def plan_p(plan: Plan) -> Fraction:
    """Exact p of a plan, folded bottom-up from p(Base) = -1."""
    if isinstance(plan, Base):
        return Fraction(-1)
    child = plan_p(plan.child)
    if isinstance(plan, Iterate):
        return iterate_p(child)
    if isinstance(plan, Amplify):
        return amplify_p(child, plan.c)
    if isinstance(plan.target, CosPiOver):
        raise TypeError(f"{plan.target} is irrational; use plan_p_float")
    return lift_p(child, plan.target)


@lru_cache(maxsize=4096)
def plan_p_float(plan: Plan) -> float:
    """Double-precision p of a plan; also handles cos(pi/c) lift targets."""
    if isinstance(plan, Base):
        return -1.0
    child = plan_p_float(plan.child)
    if isinstance(plan, Iterate):
        return 1.0 - 4.0 * (1.0 - child) ** 2 / 9.0
    if isinstance(plan, Amplify):
        return max(-1.0, min(1.0, chebyshev_t(plan.c, child)))
    return float(plan.target)


class Exponent(NamedTuple):
    base: float       # k^(1/d): the plan gives O(base^d) queries for NE^d
    vs_classical: float  # log_3(k)/d: the power of N = 3^d


def exponent(plan: Plan) -> Exponent:
    d = depth(plan)
    if d < 1:
        raise PlanError("the query exponent needs a plan of depth >= 1")
    try:
        p = plan_p(plan)
        ok = p == -1
    except TypeError:
        ok = abs(plan_p_float(plan) + 1.0) < 1e-12
    if not ok:
        raise PlanError("the plan does not (-1)-compute NE^d")
    k = queries(plan)
    return Exponent(math.exp(math.log(k) / d), math.log(k, 3) / d)
