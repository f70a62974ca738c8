"""Algorithm plans, the NE function family, and per-plan bookkeeping.

A plan is a small expression tree describing how a query algorithm is put
together from the three composition rules:

    Base                 1 query, 1-dimensional, (-1)-computes NE^0
    Iterate(P)           three parallel copies of P plus a reflection, NE^{d+1}
    Amplify(P, c)        P and its inverse alternated with start-state reflections
    Lift(P, target)      ancilla mixing that raises p to ``target`` for free

Plans are frozen dataclasses, so they hash, compare structurally and can be
shared between threads.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

__all__ = [
    "Base",
    "Iterate",
    "Amplify",
    "Lift",
    "CosPiOver",
    "Plan",
    "PlanError",
    "PlanSyntaxError",
    "PlanStats",
    "eval_ne",
    "eval_ne_d",
    "eval_ne_d_many",
    "depth",
    "queries",
    "dimension",
    "plan_stats",
    "nodes_bottom_up",
    "parse_plan",
    "render_plan",
]


class PlanError(ValueError):
    """Raised for malformed plans or inputs that do not fit a plan."""


class PlanSyntaxError(PlanError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text[:pos]}<HERE>{text[pos:]}")


@dataclass(frozen=True)
class CosPiOver:
    """The irrational lift target cos(pi / c).

    Only the planner produces these; the exact p calculus refuses them.
    """

    c: int

    def __post_init__(self):
        if not isinstance(self.c, int) or self.c < 2:
            raise PlanError(f"cos(pi/c) needs an integer c >= 2, got {self.c!r}")

    def __float__(self) -> float:
        return math.cos(math.pi / self.c)


LiftTarget = Union[Fraction, CosPiOver]


@dataclass(frozen=True)
class Base:
    def __repr__(self) -> str:
        return "Base()"


@dataclass(frozen=True)
class Iterate:
    child: "Plan"


@dataclass(frozen=True)
class Amplify:
    child: "Plan"
    c: int

    def __post_init__(self):
        if isinstance(self.c, bool) or not isinstance(self.c, int) or self.c < 2:
            raise PlanError(f"amplification factor must be an integer >= 2, got {self.c!r}")


@dataclass(frozen=True)
class Lift:
    child: "Plan"
    target: LiftTarget

    def __post_init__(self):
        target = self.target
        if isinstance(target, (int, str)) and not isinstance(target, bool):
            target = Fraction(target)
            object.__setattr__(self, "target", target)
        if not isinstance(target, (Fraction, CosPiOver)):
            raise PlanError(f"lift target must be a Fraction or CosPiOver, got {target!r}")
        from .pcalc import plan_p_float, plan_p

        if isinstance(target, Fraction) and target > 1:
            raise PlanError(f"lift target {target} exceeds 1")
        if _is_exact(self.child) and isinstance(target, Fraction):
            p_child = plan_p(self.child)
            if target <= p_child:
                raise PlanError(f"lift target {target} must exceed the child's p = {p_child}")
        elif float(target) <= plan_p_float(self.child):
            raise PlanError(f"lift target {float(target)} must exceed the child's p")


Plan = Union[Base, Iterate, Amplify, Lift]


def _is_exact(plan: Plan) -> bool:
    while not isinstance(plan, Base):
        if isinstance(plan, Lift) and isinstance(plan.target, CosPiOver):
            return False
        plan = plan.child
    return True


# ---------------------------------------------------------------------------
# The function family

def eval_ne(bits: Sequence[int]) -> int:
    """Not-all-equal on exactly three bits."""
    if len(bits) != 3:
        raise PlanError(f"NE takes exactly 3 bits, got {len(bits)}")
    a, b, c = (int(x) for x in bits)
    return 0 if a == b == c else 1


def eval_ne_d(d: int, bits: Sequence[int]) -> int:
    """NE^d evaluated recursively over consecutive thirds of ``bits``."""
    n = len(bits)
    if d < 0 or n != 3**d:
        raise PlanError(f"NE^{d} needs {3**max(d, 0)} bits, got {n}")
    if d == 0:
        return int(bits[0])
    third = n // 3
    return eval_ne([eval_ne_d(d - 1, bits[i * third:(i + 1) * third]) for i in range(3)])


def eval_ne_d_many(d: int, bits: np.ndarray) -> np.ndarray:
    """Vectorised NE^d over the rows of a (batch, 3^d) 0/1 array."""
    bits = np.asarray(bits, dtype=np.int8)
    if bits.ndim == 1:
        bits = bits[None, :]
    if bits.shape[1] != 3**d:
        raise PlanError(f"NE^{d} needs {3**d} bits, got {bits.shape[1]}")
    # children of every gate are consecutive thirds, so the lowest gates
    # read contiguous triples at every level
    vals = bits
    for _ in range(d):
        vals = vals.reshape(vals.shape[0], -1, 3)
        vals = (vals.min(axis=2) != vals.max(axis=2)).astype(np.int8)
    return vals[:, 0]


# ---------------------------------------------------------------------------
# Bookkeeping

def depth(plan: Plan) -> int:
    if isinstance(plan, Base):
        return 0
    if isinstance(plan, Iterate):
        return depth(plan.child) + 1
    return depth(plan.child)


def queries(plan: Plan) -> int:
    if isinstance(plan, Base):
        return 1
    if isinstance(plan, Iterate):
        return 2 * queries(plan.child)
    if isinstance(plan, Amplify):
        return plan.c * queries(plan.child)
    return queries(plan.child)


def dimension(plan: Plan) -> int:
    if isinstance(plan, Base):
        return 1
    if isinstance(plan, Iterate):
        return 3 * dimension(plan.child)
    if isinstance(plan, Lift):
        return dimension(plan.child) + 1
    return dimension(plan.child)


@dataclass(frozen=True)
class PlanStats:
    depth: int
    queries: int
    dimension: int
    p: Fraction


def plan_stats(plan: Plan) -> PlanStats:
    from .pcalc import plan_p

    return PlanStats(depth(plan), queries(plan), dimension(plan), plan_p(plan))


def nodes_bottom_up(plan: Plan) -> list[Plan]:
    """Every node of the plan, leaf first."""
    out = [plan]
    while not isinstance(plan, Base):
        plan = plan.child
        out.append(plan)
    return out[::-1]


# ---------------------------------------------------------------------------
# Text form
#
#   plan     := "base" | "iterate(" plan ")" | "amplify(" INT "," plan ")"
#             | "lift(" target "," plan ")"
#   target   := INT | INT "/" INT | "cos(pi/" INT ")"

_TOKEN = re.compile(r"\s*(?:(?P<word>[a-z]+)|(?P<int>-?\d+)|(?P<punct>[(),/]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PlanSyntaxError("unexpected character", text, pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str, value: str | None = None):
        tok = self.tokens[self.i]
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = repr(value) if value is not None else kind
            got = repr(tok[1]) if tok[1] else "end of input"
            raise PlanSyntaxError(f"expected {want}, got {got}", self.text, tok[2])
        self.i += 1
        return tok

    def integer(self) -> int:
        return int(self.take("int")[1])

    def target(self) -> LiftTarget:
        kind, value, pos = self.peek()
        if kind == "word":
            self.take("word", "cos")
            self.take("punct", "(")
            self.take("word", "pi")
            self.take("punct", "/")
            c = self.integer()
            self.take("punct", ")")
            try:
                return CosPiOver(c)
            except PlanError as e:
                raise PlanSyntaxError(str(e), self.text, pos) from None
        num = self.integer()
        if self.peek()[1] == "/":
            self.take("punct", "/")
            den_pos = self.peek()[2]
            den = self.integer()
            if den <= 0:
                raise PlanSyntaxError("denominator must be positive", self.text, den_pos)
            return Fraction(num, den)
        return Fraction(num)

    def plan(self) -> Plan:
        kind, word, pos = self.peek()
        if kind != "word":
            raise PlanSyntaxError("expected a plan keyword", self.text, pos)
        self.take("word")
        if word == "base":
            return Base()
        if word == "iterate":
            self.take("punct", "(")
            child = self.plan()
            self.take("punct", ")")
            return Iterate(child)
        if word == "amplify":
            self.take("punct", "(")
            c_pos = self.peek()[2]
            c = self.integer()
            self.take("punct", ",")
            child = self.plan()
            self.take("punct", ")")
            try:
                return Amplify(child, c)
            except PlanError as e:
                raise PlanSyntaxError(str(e), self.text, c_pos) from None
        if word == "lift":
            self.take("punct", "(")
            t_pos = self.peek()[2]
            target = self.target()
            self.take("punct", ",")
            child = self.plan()
            self.take("punct", ")")
            try:
                return Lift(child, target)
            except PlanError as e:
                raise PlanSyntaxError(str(e), self.text, t_pos) from None
        raise PlanSyntaxError(f"unknown plan keyword {word!r}", self.text, pos)


def parse_plan(text: str) -> Plan:
    parser = _Parser(text)
    plan = parser.plan()
    parser.take("end")
    return plan


def _render_target(target: LiftTarget) -> str:
    if isinstance(target, CosPiOver):
        return f"cos(pi/{target.c})"
    if target.denominator == 1:
        return str(target.numerator)
    return f"{target.numerator}/{target.denominator}"


def render_plan(plan: Plan) -> str:
    if isinstance(plan, Base):
        return "base"
    if isinstance(plan, Iterate):
        return f"iterate({render_plan(plan.child)})"
    if isinstance(plan, Amplify):
        return f"amplify({plan.c}, {render_plan(plan.child)})"
    return f"lift({_render_target(plan.target)}, {render_plan(plan.child)})"
