"""Search over compositions of iterate / amplify / lift for cheap (-1)-plans.

States are (t, p, k): an algorithm that p-computes NE^t with k queries. From
the Base state (0, -1, 1) the moves are

    iterate          (t + 1, 1 - 4(1-p)^2/9, 2k)
    amplify(c)       (t, T_c(p), ck)                 for 2 <= c <= c_max
    lift + amplify   terminal: lift to cos(pi/c) <= ... then amplify(c) lands
                     on p = -1. Lift-to-0 + amplify(2) is always on; the
                     other c are behind ``SearchConfig.lift_cos``.

A (-1)-computing plan for NE^t with k queries gives O((k^(1/t))^d) queries
for NE^d, so terminal states are ranked by k^(1/t). The search is best-first
on an admissible lower bound of the final exponent, so it stops as soon as
nothing left on the frontier can beat the incumbent.

The frontier runs on doubles; only the winning plan is re-evaluated with
exact rationals.
"""

from __future__ import annotations

import csv
import heapq
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .pcalc import chebyshev_t, plan_p, plan_p_float
from .plan import (
    Amplify,
    Base,
    CosPiOver,
    Iterate,
    Lift,
    Plan,
    depth,
    dimension,
    nodes_bottom_up,
    queries,
)

__all__ = [
    "SearchConfig",
    "SearchNode",
    "SearchResult",
    "NoPlanFound",
    "search",
    "lift_target_for",
    "TraceRow",
    "trace",
    "trace_csv",
    "TRACE_HEADER",
]

_MINUS_ONE_TOL = 1e-12


class NoPlanFound(RuntimeError):
    """No terminal (-1)-plan exists within the configured bounds."""


@dataclass(frozen=True)
class SearchConfig:
    t_max: int = 8
    c_max: int = 4
    p_ceiling: float = 0.99999
    grid: float = 1e-12            # dedup resolution for p
    beam_width: Optional[int] = None   # None: exhaustive best-first
    lift_cos: bool = False         # allow lift to cos(pi/c) + amplify(c), c >= 3
    max_nodes: int = 2_000_000

    def __post_init__(self):
        if self.t_max < 1:
            raise ValueError("t_max must be >= 1")
        if self.c_max < 2:
            raise ValueError("c_max must be >= 2")
        if not 0 < self.p_ceiling < 1:
            raise ValueError("p_ceiling must lie in (0, 1)")
        if self.grid <= 0:
            raise ValueError("grid must be positive")
        if self.beam_width is not None and self.beam_width < 1:
            raise ValueError("beam_width must be positive")


@dataclass(frozen=True, order=True)
class SearchNode:
    t: int
    p: float
    k: int
    moves: tuple = field(default=())

    @property
    def move(self) -> str:
        return self.moves[-1] if self.moves else "base"


@dataclass(frozen=True)
class SearchResult:
    plan: Plan
    t: int
    k: int
    exponent: float
    moves: tuple
    p: object                      # Fraction, or float for irrational lifts
    expanded: int


def lift_target_for(c: int):
    """cos(pi/c) as a plan lift target: exact where it is rational."""
    if c == 2:
        return Fraction(0)
    if c == 3:
        return Fraction(1, 2)
    return CosPiOver(c)


def _lower_bound(t: int, k: int, p: float, t_max: int) -> float:
    # any completion ends at some t' >= t with at least 2^(t'-t) k queries,
    # and needs one more factor >= 2 unless it is already at p = -1
    best = math.inf
    for t2 in range(max(t, 1), t_max + 1):
        k2 = k * 2 ** (t2 - t)
        if not (t2 == t and abs(p + 1) <= _MINUS_ONE_TOL):
            k2 *= 2
        best = min(best, k2 ** (1.0 / t2))
    return best


def _better(a: tuple, b: Optional[tuple]) -> bool:
    """Is terminal a = (t, k, moves) preferable to b? Compares k^(1/t) exactly."""
    if b is None:
        return True
    ta, ka, ma = a
    tb, kb, mb = b
    lhs, rhs = ka**tb, kb**ta        # ka^(1/ta) < kb^(1/tb)  <=>  ka^tb < kb^ta
    if lhs != rhs:
        return lhs < rhs
    if ta != tb:
        return ta < tb
    return ma < mb


def _build(moves: tuple) -> Plan:
    plan: Plan = Base()
    for mv in moves:
        if mv == "iterate":
            plan = Iterate(plan)
        elif mv.startswith("amplify("):
            plan = Amplify(plan, int(mv[len("amplify("):-1]))
        elif mv.startswith("lift("):
            # "lift(c)+amplify(c)"
            c = int(mv[len("lift("):mv.index(")")])
            plan = Amplify(Lift(plan, lift_target_for(c)), c)
        else:
            raise ValueError(f"unknown move {mv!r}")
    return plan


def _terminal_moves(node: SearchNode, cfg: SearchConfig) -> list[tuple[int, str]]:
    """(query multiplier, move) pairs that finish ``node`` at p = -1."""
    if node.t < 1:
        return []
    out = []
    if abs(node.p + 1) <= _MINUS_ONE_TOL:
        out.append((1, ""))
    cs = range(2, cfg.c_max + 1) if cfg.lift_cos else (2,)
    for c in cs:
        target = float(lift_target_for(c))
        if node.p < target - _MINUS_ONE_TOL:
            out.append((c, f"lift({c})+amplify({c})"))
        elif abs(node.p - target) <= _MINUS_ONE_TOL:
            out.append((c, f"amplify({c})"))
    return out


def search(config: SearchConfig = SearchConfig()) -> SearchResult:
    """Best (-1)-plan within the bounds of ``config``; deterministic."""
    cfg = config
    root = SearchNode(0, -1.0, 1, ())
    heap = [(_lower_bound(0, 1, -1.0, cfg.t_max), 0, 1, (), root)]
    seen: dict[tuple[int, int], int] = {}
    best: Optional[tuple] = None
    best_exp = math.inf
    expanded = 0

    while heap:
        lb, _, _, _, node = heapq.heappop(heap)
        if lb > best_exp * (1 + 1e-12):
            break
        expanded += 1
        if expanded > cfg.max_nodes:
            break

        for mult, mv in _terminal_moves(node, cfg):
            moves = node.moves + ((mv,) if mv else ())
            cand = (node.t, node.k * mult, moves)
            if _better(cand, best) and _exact_ok(moves):
                best = cand
                best_exp = cand[1] ** (1.0 / cand[0])

        children = []
        if node.t < cfg.t_max:
            p2 = 1.0 - 4.0 * (1.0 - node.p) ** 2 / 9.0
            children.append(SearchNode(node.t + 1, p2, 2 * node.k, node.moves + ("iterate",)))
        for c in range(2, cfg.c_max + 1):
            p2 = max(-1.0, min(1.0, chebyshev_t(c, node.p)))
            children.append(SearchNode(node.t, p2, c * node.k, node.moves + (f"amplify({c})",)))
        for child in children:
            if child.p > cfg.p_ceiling:
                continue
            key = (child.t, round(child.p / cfg.grid))
            if seen.get(key, math.inf) <= child.k:
                continue
            seen[key] = child.k
            clb = _lower_bound(child.t, child.k, child.p, cfg.t_max)
            if clb > best_exp * (1 + 1e-12):
                continue
            heapq.heappush(heap, (clb, child.t, child.k, child.moves, child))
        if cfg.beam_width is not None and len(heap) > cfg.beam_width:
            heap = heapq.nsmallest(cfg.beam_width, heap)
            heapq.heapify(heap)

    if best is None:
        raise NoPlanFound(f"no (-1)-computing plan within {cfg}")
    t, k, moves = best
    plan = _build(moves)
    try:
        p = plan_p(plan)
    except TypeError:
        p = plan_p_float(plan)
    return SearchResult(plan, t, k, k ** (1.0 / t), moves, p, expanded)


def _exact_ok(moves: tuple) -> bool:
    # lift-to-rational + amplify lands on -1 by construction; a bare float
    # hit on -1 must be confirmed with exact arithmetic
    if not moves or moves[-1].startswith("lift("):
        return True
    plan = _build(moves)
    try:
        return plan_p(plan) == -1
    except TypeError:
        return abs(plan_p_float(plan) + 1) <= 1e-9


# ---------------------------------------------------------------------------
# Traces

TRACE_HEADER = ("step", "move", "t", "k", "p_exact", "p_decimal", "dim")


@dataclass(frozen=True)
class TraceRow:
    step: int
    move: str
    t: int
    k: int
    p_exact: str
    p_decimal: str
    dim: int


def _move_name(node: Plan) -> str:
    if isinstance(node, Base):
        return "base"
    if isinstance(node, Iterate):
        return "iterate"
    if isinstance(node, Amplify):
        return f"amplify({node.c})"
    t = node.target
    return f"lift({'cos(pi/%d)' % t.c if isinstance(t, CosPiOver) else t})"


def trace(plan: Plan) -> list[TraceRow]:
    """One row per plan node, leaf first, with the p value after that node."""
    rows = []
    for i, node in enumerate(nodes_bottom_up(plan)):
        try:
            p = plan_p(node)
            exact = str(p)
        except TypeError:
            p = plan_p_float(node)
            exact = ""
        rows.append(TraceRow(i, _move_name(node), depth(node), queries(node), exact,
                             f"{float(p):.7g}", dimension(node)))
    return rows


def trace_csv(plan: Plan) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_HEADER)
    for r in trace(plan):
        w.writerow([r.step, r.move, r.t, r.k, r.p_exact, r.p_decimal, r.dim])
    return buf.getvalue()
