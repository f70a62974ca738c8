"""Matrix-free state-vector interpreter for plans.

The state space of a plan is laid out recursively:

* ``Base``        one coordinate, the query ``|1> -> (-1)^x |1>``;
* ``Iterate(P)``  three consecutive blocks, each a copy of P's space, the
                  l-th block reading the l-th third of the input;
* ``Amplify(P)``  P's space unchanged;
* ``Lift(P)``     P's space followed by one ancilla coordinate that queries
                  and child unitaries leave alone.

Every plan is applied to a whole batch of states at once. A batch is a
``(B, dim)`` array of row vectors with a matching ``(B, 3^depth)`` array of
input bits. Running ``Iterate(P)`` on a batch of B states reshapes it into a
batch of 3B states for P, so the Python-level work is proportional to the
number of queries, not to the number of copies of the base algorithm. The
reflections are rank-one (or rank-three) updates against stored start
states; no dense operator is ever formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .pcalc import lift_mixing, plan_p, plan_p_float
from .plan import (
    Amplify,
    Base,
    CosPiOver,
    Iterate,
    Lift,
    Plan,
    PlanError,
    depth,
    dimension,
)

__all__ = [
    "FORWARD",
    "INVERSE",
    "OverlapResult",
    "DecisionError",
    "start_state",
    "apply",
    "apply_many",
    "overlap",
    "overlap_many",
    "iterate_beta",
    "to_dense_matrix",
    "write_matrix_csv",
    "exact_decide",
    "exact_decide_many",
    "DENSE_DIM_LIMIT",
]

FORWARD = "forward"
INVERSE = "inverse"
DENSE_DIM_LIMIT = 4096
DECISION_TOL = 1e-9


class DecisionError(RuntimeError):
    """An exact decision came out with success probability short of 1."""


@dataclass(frozen=True)
class OverlapResult:
    overlap: complex
    residual_norm: float


# ---------------------------------------------------------------------------
# Start states

def _lift_cos(plan: Lift) -> float:
    """cos(alpha) of the ancilla mixing, the non-negative root."""
    if isinstance(plan.target, CosPiOver):
        p = plan_p_float(plan.child)
        cos2 = (1.0 - float(plan.target)) / (1.0 - p)
    else:
        try:
            cos2 = float(lift_mixing(plan_p(plan.child), plan.target))
        except TypeError:
            p = plan_p_float(plan.child)
            cos2 = (1.0 - float(plan.target)) / (1.0 - p)
    return math.sqrt(min(max(cos2, 0.0), 1.0))


@lru_cache(maxsize=256)
def _start(plan: Plan) -> np.ndarray:
    if isinstance(plan, Base):
        return np.ones(1)
    child = _start(plan.child)
    if isinstance(plan, Iterate):
        return np.tile(child, 3) / math.sqrt(3.0)
    if isinstance(plan, Amplify):
        return child
    cos_a = _lift_cos(plan)
    sin_a = math.sqrt(max(0.0, 1.0 - cos_a * cos_a))
    return np.concatenate([cos_a * child, [sin_a]])


def start_state(plan: Plan) -> np.ndarray:
    """The plan's start state as a complex vector of length ``dimension(plan)``."""
    return _start(plan).astype(complex)


# ---------------------------------------------------------------------------
# Application

def _reflect_start(states: np.ndarray, s: np.ndarray) -> np.ndarray:
    # fix s, negate everything orthogonal to it: v -> 2<s|v> s - v
    coef = states @ s
    out = np.multiply.outer(2.0 * coef, s)
    out -= states
    return out


def _iterate_reflection(states: np.ndarray, s: np.ndarray) -> np.ndarray:
    # states: (3B, m), rows grouped in threes. Within span{s^(1), s^(2), s^(3)}
    # fix the uniform superposition and negate its complement; identity on
    # everything orthogonal to the three child start states.
    coef = (states @ s).reshape(-1, 3)
    shift = (2.0 / 3.0) * (coef[:, 0] + coef[:, 1] + coef[:, 2])[:, None] - 2.0 * coef
    shift = shift.reshape(-1)
    if s.size <= 32:
        # column updates avoid a full-size temporary for small blocks
        for j in range(s.size):
            states[:, j] += shift * s[j]
    else:
        states += np.multiply.outer(shift, s)
    return states


def _run(plan: Plan, states: np.ndarray, signs: np.ndarray, inverse: bool) -> np.ndarray:
    """Apply ``plan`` in place where possible.

    ``signs`` holds (-1)^x for each input bit, shape (B, 3^depth).
    """
    if isinstance(plan, Base):
        # the query is its own inverse
        states *= signs
        return states
    if isinstance(plan, Iterate) and isinstance(plan.child, Base):
        # fused Q, reflection, Q on the three query coordinates
        x = states.reshape(-1, 3)
        sg = signs.reshape(-1, 3)
        x *= sg
        mean2 = (2.0 / 3.0) * (x[:, 0] + x[:, 1] + x[:, 2])
        np.subtract(mean2[:, None], x, out=x)
        x *= sg
        return states
    if isinstance(plan, Iterate):
        b, dim = states.shape
        m = dim // 3
        sub = states.reshape(3 * b, m)
        sub_signs = signs.reshape(3 * b, signs.shape[1] // 3)
        # A' = V^-1 T V is its own inverse, so both directions run the same steps
        sub = _run(plan.child, sub, sub_signs, False)
        sub = _iterate_reflection(sub, _start(plan.child))
        sub = _run(plan.child, sub, sub_signs, True)
        return sub.reshape(b, dim)
    if isinstance(plan, Amplify):
        s = _start(plan.child)
        # V_1, T, V_2, T, ..., T, V_c with V_i = A (i odd) or A^-1 (i even);
        # the inverse runs the reversed sequence with each V_i inverted
        order = range(plan.c, 0, -1) if inverse else range(1, plan.c + 1)
        for n, i in enumerate(order):
            if n:
                states = _reflect_start(states, s)
            child_inverse = (i % 2 == 0) != inverse
            states = _run(plan.child, states, signs, child_inverse)
        return states
    m = states.shape[1] - 1
    states[:, :m] = _run(plan.child, np.ascontiguousarray(states[:, :m]), signs, inverse)
    return states


def _signs(bits: np.ndarray, dtype=float) -> np.ndarray:
    return np.ascontiguousarray(1 - 2 * bits.astype(dtype))


def _as_bits(plan: Plan, bits) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.int8)
    if bits.ndim == 1:
        bits = bits[None, :]
    n = 3 ** depth(plan)
    if bits.shape[-1] != n:
        raise PlanError(f"plan of depth {depth(plan)} needs {n} input bits, got {bits.shape[-1]}")
    if bits.size and not np.all((bits == 0) | (bits == 1)):
        raise PlanError("input bits must be 0 or 1")
    return bits


def _check_direction(direction: str) -> bool:
    if direction not in (FORWARD, INVERSE):
        raise ValueError(f"direction must be {FORWARD!r} or {INVERSE!r}, got {direction!r}")
    return direction == INVERSE


def apply_many(plan: Plan, bits, states: np.ndarray, direction: str = FORWARD) -> np.ndarray:
    """Apply the plan's unitary to each row of ``states`` with the matching input row."""
    inverse = _check_direction(direction)
    bits = _as_bits(plan, bits)
    states = np.asarray(states, dtype=complex)
    dim = dimension(plan)
    if states.ndim != 2 or states.shape[1] != dim:
        raise PlanError(f"states must have shape (batch, {dim}), got {states.shape}")
    if bits.shape[0] == 1 and states.shape[0] > 1:
        bits = np.broadcast_to(bits, (states.shape[0], bits.shape[1]))
    if bits.shape[0] != states.shape[0]:
        raise PlanError("need one input row per state row")
    return _run(plan, np.array(states), _signs(bits), inverse)


def apply(plan: Plan, bits, state=None, direction: str = FORWARD) -> np.ndarray:
    """Apply the plan (or its inverse) on input ``bits`` to ``state``.

    ``state`` defaults to the plan's start state.
    """
    if state is None:
        state = start_state(plan)
    state = np.asarray(state, dtype=complex)
    if state.ndim != 1:
        raise PlanError("apply takes a single state vector; use apply_many for batches")
    return apply_many(plan, _as_bits(plan, bits)[:1], state[None, :], direction)[0]


def overlap_many(plan: Plan, bits, chunk: int = 8) -> tuple[np.ndarray, np.ndarray]:
    """Overlaps and residual norms for every input row, in input order."""
    bits = _as_bits(plan, bits)
    # every operator in a plan is real, so real arithmetic starting from the
    # real start state gives the same amplitudes at half the cost
    s = _start(plan)
    overlaps = np.empty(bits.shape[0], dtype=complex)
    residuals = np.empty(bits.shape[0])
    for lo in range(0, bits.shape[0], chunk):
        block = bits[lo:lo + chunk]
        states = np.tile(s, (block.shape[0], 1))
        out = _run(plan, states, _signs(block), False)
        ov = out @ s
        overlaps[lo:lo + chunk] = ov
        residuals[lo:lo + chunk] = np.linalg.norm(out - ov[:, None] * s[None, :], axis=1)
    return overlaps, residuals


def overlap(plan: Plan, bits) -> OverlapResult:
    """<start| A |start> and the norm of the part of A|start> orthogonal to start."""
    ov, res = overlap_many(plan, _as_bits(plan, bits)[:1])
    return OverlapResult(complex(ov[0]), float(res[0]))


def iterate_beta(plan: Iterate, bits) -> float:
    """Norm of the component of V|start> that the Iterate reflection negates.

    V runs the three child copies in parallel; the negated part is the
    projection onto span{child starts} orthogonal to their uniform sum.
    """
    if not isinstance(plan, Iterate):
        raise PlanError("iterate_beta needs an Iterate plan")
    bits = _as_bits(plan, bits)[:1]
    child_start = _start(plan.child)
    states = np.tile(child_start.astype(complex), (3, 1))
    out = _run(plan.child, states, _signs(bits.reshape(3, -1)), False) / math.sqrt(3.0)
    coef = out @ child_start
    return float(np.linalg.norm(coef - coef.mean()))


# ---------------------------------------------------------------------------
# Dense oracle and exact decision

def to_dense_matrix(plan: Plan, bits, limit: int = DENSE_DIM_LIMIT,
                    direction: str = FORWARD) -> np.ndarray:
    """Dense unitary of the plan on one input, column j = A e_j."""
    dim = dimension(plan)
    if dim > limit:
        raise PlanError(f"dimension {dim} exceeds the dense-matrix guard of {limit}")
    bits = _as_bits(plan, bits)[:1]
    cols = apply_many(plan, np.repeat(bits, dim, axis=0), np.eye(dim, dtype=complex), direction)
    return cols.T


def write_matrix_csv(matrix: np.ndarray, path_or_file) -> None:
    """Row-major CSV, each cell written as a ``re,im`` pair."""
    lines = []
    for row in np.asarray(matrix, dtype=complex):
        lines.append(",".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row))
    text = "\n".join(lines) + "\n"
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w", newline="") as fh:
            fh.write(text)


def exact_decide(plan: Plan, bits, tol: float = DECISION_TOL) -> int:
    """Measure the start-state projector after a 0-computing plan.

    Outcome "start state" means NE^d = 0, "orthogonal" means NE^d = 1.
    Raises :class:`DecisionError` if the winning outcome has probability
    further than ``tol`` from 1.
    """
    if plan_p(plan) != 0:
        raise PlanError(f"exact decision needs a 0-computing plan, this one has p = {plan_p(plan)}")
    prob_start = abs(overlap(plan, bits).overlap) ** 2
    outcome = 0 if prob_start >= 0.5 else 1
    win = prob_start if outcome == 0 else 1.0 - prob_start
    if win < 1.0 - tol:
        raise DecisionError(f"decision succeeds only with probability {win:.12g}")
    return outcome


def exact_decide_many(plan: Plan, bits, tol: float = DECISION_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`exact_decide`; returns outcomes and winning probabilities."""
    if plan_p(plan) != 0:
        raise PlanError(f"exact decision needs a 0-computing plan, this one has p = {plan_p(plan)}")
    ov, _ = overlap_many(plan, bits)
    prob_start = np.abs(ov) ** 2
    outcomes = (prob_start < 0.5).astype(np.int8)
    win = np.where(outcomes == 0, prob_start, 1.0 - prob_start)
    return outcomes, win
