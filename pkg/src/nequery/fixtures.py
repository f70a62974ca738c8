"""The three worked examples for NE and NE^2, built from explicit matrices.

These are written independently of the plan interpreter (dense 4x4 and
13x13 matrices, no recursion) so they can serve as a cross-check on it.

Basis order for the 4-dimensional space of Algorithms 1 and 2 is
|0>, |1>, |2>, |3>; |i> for i >= 1 is the query coordinate of x_i.
Algorithm 3 uses one extra |0> followed by three copies of that space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .plan import Base, Iterate, PlanError, eval_ne, eval_ne_d
from .simulator import apply, iterate_beta, start_state

__all__ = [
    "U1",
    "PSI_START",
    "algorithm1_final_state",
    "algorithm2_unitary",
    "algorithm2_final_state",
    "algorithm3_space",
    "algorithm3_final_state",
    "FixtureCheck",
    "run_fixtures",
]

_R3 = 1.0 / math.sqrt(3.0)

# Rows ordered so that U1 Q |psi_start> has the closed-form amplitudes
# ((-1)^x1 - (-1)^x3)/3, ((-1)^x2 - (-1)^x1)/3, ((-1)^x3 - (-1)^x2)/3 on
# |1>, |2>, |3>. The transposed layout also sends psi_start to |0> and
# differs only by a permutation of the |1>..|3> amplitudes.
U1 = _R3 * np.array(
    [
        [0, 1, 1, 1],
        [1, 1, 0, -1],
        [1, -1, 1, 0],
        [1, 0, -1, 1],
    ],
    dtype=float,
)

PSI_START = _R3 * np.array([0.0, 1.0, 1.0, 1.0])

# sign flip on the "NE = 1 is certain" coordinates
_T4 = np.diag([1.0, -1.0, -1.0, -1.0])


def _check3(bits) -> np.ndarray:
    bits = np.asarray(bits, dtype=int)
    if bits.shape != (3,) or not np.all((bits == 0) | (bits == 1)):
        raise PlanError(f"expected three 0/1 bits, got {bits.tolist()}")
    return bits


def _query4(bits) -> np.ndarray:
    bits = _check3(bits)
    return np.diag(np.concatenate([[1.0], (-1.0) ** bits]))


def algorithm1_final_state(bits) -> np.ndarray:
    """U1 Q |psi_start> as four complex amplitudes."""
    return (U1 @ _query4(bits) @ PSI_START).astype(complex)


def algorithm2_unitary(bits) -> np.ndarray:
    """Q, then U1^-1 T U1, then Q (rightmost factor acts first)."""
    q = _query4(bits)
    return q @ U1.T @ _T4 @ U1 @ q


def algorithm2_final_state(bits) -> np.ndarray:
    return (algorithm2_unitary(bits) @ PSI_START).astype(complex)


@dataclass(frozen=True)
class Algorithm3Space:
    dim: int
    zero: np.ndarray              # the extra |0>
    child_starts: tuple           # |psi_start,1>, |psi_start,2>, |psi_start,3>
    start: np.ndarray
    u2: np.ndarray


def algorithm3_space() -> Algorithm3Space:
    dim = 1 + 3 * 4
    zero = np.zeros(dim)
    zero[0] = 1.0
    starts = []
    for l in range(3):
        v = np.zeros(dim)
        v[1 + 4 * l:5 + 4 * l] = PSI_START
        starts.append(v)
    p1, p2, p3 = starts
    start = _R3 * (p1 + p2 + p3)
    # U2 on span{|0>, psi_1, psi_2, psi_3}, identity on the rest. The images
    # of psi_l are as given; |0> goes to the remaining orthonormal direction.
    images = {
        0: _R3 * (p1 + p2 + p3),
        1: _R3 * (zero + p1 - p2),
        2: _R3 * (zero + p2 - p3),
        3: _R3 * (zero + p3 - p1),
    }
    basis = [zero, p1, p2, p3]
    u2 = np.eye(dim)
    for j, b in enumerate(basis):
        u2 += np.outer(images[j], b) - np.outer(b, b)
    return Algorithm3Space(dim, zero, tuple(starts), start, u2)


def algorithm3_final_state(bits) -> np.ndarray:
    """Three parallel copies of Algorithm 2 on the thirds of ``bits``, then U2."""
    bits = np.asarray(bits, dtype=int)
    if bits.shape != (9,):
        raise PlanError(f"Algorithm 3 reads 9 bits, got {bits.size}")
    space = algorithm3_space()
    v = np.eye(space.dim)
    for l in range(3):
        lo = 1 + 4 * l
        v[lo:lo + 4, lo:lo + 4] = algorithm2_unitary(bits[3 * l:3 * l + 3])
    return (space.u2 @ v @ space.start).astype(complex)


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FixtureCheck:
    name: str
    passed: bool
    detail: str


def _all_inputs(n: int) -> np.ndarray:
    return ((np.arange(2**n)[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.int8)


def run_fixtures(tol: float = 1e-10) -> list[FixtureCheck]:
    """Run every fixture check; one entry per named claim."""
    checks: list[FixtureCheck] = []

    def record(name, err, limit=tol):
        checks.append(FixtureCheck(name, bool(err <= limit), f"max error {err:.3e}"))

    third = 1.0 / 3.0
    record("algorithm1 (0,0,0) -> |0>",
           np.abs(algorithm1_final_state((0, 0, 0)) - [1, 0, 0, 0]).max())
    record("algorithm1 (0,0,1) -> (1/3, 2/3, 0, -2/3)",
           np.abs(algorithm1_final_state((0, 0, 1)) - [third, 2 * third, 0, -2 * third]).max())

    inputs3 = _all_inputs(3)
    err_formula = err_prob = 0.0
    for x in inputs3:
        sg = (-1.0) ** x
        formula = np.array([sg.sum(), sg[0] - sg[2], sg[1] - sg[0], sg[2] - sg[1]]) / 3.0
        final = algorithm1_final_state(x)
        err_formula = max(err_formula, np.abs(final - formula).max())
        if eval_ne(x):
            err_prob = max(err_prob, abs(np.sum(np.abs(final[1:]) ** 2) - 8.0 / 9.0))
        else:
            err_prob = max(err_prob, np.sum(np.abs(final[1:]) ** 2))
    record("algorithm1 final-state formula, all 8 inputs", err_formula)
    record("algorithm1 outputs 1 with probability 8/9 iff NE = 1", err_prob)

    err = 0.0
    for x in inputs3:
        final = algorithm2_final_state(x)
        want = -7.0 / 9.0 if eval_ne(x) else 1.0
        err = max(err, abs(np.vdot(PSI_START, final) - want))
    record("algorithm2 start amplitude is -7/9 (NE = 1) or 1 (NE = 0)", err)

    # the interpreter's Iterate(Base) lives on the three query coordinates
    plan = Iterate(Base())
    err = 0.0
    for x in inputs3:
        fixture = algorithm2_final_state(x)
        interp = apply(plan, x, start_state(plan))
        err = max(err, abs(fixture[0]), np.abs(fixture[1:] - interp).max())
    record("algorithm2 matches the Iterate(base) interpreter", err)

    # Algorithm 1 is the "V then rotate the start state to |0>" half: its |0>
    # amplitude is <start|V|start> and the rest is the reflected component
    err = 0.0
    for x in inputs3:
        final = algorithm1_final_state(x)
        s = start_state(plan)
        v_start = s * (-1.0) ** x
        err = max(err, abs(final[0] - np.vdot(s, v_start)),
                  abs(np.linalg.norm(final[1:]) - iterate_beta(plan, x)))
    record("algorithm1 splits as the Iterate(base) interpreter's V", err)

    space = algorithm3_space()
    zero = algorithm3_final_state(np.zeros(9, dtype=int))
    record("algorithm3 on all-zeros -> |0>", np.abs(zero - space.zero).max())

    inputs9 = _all_inputs(9)
    err = 0.0
    for x in inputs9:
        if eval_ne_d(2, x) == 0:
            final = algorithm3_final_state(x)
            err = max(err, max(abs(np.vdot(ps, final)) for ps in space.child_starts))
    record("algorithm3 NE^2 = 0 final state is orthogonal to every child start", err)

    y = np.array([1, 0, 0, 0, 1, 0, 0, 0, 1])
    final = algorithm3_final_state(y)
    amp0 = np.vdot(space.zero, final)
    perp = final - amp0 * space.zero
    err = max(abs(amp0 + 7.0 / 9.0), max(abs(np.vdot(ps, perp)) for ps in space.child_starts))
    record("algorithm3 with all child values 1 -> -(7/9)|0> + psi_perp", err)
    return checks
