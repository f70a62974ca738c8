"""Conformance checks for plans, with plain-text and CSV reports.

A plan p-computes NE^d when its overlap is exactly 1 on every NE^d = 0 input
and exactly p on every NE^d = 1 input. The checks here run the simulator
over an input set and compare against the exact p from the calculus, using
hard thresholds.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .pcalc import plan_p, plan_p_float
from .plan import Plan, PlanError, depth, eval_ne_d, eval_ne_d_many, render_plan
from .simulator import exact_decide_many, overlap_many

__all__ = [
    "DEFAULT_SEED",
    "DEFAULT_TOL",
    "InputSet",
    "exhaustive_inputs",
    "random_inputs",
    "structured_inputs",
    "VerificationReport",
    "verify_p_computation",
    "verify_exact",
    "sensitivity_check",
]

DEFAULT_SEED = 42
DEFAULT_TOL = 1e-9
EXHAUSTIVE_MAX_DEPTH = 3


@dataclass(frozen=True)
class InputSet:
    """A reproducible collection of inputs for NE^d, produced in batches."""

    d: int
    descriptor: str
    count: int
    _batches: Callable[[], Iterator[np.ndarray]] = field(repr=False, compare=False)

    def batches(self) -> Iterator[np.ndarray]:
        return self._batches()

    def array(self) -> np.ndarray:
        return np.concatenate(list(self.batches()), axis=0)

    @classmethod
    def from_array(cls, d: int, bits, descriptor: str = "explicit") -> "InputSet":
        bits = np.atleast_2d(np.asarray(bits, dtype=np.int8))
        if bits.shape[1] != 3**d:
            raise PlanError(f"inputs for NE^{d} need {3**d} bits, got {bits.shape[1]}")
        return cls(d, descriptor, bits.shape[0], lambda: iter([bits]))


def exhaustive_inputs(d: int, batch: int = 1 << 14, allow_deep: bool = False) -> InputSet:
    """All 2^(3^d) inputs in lexicographic order (first bit most significant)."""
    if d > EXHAUSTIVE_MAX_DEPTH or (d == EXHAUSTIVE_MAX_DEPTH and not allow_deep):
        raise PlanError(
            f"exhaustive inputs at d = {d} are 2^{3**d} strings; "
            "d = 3 needs allow_deep=True and nothing deeper is supported"
        )
    n = 3**d
    total = 1 << n
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)

    def gen():
        for lo in range(0, total, batch):
            idx = np.arange(lo, min(lo + batch, total), dtype=np.int64)
            yield ((idx[:, None] >> shifts) & 1).astype(np.int8)

    return InputSet(d, f"exhaustive d={d}", total, gen)


def random_inputs(d: int, n: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, size=(n, 3**d), dtype=np.int8)


def _single_one(n: int, pos: int) -> np.ndarray:
    x = np.zeros(n, dtype=np.int8)
    x[pos] = 1
    return x


def _structured_rows(d: int) -> list[np.ndarray]:
    n = 3**d
    rows = [np.zeros(n, dtype=np.int8), np.ones(n, dtype=np.int8)]
    if d == 0:
        return rows
    m = n // 3
    # single 1 at each top-level block boundary and at the very end
    for pos in (0, m, 2 * m, n - 1):
        rows.append(_single_one(n, pos))
    # a block whose NE^(d-1) value is 1: a lone 1 inside it
    inner = [0, min(1, m - 1), min(2, m - 1)]

    def with_children(values):
        x = np.zeros(n, dtype=np.int8)
        for l, v in enumerate(values):
            if v:
                x[l * m + inner[l]] = 1
        return x

    # exactly one child equal to 1, then exactly two, then all three
    for values in ((1, 0, 0), (0, 1, 0), (0, 0, 1),
                   (1, 1, 0), (1, 0, 1), (0, 1, 1),
                   (1, 1, 1)):
        rows.append(with_children(values))
    return rows


def structured_inputs(d: int, seed: int = DEFAULT_SEED, n_random: int = 1000) -> InputSet:
    """Hand-picked edge cases followed by ``n_random`` seeded uniform inputs.

    The edge cases cover all-zeros, all-ones, single ones at block
    boundaries, and inputs whose three top-level children evaluate to
    exactly one, exactly two or all three ones.
    """
    rows = []
    seen = set()
    for x in _structured_rows(d):
        key = x.tobytes()
        if key not in seen:
            seen.add(key)
            rows.append(x)
    fixed = np.array(rows, dtype=np.int8)
    rand = random_inputs(d, n_random, seed) if n_random else np.zeros((0, 3**d), np.int8)
    bits = np.concatenate([fixed, rand], axis=0)
    desc = f"structured d={d} ({len(fixed)} fixed) + random n={n_random} seed={seed}"
    return InputSet(d, desc, bits.shape[0], lambda: iter([bits]))


# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    plan: str
    inputs: str
    kind: str                    # "p-computation" or "exact"
    p_expected: str
    tolerance: float
    count_ne0: int = 0
    count_ne1: int = 0
    max_dev_ne0: float = 0.0     # max |overlap - 1| over NE = 0 inputs
    max_residual_ne0: float = 0.0
    max_dev_ne1: float = 0.0     # max |overlap - p| over NE = 1 inputs
    min_overlap_ne1: float = float("nan")
    max_overlap_ne1: float = float("nan")
    correct: int = 0             # exact decisions only
    min_win_probability: float = 1.0
    passed: bool = False

    @property
    def count(self) -> int:
        return self.count_ne0 + self.count_ne1

    def to_text(self) -> str:
        rows = [
            ("plan", self.plan),
            ("inputs", self.inputs),
            ("kind", self.kind),
            ("p_expected", self.p_expected),
            ("tolerance", repr(self.tolerance)),
            ("count", self.count),
            ("count_ne0", self.count_ne0),
            ("count_ne1", self.count_ne1),
            ("max_dev_ne0", f"{self.max_dev_ne0:.3e}"),
            ("max_residual_ne0", f"{self.max_residual_ne0:.3e}"),
            ("max_dev_ne1", f"{self.max_dev_ne1:.3e}"),
        ]
        if self.kind == "exact":
            rows += [("correct", self.correct),
                     ("min_win_probability", f"{self.min_win_probability:.15f}")]
        rows.append(("pass", "true" if self.passed else "false"))
        return "\n".join(f"{k}={v}" for k, v in rows) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["class", "count", "expected_overlap", "max_deviation", "max_residual", "pass"])
        w.writerow(["ne0", self.count_ne0, "1", f"{self.max_dev_ne0:.3e}",
                    f"{self.max_residual_ne0:.3e}",
                    "true" if self.max_dev_ne0 <= self.tolerance
                    and self.max_residual_ne0 <= self.tolerance else "false"])
        w.writerow(["ne1", self.count_ne1, self.p_expected, f"{self.max_dev_ne1:.3e}", "",
                    "true" if self.max_dev_ne1 <= self.tolerance else "false"])
        return buf.getvalue()


def _expected_p(plan: Plan) -> tuple[float, str]:
    try:
        p = plan_p(plan)
        return float(p), str(p)
    except TypeError:
        p = plan_p_float(plan)
        return float(p), repr(float(p))


def _check_inputs(plan: Plan, inputs: InputSet) -> None:
    if inputs.d != depth(plan):
        raise PlanError(f"inputs are for NE^{inputs.d} but the plan has depth {depth(plan)}")


def verify_p_computation(plan: Plan, inputs: InputSet,
                         tolerance: float = DEFAULT_TOL) -> VerificationReport:
    """Check the overlap against 1 (NE = 0) and the exact p (NE = 1) on every input."""
    _check_inputs(plan, inputs)
    p, p_text = _expected_p(plan)
    report = VerificationReport(render_plan(plan), inputs.descriptor, "p-computation",
                                p_text, tolerance)
    lo, hi = np.inf, -np.inf
    for bits in inputs.batches():
        ov, res = overlap_many(plan, bits)
        ne = eval_ne_d_many(inputs.d, bits).astype(bool)
        zero, one = ov[~ne], ov[ne]
        report.count_ne0 += int(zero.size)
        report.count_ne1 += int(one.size)
        if zero.size:
            report.max_dev_ne0 = max(report.max_dev_ne0, float(np.abs(zero - 1).max()))
            report.max_residual_ne0 = max(report.max_residual_ne0, float(res[~ne].max()))
        if one.size:
            report.max_dev_ne1 = max(report.max_dev_ne1, float(np.abs(one - p).max()))
            lo = min(lo, float(one.real.min()))
            hi = max(hi, float(one.real.max()))
    if report.count_ne1:
        report.min_overlap_ne1, report.max_overlap_ne1 = lo, hi
    report.passed = (report.max_dev_ne0 <= tolerance
                     and report.max_residual_ne0 <= tolerance
                     and report.max_dev_ne1 <= tolerance)
    return report


def verify_exact(plan: Plan, inputs: InputSet,
                 tolerance: float = DEFAULT_TOL) -> VerificationReport:
    """Check that measuring the start-state projector decides NE^d on every input."""
    _check_inputs(plan, inputs)
    if plan_p(plan) != 0:
        raise PlanError(f"exact decision needs a 0-computing plan, this one has p = {plan_p(plan)}")
    report = VerificationReport(render_plan(plan), inputs.descriptor, "exact", "0", tolerance)
    for bits in inputs.batches():
        outcome, win = exact_decide_many(plan, bits)
        ne = eval_ne_d_many(inputs.d, bits)
        report.count_ne0 += int(np.sum(ne == 0))
        report.count_ne1 += int(np.sum(ne == 1))
        report.correct += int(np.sum(outcome == ne))
        report.min_win_probability = min(report.min_win_probability, float(win.min()))
        report.max_dev_ne0 = max(report.max_dev_ne0, float((1 - win[ne == 0]).max(initial=0)))
        report.max_dev_ne1 = max(report.max_dev_ne1, float((1 - win[ne == 1]).max(initial=0)))
    report.passed = (report.correct == report.count
                     and report.min_win_probability >= 1 - tolerance)
    return report


def sensitivity_check(d: int) -> int:
    """Number of single-bit flips of the all-zeros input that change NE^d."""
    if not 0 <= d <= EXHAUSTIVE_MAX_DEPTH:
        raise PlanError(f"sensitivity check supports 0 <= d <= {EXHAUSTIVE_MAX_DEPTH}")
    n = 3**d
    zeros = [0] * n
    base = eval_ne_d(d, zeros)
    count = 0
    for i in range(n):
        flipped = list(zeros)
        flipped[i] = 1
        if eval_ne_d(d, flipped) != base:
            count += 1
    if count != n:
        raise AssertionError(f"sensitivity of NE^{d} at all-zeros is {count}, expected {n}")
    return count
