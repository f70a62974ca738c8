import io
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import plans
from oracles import all_inputs, ne_iterative, p_float, ref_matrix, ref_start
from nequery.constructions import CONSTRUCTION_1, CONSTRUCTION_1_ZERO, iterate_n
from nequery.pcalc import plan_p, plan_p_float
from nequery.plan import Amplify, Base, CosPiOver, Iterate, Lift, PlanError, depth, dimension
from nequery.simulator import (
    INVERSE,
    DecisionError,
    apply,
    apply_many,
    exact_decide,
    exact_decide_many,
    iterate_beta,
    overlap,
    overlap_many,
    start_state,
    to_dense_matrix,
    write_matrix_csv,
)

NE2 = Iterate(Iterate(Base()))


bit_lists = lambda n: st.lists(st.integers(0, 1), min_size=n, max_size=n)  # noqa: E731


def test_start_state_examples():
    assert np.allclose(start_state(Base()), [1])
    assert np.allclose(start_state(Iterate(Base())), np.ones(3) / math.sqrt(3))
    s = start_state(Lift(NE2, Fraction(0)))
    # cos^2 = 729/1024 spread over 9 coordinates, sin^2 = 295/1024 on the ancilla
    assert np.allclose(s[:9], math.sqrt(729 / 1024) / 3)
    assert s[9] == pytest.approx(math.sqrt(295 / 1024))
    assert np.linalg.norm(s) == pytest.approx(1.0)


@given(plans(max_depth=3, max_dim=200, max_steps=7))
def test_start_state_matches_reference(plan):
    s = start_state(plan)
    assert s.shape == (dimension(plan),)
    assert np.allclose(s, ref_start(plan), atol=1e-12)
    assert np.linalg.norm(s) == pytest.approx(1.0, abs=1e-12)


def test_iterate_base_example():
    plan = Iterate(Base())
    res = overlap(plan, [0, 1, 1])
    assert res.overlap.real == pytest.approx(-7 / 9, abs=1e-12)
    assert res.residual_norm == pytest.approx(math.sqrt(32) / 9, abs=1e-12)
    assert overlap(plan, [1, 1, 1]).overlap == pytest.approx(1.0)


def test_apply_inverse_round_trip_example():
    rng = np.random.default_rng(0)
    v = rng.normal(size=10) + 1j * rng.normal(size=10)
    bits = rng.integers(0, 2, 9)
    w = apply(CONSTRUCTION_1, bits, v)
    assert np.linalg.norm(w) == pytest.approx(np.linalg.norm(v))
    assert np.allclose(apply(CONSTRUCTION_1, bits, w, direction=INVERSE), v, atol=1e-12)


def test_apply_argument_errors():
    with pytest.raises(PlanError):
        apply(NE2, [0] * 8)
    with pytest.raises(PlanError):
        apply(NE2, [0] * 8 + [2])
    with pytest.raises(PlanError):
        apply_many(NE2, [0] * 9, np.zeros((2, 8)))
    with pytest.raises(ValueError):
        apply(NE2, [0] * 9, direction="sideways")


@given(st.data())
def test_dense_matrix_is_unitary_and_matches_reference(data):
    plan = data.draw(plans())
    bits = data.draw(bit_lists(3 ** depth(plan)))
    a = to_dense_matrix(plan, bits)
    n = dimension(plan)
    assert np.allclose(a.conj().T @ a, np.eye(n), atol=1e-10)
    assert np.allclose(a, ref_matrix(plan, bits), atol=1e-10)
    assert np.allclose(to_dense_matrix(plan, bits, direction=INVERSE), a.conj().T, atol=1e-10)


@given(st.data())
def test_forward_then_inverse_is_identity(data):
    plan = data.draw(plans(max_depth=3, max_dim=200, max_steps=7))
    bits = data.draw(bit_lists(3 ** depth(plan)))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    v = rng.normal(size=dimension(plan)) + 1j * rng.normal(size=dimension(plan))
    w = apply(plan, bits, v)
    assert np.allclose(apply(plan, bits, w, direction=INVERSE), v, atol=1e-10)


@given(st.data())
def test_p_computation_definition(data):
    # NE = 0: start state is fixed exactly; NE = 1: overlap exactly p
    plan = data.draw(plans(max_depth=3, max_dim=200, max_steps=7))
    d = depth(plan)
    bits = data.draw(bit_lists(3**d))
    res = overlap(plan, bits)
    if ne_iterative(d, bits) == 0:
        assert res.overlap == pytest.approx(1.0, abs=1e-10)
        assert res.residual_norm < 1e-7
    else:
        assert res.overlap.real == pytest.approx(float(plan_p(plan)), abs=1e-10)
        assert abs(res.overlap.imag) < 1e-10
        assert res.residual_norm == pytest.approx(math.sqrt(max(0.0, 1 - p_float(plan) ** 2)), abs=1e-6)


def test_p_computation_exhaustive_construction_1():
    inputs = all_inputs(9)
    ov, res = overlap_many(CONSTRUCTION_1, inputs)
    ne = np.array([ne_iterative(2, x) for x in inputs])
    assert np.allclose(ov[ne == 0], 1.0, atol=1e-12)
    assert np.allclose(ov[ne == 1], -1.0, atol=1e-12)
    assert np.all(res < 1e-6)


@given(st.data())
def test_iterate_beta_property(data):
    child = data.draw(plans(max_depth=1, max_dim=20))
    plan = Iterate(child)
    d = depth(plan)
    bits = data.draw(bit_lists(3**d))
    beta = iterate_beta(plan, bits)
    child_vals = [ne_iterative(d - 1, bits[i * 3 ** (d - 1):(i + 1) * 3 ** (d - 1)]) for i in range(3)]
    if len(set(child_vals)) == 1:
        assert beta == pytest.approx(0.0, abs=1e-10)
    else:
        assert beta == pytest.approx(math.sqrt(2) * (1 - p_float(child)) / 3, abs=1e-10)


@given(st.data())
def test_amplify_composition(data):
    child = data.draw(plans(max_depth=2, max_dim=30, max_steps=3))
    a, b = data.draw(st.integers(2, 3)), data.draw(st.integers(2, 3))
    bits = data.draw(bit_lists(3 ** depth(child)))
    left = overlap(Amplify(child, a * b), bits).overlap
    right = overlap(Amplify(Amplify(child, a), b), bits).overlap
    assert left == pytest.approx(right, abs=1e-10)


def test_irrational_lift_reaches_minus_one():
    plan = Amplify(Lift(Iterate(Base()), CosPiOver(4)), 4)
    for bits in all_inputs(3):
        ov = overlap(plan, bits).overlap
        expected = 1.0 if ne_iterative(1, bits) == 0 else -1.0
        assert ov == pytest.approx(expected, abs=1e-9)
    assert plan_p_float(plan) == pytest.approx(-1.0, abs=1e-12)


def test_deep_plan_spot_check():
    # p(NE^4) is already positive, so amplify once before lifting to 0
    plan = Amplify(Lift(Amplify(iterate_n(Base(), 4), 2), Fraction(0)), 2)
    rng = np.random.default_rng(7)
    bits = rng.integers(0, 2, (20, 81))
    ov, res = overlap_many(plan, bits)
    expected = np.array([1.0 if ne_iterative(4, x) == 0 else -1.0 for x in bits])
    assert np.allclose(ov, expected, atol=1e-10)


def test_exact_decide():
    assert exact_decide(CONSTRUCTION_1_ZERO, [0] * 9) == 0
    assert exact_decide(CONSTRUCTION_1_ZERO, [1] + [0] * 8) == 1
    with pytest.raises(PlanError):
        exact_decide(CONSTRUCTION_1, [0] * 9)
    outcomes, win = exact_decide_many(CONSTRUCTION_1_ZERO, all_inputs(9))
    assert outcomes.tolist() == [ne_iterative(2, x) for x in all_inputs(9)]
    assert np.all(win > 1 - 1e-12)


def test_exact_decide_rejects_inexact_outcome(monkeypatch):
    # a 0-computing plan never lands off the two outcomes, so fake an overlap
    import nequery.simulator as sim
    monkeypatch.setattr(sim, "overlap", lambda plan, bits: sim.OverlapResult(complex(0.6), 0.8))
    with pytest.raises(DecisionError):
        exact_decide(CONSTRUCTION_1_ZERO, [0] * 9)


def test_dense_guard_and_csv(tmp_path):
    with pytest.raises(PlanError):
        to_dense_matrix(iterate_n(Base(), 3), [0] * 27, limit=20)
    a = to_dense_matrix(Iterate(Base()), [0, 1, 1])
    buf = io.StringIO()
    write_matrix_csv(a, buf)
    rows = buf.getvalue().splitlines()
    assert len(rows) == 3
    cells = [float(x) for x in rows[0].split(",")]
    assert len(cells) == 6
    back = np.array(cells[0::2]) + 1j * np.array(cells[1::2])
    assert np.array_equal(back, a[0])
    path = tmp_path / "m.csv"
    write_matrix_csv(a, path)
    assert path.read_text() == buf.getvalue()


@given(plans(max_depth=2, max_dim=64))
def test_uniform_overlap_on_every_ne1_input(plan):
    # the NE = 1 overlap does not depend on which pattern made NE = 1
    d = depth(plan)
    inputs = all_inputs(3**d)
    ov, _ = overlap_many(plan, inputs)
    ne = np.array([ne_iterative(d, x) for x in inputs], dtype=bool)
    assert np.ptp(ov[ne].real) < 1e-10
    assert np.allclose(ov[~ne], 1.0, atol=1e-10)


@pytest.mark.parametrize("c", range(2, 10))
def test_amplify_matches_chebyshev(c):
    plan = Amplify(Iterate(Base()), c)
    assert overlap(plan, [0, 1, 1]).overlap.real == pytest.approx(math.cos(c * math.acos(-7 / 9)), abs=1e-12)
    assert overlap(plan, [1, 1, 1]).overlap.real == pytest.approx(1.0, abs=1e-12)
