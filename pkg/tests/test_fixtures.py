import math

import numpy as np
import pytest

from oracles import all_inputs, ne_iterative
from nequery.fixtures import (
    PSI_START,
    U1,
    algorithm1_final_state,
    algorithm2_final_state,
    algorithm2_unitary,
    algorithm3_final_state,
    algorithm3_space,
    run_fixtures,
)
from nequery.plan import PlanError


def test_u1_is_orthogonal_and_maps_start_to_zero():
    assert np.allclose(U1 @ U1.T, np.eye(4))
    assert np.allclose(U1 @ PSI_START, [1, 0, 0, 0])


@pytest.mark.parametrize("bits, expected", [
    ((0, 0, 0), [1, 0, 0, 0]),
    ((1, 1, 1), [-1, 0, 0, 0]),
    ((0, 0, 1), [1 / 3, 2 / 3, 0, -2 / 3]),
])
def test_algorithm1_examples(bits, expected):
    assert np.allclose(algorithm1_final_state(bits), expected)


@pytest.mark.parametrize("bits", [tuple(x) for x in all_inputs(3)])
def test_algorithm2(bits):
    u = algorithm2_unitary(bits)
    assert np.allclose(u @ u.T, np.eye(4))
    amp = np.vdot(PSI_START, algorithm2_final_state(bits))
    assert amp.real == pytest.approx(-7 / 9 if ne_iterative(1, bits) else 1.0, abs=1e-12)


def test_algorithm3():
    space = algorithm3_space()
    assert np.allclose(space.u2 @ space.u2.T, np.eye(space.dim))
    assert np.allclose(space.u2 @ space.start, space.zero)
    assert np.allclose(algorithm3_final_state([0] * 9), space.zero)
    final = algorithm3_final_state([1, 0, 0, 0, 1, 0, 0, 0, 1])
    assert np.vdot(space.zero, final).real == pytest.approx(-7 / 9)
    assert np.linalg.norm(final) == pytest.approx(1.0)


def test_algorithm3_ne0_inputs_orthogonal_to_child_starts():
    space = algorithm3_space()
    for x in all_inputs(9):
        if ne_iterative(2, x) == 0:
            final = algorithm3_final_state(x)
            assert max(abs(np.vdot(ps, final)) for ps in space.child_starts) < 1e-12


def test_fixture_input_validation():
    with pytest.raises(PlanError):
        algorithm1_final_state((0, 1))
    with pytest.raises(PlanError):
        algorithm1_final_state((0, 1, 2))
    with pytest.raises(PlanError):
        algorithm3_final_state([0] * 8)


def test_run_fixtures_all_pass():
    checks = run_fixtures()
    assert len(checks) == 10
    failed = [c for c in checks if not c.passed]
    assert not failed, failed
    assert math.isclose(8 / 9, 1 - 1 / 9)
