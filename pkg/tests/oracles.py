"""Independent reference implementations used as test oracles.

Nothing here calls into nequery.simulator: plans are turned into explicit
dense matrices with numpy/scipy-style block algebra, start states are built
from the lift formula directly, and NE^d is evaluated iteratively.
"""

import itertools
import math

import numpy as np

from nequery.plan import Amplify, Base, Iterate


def ne_iterative(d, bits):
    """NE^d bottom-up with plain lists (no recursion)."""
    level = [int(b) for b in bits]
    assert len(level) == 3**d
    for _ in range(d):
        level = [0 if level[i] == level[i + 1] == level[i + 2] else 1
                 for i in range(0, len(level), 3)]
    return level[0]


def all_inputs(n):
    return np.array(list(itertools.product([0, 1], repeat=n)), dtype=np.int8)


def p_float(plan):
    if isinstance(plan, Base):
        return -1.0
    p = p_float(plan.child)
    if isinstance(plan, Iterate):
        return 1 - 4 * (1 - p) ** 2 / 9
    if isinstance(plan, Amplify):
        return math.cos(plan.c * math.acos(max(-1.0, min(1.0, p))))
    return float(plan.target)


def ref_start(plan):
    if isinstance(plan, Base):
        return np.array([1.0])
    s = ref_start(plan.child)
    if isinstance(plan, Iterate):
        return np.concatenate([s, s, s]) / math.sqrt(3)
    if isinstance(plan, Amplify):
        return s
    target = float(plan.target)
    cos2 = (1 - target) / (1 - p_float(plan.child))
    return np.concatenate([math.sqrt(cos2) * s, [math.sqrt(1 - cos2)]])


def _block_diag(*mats):
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=complex)
    i = 0
    for m in mats:
        k = m.shape[0]
        out[i:i + k, i:i + k] = m
        i += k
    return out


def ref_matrix(plan, bits):
    """Dense unitary of ``plan`` on input ``bits`` built from explicit products."""
    bits = [int(b) for b in bits]
    if isinstance(plan, Base):
        return np.array([[(-1.0) ** bits[0]]], dtype=complex)
    if isinstance(plan, Iterate):
        n = len(bits) // 3
        blocks = [ref_matrix(plan.child, bits[l * n:(l + 1) * n]) for l in range(3)]
        v = _block_diag(*blocks)
        s = ref_start(plan.child)
        m = s.size
        # columns: the three embedded child start states
        S = np.zeros((3 * m, 3))
        for l in range(3):
            S[l * m:(l + 1) * m, l] = s
        R = (2.0 / 3.0) * np.ones((3, 3)) - np.eye(3)
        T = np.eye(3 * m) - S @ S.T + S @ R @ S.T
        return v.conj().T @ T @ v
    if isinstance(plan, Amplify):
        a = ref_matrix(plan.child, bits)
        s = ref_start(plan.child)
        T = 2 * np.outer(s, s) - np.eye(s.size)
        out = np.eye(s.size, dtype=complex)
        for i in range(1, plan.c + 1):
            if i > 1:
                out = T @ out
            out = (a if i % 2 else a.conj().T) @ out
        return out
    return _block_diag(ref_matrix(plan.child, bits), np.eye(1))
