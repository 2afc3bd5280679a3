import math

import numpy as np
import pytest

from app.decoders.mps import (
    MatrixProductOperator,
    MatrixProductState,
    apply_mpo,
    left_canonical,
    overlap,
    truncate,
)
from app.qec.errors import DegenerateStateError, DimensionError, ParameterError

from conftest import random_mpo, random_mps


def test_boundary_bonds_are_checked():
    with pytest.raises(DimensionError):
        MatrixProductState([np.ones((2, 2, 1))])
    with pytest.raises(DimensionError):
        MatrixProductState([np.ones((2, 1, 2)), np.ones((2, 3, 1))])


def test_to_dense_product_state():
    up = np.array([1.0, 0.0]).reshape(2, 1, 1)
    plus = np.array([1.0, 1.0]).reshape(2, 1, 1)
    psi = MatrixProductState([up, plus])
    assert np.allclose(psi.to_dense(), [1.0, 1.0, 0.0, 0.0])


def test_identity_mpo(rng):
    psi = random_mps(rng, [1, 2, 3, 2, 1])
    out = apply_mpo(MatrixProductOperator.identity(4), psi)
    assert np.allclose(out.to_dense(), psi.to_dense(), atol=1e-12)
    assert out.bond_dimension() == psi.bond_dimension()


def test_apply_mpo_matches_dense(rng):
    for _ in range(5):
        psi = random_mps(rng, [1, 2, 3, 3, 2, 1])
        op = random_mpo(rng, [1, 2, 2, 2, 2, 1])
        out = apply_mpo(op, psi)
        assert np.allclose(out.to_dense(), op.to_dense() @ psi.to_dense(), atol=1e-10)
        assert out.bond_dimension() <= 2 * 3


def test_apply_mpo_length_mismatch(rng):
    with pytest.raises(DimensionError):
        apply_mpo(MatrixProductOperator.identity(3), random_mps(rng, [1, 2, 1]))


def test_left_canonical(rng):
    psi = random_mps(rng, [1, 2, 3, 3, 2, 1])
    log_gamma, b = left_canonical(psi)
    for t in b.tensors:
        gram = t[0].T @ t[0] + t[1].T @ t[1]
        assert np.allclose(gram, np.eye(gram.shape[0]), atol=1e-10)
    assert np.linalg.norm(b.to_dense()) == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(math.exp(log_gamma) * b.to_dense(), psi.to_dense(), atol=1e-10)
    assert math.exp(log_gamma) == pytest.approx(np.linalg.norm(psi.to_dense()), rel=1e-10)


def test_left_canonical_zero_state():
    zero = MatrixProductState([np.zeros((2, 1, 2)), np.zeros((2, 2, 1))])
    with pytest.raises(DegenerateStateError):
        left_canonical(zero)


def test_truncate_without_loss(rng):
    psi = random_mps(rng, [1, 2, 4, 4, 2, 1])
    out = truncate(psi, 8)
    assert np.allclose(out.to_dense(), psi.to_dense(), atol=1e-10)
    for t in out.tensors:
        gram = t[0] @ t[0].T + t[1] @ t[1].T
        assert np.allclose(gram, np.eye(gram.shape[0]), atol=1e-10)


def test_truncate_product_state(rng):
    psi = random_mps(rng, [1, 1, 1, 1])
    out = truncate(psi, 2)
    assert out.bond_dimension() == 1
    assert np.allclose(out.to_dense(), psi.to_dense(), atol=1e-12)


def test_truncate_keeps_largest_schmidt_values(rng):
    # Sólo el corte central (rango 4) se trunca a 2
    psi = random_mps(rng, [1, 2, 4, 2, 1])
    dense = psi.to_dense()
    schmidt = np.linalg.svd(dense.reshape(4, 4), compute_uv=False)
    out = truncate(psi, 2)
    assert out.bond_dimension() <= 2
    assert np.linalg.norm(out.to_dense()) ** 2 == pytest.approx(np.sum(schmidt[:2] ** 2), rel=1e-10)


def test_truncate_rejects_bad_chi(rng):
    with pytest.raises(ParameterError):
        truncate(random_mps(rng, [1, 2, 1]), 0)


def test_overlap_matches_dense(rng):
    a = random_mps(rng, [1, 2, 3, 2, 2, 1])
    b = random_mps(rng, [1, 2, 2, 3, 2, 1])
    sign, log_abs = overlap(a, b)
    assert sign * math.exp(log_abs) == pytest.approx(float(a.to_dense() @ b.to_dense()), rel=1e-10)


def test_overlap_carries_scale_and_sign(rng):
    a = random_mps(rng, [1, 2, 2, 1])
    b = random_mps(rng, [1, 2, 2, 1])
    scaled = MatrixProductState(b.tensors, log_scale=-300.0, sign=-1.0)
    s1, l1 = overlap(a, b)
    s2, l2 = overlap(a, scaled)
    assert s2 == -s1
    assert l2 == pytest.approx(l1 - 300.0)
