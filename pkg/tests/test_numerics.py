import numpy as np
import pytest

from qlatin.errors import DimensionMismatch, NotUnit, NotUnitary
from qlatin.numerics import (
    DEFAULT_TOL,
    UnitVector,
    UnitaryMatrix,
    apply_unitary,
    conjugate,
    conjugate_transpose,
    direct_sum_identity,
    equal_up_to_phase,
    fourier_matrix,
    inner_product,
    is_orthonormal_set,
    phase_canonical,
    real_rotation_matrix,
    tensor_product,
)


def test_basis_state_is_unit():
    e2 = UnitVector.basis_state(5, 2)
    assert e2.dim == 5
    assert e2.data[2] == 1.0
    assert abs(np.linalg.norm(e2.data) - 1.0) < 1e-12


def test_unit_vector_rejects_non_unit():
    with pytest.raises(NotUnit):
        UnitVector([1.0, 1.0])


def test_normalized_constructor():
    v = UnitVector.normalized([3.0, 4.0])
    assert abs(v.data[0] - 0.6) < 1e-12
    assert abs(v.data[1] - 0.8) < 1e-12


def test_unit_vector_immutable():
    v = UnitVector.basis_state(3, 0)
    with pytest.raises(ValueError):
        v.data[0] = 0.0


def test_inner_product_conjugate_linear():
    a = UnitVector.normalized([1.0, 1j])
    b = UnitVector.normalized([1.0, -1j])
    ip = inner_product(a, b)
    assert abs(ip - np.vdot(a.data, b.data)) < 1e-12


def test_inner_product_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        inner_product(UnitVector.basis_state(2, 0), UnitVector.basis_state(3, 0))


def test_tensor_product_dims_multiply():
    a = UnitVector.normalized([1.0, 1.0])
    b = UnitVector.basis_state(3, 1)
    t = tensor_product(a, b)
    assert t.dim == 6
    assert abs(t.data[1] - 1 / np.sqrt(2)) < 1e-12
    assert abs(t.data[4] - 1 / np.sqrt(2)) < 1e-12


def test_orthonormal_set_accepts_standard_basis():
    ok, witness = is_orthonormal_set([UnitVector.basis_state(4, k) for k in range(4)])
    assert ok and witness is None


def test_orthonormal_set_rejects_repeat():
    vs = [UnitVector.basis_state(3, 0), UnitVector.basis_state(3, 0)]
    ok, witness = is_orthonormal_set(vs)
    assert not ok
    assert witness is not None


def test_fourier_matrix_is_unitary():
    for m in (2, 3, 5, 8):
        F = fourier_matrix(m).data
        assert np.max(np.abs(F @ F.conj().T - np.eye(m))) < 1e-10


def test_fourier_two_gives_hadamard():
    F = fourier_matrix(2).data
    r = 1 / np.sqrt(2)
    assert np.allclose(F, [[r, r], [r, -r]])


def test_real_rotation_is_real_orthogonal():
    for m in (2, 3, 4, 7):
        R = real_rotation_matrix(m).data
        assert np.max(np.abs(R.imag)) == 0.0
        assert np.max(np.abs(R.real @ R.real.T - np.eye(m))) < 1e-10


def test_direct_sum_identity_block_layout():
    F = fourier_matrix(3)
    U = direct_sum_identity(F, 2)
    assert U.dim == 5
    assert np.allclose(U.data[:2, :2], np.eye(2))
    assert np.allclose(U.data[2:, 2:], F.data)
    assert np.max(np.abs(U.data[:2, 2:])) == 0.0


def test_unitary_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        UnitaryMatrix([[1.0, 1.0], [0.0, 1.0]])


def test_apply_unitary_preserves_norm():
    U = fourier_matrix(4)
    v = apply_unitary(U, UnitVector.basis_state(4, 2))
    assert abs(np.linalg.norm(v.data) - 1.0) < 1e-12


def test_equal_up_to_phase():
    a = UnitVector.normalized([1.0, 1j])
    b = UnitVector(np.exp(0.7j) * a.data)
    c = UnitVector.normalized([1.0, -1j])
    assert equal_up_to_phase(a, b)
    assert not equal_up_to_phase(a, c)


def test_phase_canonical_idempotent_and_invariant():
    a = UnitVector.normalized([1j, 1.0 + 1j])
    b = UnitVector(np.exp(1.3j) * a.data)
    ca, cb = phase_canonical(a), phase_canonical(b)
    assert np.allclose(ca.data, cb.data, atol=1e-9)
    assert np.allclose(phase_canonical(ca).data, ca.data)


def test_conjugate_transpose_roundtrip():
    U = fourier_matrix(3)
    Ud = conjugate_transpose(U)
    assert np.allclose(Ud.data @ U.data, np.eye(3), atol=1e-10)


def test_conjugate_vector():
    a = UnitVector.normalized([1.0, 1j])
    assert np.allclose(conjugate(a).data, np.conj(a.data))


def test_default_tolerances():
    assert DEFAULT_TOL.eps_orth == 1e-9
    assert DEFAULT_TOL.eps_phase == 1e-6
