import numpy as np
import pytest

from qlatin.classical import conjugate_holey, verify_coils
from qlatin.constructions import (
    DEFAULT_POLICY,
    RotationPolicy,
    coils_idempotent_2moqls,
    fill_holes_moqls,
    fill_holes_qls,
    fill_holes_soqls,
    pbd_idempotent_moqls,
    pbd_idempotent_qls,
    rotated_filler_basis,
)
from qlatin.errors import NotCOILS, ShapeError, SizeMismatch, VerificationFailed
from qlatin.numerics import UnitVector, fourier_matrix
from qlatin.pbd import pbd_provider
from qlatin.provider import (
    provide_coils,
    provide_idempotent_mols,
    provide_ils,
    provide_imols,
    provide_isols,
    provide_mols,
    provide_sols,
)
from qlatin.quantum import (
    cardinality,
    verify_idempotent_qls,
    verify_moqls,
    verify_qls,
    verify_soqls,
)


def test_rotation_policy_rejects_unknown():
    with pytest.raises(ShapeError):
        RotationPolicy(strategy="spin")
    with pytest.raises(ShapeError):
        RotationPolicy(strategy="given")


def test_rotated_filler_basis_mixes_span():
    span = [UnitVector.basis_state(5, 3), UnitVector.basis_state(5, 4)]
    basis = rotated_filler_basis(span, DEFAULT_POLICY, 0)
    # Fourier on a 2-dim span produces the +/- pair inside that span
    r = 1 / np.sqrt(2)
    assert np.allclose(np.abs(basis[0].data[3:]), [r, r], atol=1e-9)
    for vec in basis:
        assert np.max(np.abs(vec.data[:3])) < 1e-12


def test_pbd_assembly_single_square():
    d = pbd_provider(9, (3, 4, 5))
    Q, cert = pbd_idempotent_qls(d)
    assert verify_qls(Q).passed
    assert verify_idempotent_qls(Q).passed
    assert cert.nonclassical == (True,)
    assert cert.cardinalities[0] > 9


def test_pbd_assembly_orthogonal_pair():
    d = pbd_provider(13, (4, 5, 7, 9, 10, 11))
    squares, cert = pbd_idempotent_moqls(d, 2)
    assert verify_moqls(squares).passed
    assert all(verify_idempotent_qls(Q).passed for Q in squares)
    assert all(cert.nonclassical)


def test_fill_single_hole():
    frame = provide_ils(4, 2)
    filler = provide_mols(2, 1)[0]
    Q, cert = fill_holes_qls(frame, [filler])
    assert verify_qls(Q).passed
    assert cert.cardinalities == (6,)


def test_fill_wrong_filler_count():
    frame = provide_ils(4, 2)
    with pytest.raises(SizeMismatch):
        fill_holes_qls(frame, [])


def test_fill_orthogonal_family():
    frames = provide_imols(9, 3, t=2)
    fillers = provide_mols(3, 2)
    squares, cert = fill_holes_moqls(frames, [fillers])
    assert verify_moqls(squares).passed
    assert all(c > 9 for c in cert.cardinalities)


def test_fill_family_keeps_last_hole_open():
    frames = provide_imols(12, 4, t=2)
    fillers = provide_mols(4, 2)
    partial, cert = fill_holes_moqls(frames, [fillers], fill_last=False)
    assert all(hasattr(Q, "holes") for Q in partial)
    assert cert.reports


def test_fill_self_orthogonal():
    frame = provide_isols(13, 4)
    filler = provide_sols(4)
    Q, cert = fill_holes_soqls(frame, [filler])
    assert verify_soqls(Q).passed
    assert cert.cardinalities[0] > 13


def test_soqls_fill_retries_with_real_rotation():
    # the Fourier rotation is complex and breaks self-orthogonality; the
    # construction must fall back to the real rotation on its own
    frame = provide_isols(13, 4)
    filler = provide_sols(4)
    Q, cert = fill_holes_soqls(frame, [filler], policy=RotationPolicy("fourier"))
    assert verify_soqls(Q).passed


def test_coils_pair():
    frame = provide_coils(13, 4)
    fillers = provide_idempotent_mols(4, 2)
    squares, cert = coils_idempotent_2moqls(frame, fillers)
    assert verify_moqls(squares).passed
    assert all(verify_idempotent_qls(Q).passed for Q in squares)
    assert all(c > 13 for c in cert.cardinalities)


def test_coils_rejects_non_conjugate_orthogonal_frame():
    frame = provide_isols(13, 4)  # transpose-orthogonal, not (3,2,1)
    if not verify_coils(frame, (3, 2, 1)):
        with pytest.raises(NotCOILS):
            coils_idempotent_2moqls(frame, provide_idempotent_mols(4, 2))


def test_given_policy_full_dimension_unitary():
    frame = provide_ils(6, 2)
    filler = provide_mols(2, 1)[0]
    from qlatin.numerics import direct_sum_identity

    U = direct_sum_identity(fourier_matrix(2), 4)
    Q, cert = fill_holes_qls(
        frame, [filler], RotationPolicy("given", (U,))
    )
    assert verify_qls(Q).passed
    assert cert.cardinalities[0] > 6
