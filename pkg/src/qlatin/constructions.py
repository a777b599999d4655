"""Construction engines that turn classical designs into quantum ones.

Three families:

* block assembly: a pairwise balanced design plus idempotent (MO)LS on each
  block size yields an idempotent quantum square, with the blocks through a
  distinguished point lifted onto rotated (non-computational) bases;

* hole filling: a holey frame is lifted with its hole symbols rotated onto
  a non-computational basis of the hole span, and each hole is filled with
  a filler square lifted onto that same rotated basis.  Variants cover
  plain squares, mutually orthogonal families, and self-orthogonal squares
  (where the rotation must be real so conjugation leaves it fixed);

* the conjugate route: an idempotent incomplete square orthogonal to its
  (3,2,1)-conjugate, together with an idempotent orthogonal filler pair,
  yields an orthogonal pair of idempotent quantum squares.

Every construction verifies its own output and refuses to emit anything
that fails; the certificate records the route, input hashes and reports.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .classical import (
    HoleyLatinSquare,
    LatinSquare,
    conjugate_holey,
    verify_coils,
)
from .errors import (
    AssemblyConflict,
    NotCOILS,
    ProviderUnavailable,
    QlatinError,
    ShapeError,
    SizeMismatch,
    SpecMismatch,
    Unavailable,
    VerificationFailed,
)
from .numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    UnitVector,
    UnitaryMatrix,
    fourier_matrix,
    real_rotation_matrix,
)
from .pbd import PairwiseBalancedDesign, blocks_through
from .provider import provide_idempotent_mols
from .quantum import (
    HoleyQuantumLatinSquare,
    QuantumLatinSquare,
    VerificationReport,
    cardinality,
    lift_classical,
    verify_holey_orthogonal,
    verify_idempotent_qls,
    verify_moqls,
    verify_orthogonal_pair,
    verify_qls,
    verify_soqls,
)
from .serialize import content_hash


@dataclass(frozen=True)
class RotationPolicy:
    """How hole (or block) subspaces get their non-computational bases.

    strategy "fourier" mixes the span with the discrete Fourier unitary,
    "real" with a real orthogonal rotation (safe under conjugation), and
    "given" uses the supplied unitaries, one per hole, each either of the
    hole dimension (acting inside the span) or of the full dimension
    (acting on the spanning vectors directly).
    """

    strategy: str = "fourier"
    unitaries: Tuple[UnitaryMatrix, ...] = ()

    def __post_init__(self):
        if self.strategy not in ("fourier", "real", "given"):
            raise ShapeError(f"unknown rotation strategy {self.strategy!r}")
        if self.strategy == "given" and not self.unitaries:
            raise ShapeError("strategy 'given' needs unitaries")


DEFAULT_POLICY = RotationPolicy()


@dataclass(frozen=True)
class ConstructionCertificate:
    """Route name, input hashes, verification reports, classicality data."""

    route: str
    inputs: Tuple[Tuple[str, str], ...]
    reports: Tuple[Tuple[str, VerificationReport], ...]
    nonclassical: Tuple[bool, ...]
    cardinalities: Tuple[int, ...]

    def __post_init__(self):
        for name, rep in self.reports:
            if not rep.passed:
                raise VerificationFailed(f"certificate lists failing report {name}")


def _require(name: str, rep: VerificationReport):
    if not rep.passed:
        raise VerificationFailed(f"{name} failed: {rep.witness()}")
    return name, rep


def rotated_filler_basis(
    subspace: Sequence[UnitVector],
    policy: RotationPolicy = DEFAULT_POLICY,
    hole_index: int = 0,
) -> List[UnitVector]:
    """An orthonormal basis of span(subspace), non-computational for m >= 2.

    The j-th output is sum_k R[k, j] * subspace[k] for the policy's m x m
    rotation R; a full-dimension given unitary is instead applied to each
    spanning vector.  m = 1 returns the input unchanged with a warning,
    since a single direction cannot be made non-computational.
    """
    vs = list(subspace)
    m = len(vs)
    if m == 0:
        return []
    if m == 1:
        warnings.warn("size-1 subspace left unrotated: output stays classical")
        return vs
    span = np.array([v.data for v in vs])
    if policy.strategy == "given":
        if hole_index >= len(policy.unitaries):
            raise ShapeError(f"no unitary supplied for hole {hole_index}")
        U = policy.unitaries[hole_index]
        if U.dim == span.shape[1]:
            out = span @ U.data.T
        elif U.dim == m:
            out = U.data.T @ span
        else:
            raise ShapeError(
                f"unitary dim {U.dim} matches neither span size {m} nor ambient {span.shape[1]}"
            )
    else:
        R = fourier_matrix(m) if policy.strategy == "fourier" else real_rotation_matrix(m)
        out = R.data.T @ span
    return [UnitVector(row) for row in out]


# ---------------------------------------------------------------------------
# block assembly from pairwise balanced designs


def _block_basis(
    v: int, block: Sequence[int], through_zero: bool, policy: RotationPolicy, hole_index: int
) -> Tuple[List[int], List[UnitVector]]:
    """Point order and symbol basis for one block.

    Blocks through the distinguished point 0 put 0 first, keep |0> fixed
    and rotate the span of the other points; other blocks lift classically.
    """
    if through_zero:
        pts = [0] + sorted(x for x in block if x != 0)
        rest = [UnitVector.basis_state(v, x) for x in pts[1:]]
        basis = [UnitVector.basis_state(v, 0)] + rotated_filler_basis(
            rest, policy, hole_index
        )
    else:
        pts = sorted(block)
        basis = [UnitVector.basis_state(v, x) for x in pts]
    return pts, basis


def pbd_idempotent_moqls(
    d: PairwiseBalancedDesign,
    t: int = 1,
    policy: RotationPolicy = DEFAULT_POLICY,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> Tuple[List[QuantumLatinSquare], ConstructionCertificate]:
    """Assemble t mutually orthogonal idempotent quantum squares of order
    d.v from t idempotent MOLS on each block size.

    Every block carries its own symbol basis; blocks through point 0 use a
    rotated basis so the result is non-classical whenever such a block has
    size >= 3.  Diagonal cells come only from blocks through 0, whose
    residues partition the remaining points.
    """
    v = d.v
    try:
        squares_by_size: Dict[int, List[LatinSquare]] = {
            k: provide_idempotent_mols(k, t) for k in sorted({len(b) for b in d.blocks})
        }
    except QlatinError as exc:
        raise ProviderUnavailable(str(exc)) from exc
    grids = [np.zeros((v, v, v), dtype=np.complex128) for _ in range(t)]
    filled = np.zeros((v, v), dtype=bool)
    zero_blocks = blocks_through(d, 0)
    residues = [x for b in zero_blocks for x in b if x != 0]
    if sorted(residues) != list(range(1, v)):
        raise AssemblyConflict("blocks through 0 do not partition the other points")
    filled[0, 0] = True
    for g in grids:
        g[0, 0, 0] = 1.0  # cell (0,0) = |0>, shared by every block through 0
    for bi, block in enumerate(d.blocks):
        k = len(block)
        through_zero = 0 in block
        pts, basis = _block_basis(v, block, through_zero, policy, bi)
        mols = squares_by_size[k]
        for a in range(k):
            for b in range(k):
                if a == b and (not through_zero or pts[a] == 0):
                    continue
                i, j = pts[a], pts[b]
                if filled[i, j]:
                    raise AssemblyConflict(f"cell ({i},{j}) claimed twice")
                filled[i, j] = True
                for s in range(t):
                    grids[s][i, j] = basis[mols[s].grid[a][b]].data
    if not filled.all():
        miss = np.argwhere(~filled)[0]
        raise AssemblyConflict(f"cell ({miss[0]},{miss[1]}) never assigned")
    out = [QuantumLatinSquare(g) for g in grids]
    reports = []
    for s, Q in enumerate(out):
        reports.append(_require(f"square-{s}-qls", verify_qls(Q, tol)))
        reports.append(_require(f"square-{s}-idempotent", verify_idempotent_qls(Q, tol)))
    for a in range(t):
        for b in range(a + 1, t):
            reports.append(
                _require(f"pair-{a}-{b}", verify_orthogonal_pair(out[a], out[b], tol))
            )
    cards = tuple(cardinality(Q, tol) for Q in out)
    nonc = tuple(c > v for c in cards)
    if not all(nonc):
        warnings.warn(f"block assembly at v={v} produced a classical square")
    cert = ConstructionCertificate(
        route=f"pbd-block-assembly(t={t})",
        inputs=(("pbd", content_hash(d)),),
        reports=tuple(reports),
        nonclassical=nonc,
        cardinalities=cards,
    )
    return out, cert


def pbd_idempotent_qls(
    d: PairwiseBalancedDesign,
    policy: RotationPolicy = DEFAULT_POLICY,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> Tuple[QuantumLatinSquare, ConstructionCertificate]:
    """Single-square case of the block assembly."""
    out, cert = pbd_idempotent_moqls(d, 1, policy, tol)
    return out[0], cert


# ---------------------------------------------------------------------------
# hole filling


Filler = Union[LatinSquare, QuantumLatinSquare]


def _holes_of(frame: Union[HoleyLatinSquare, HoleyQuantumLatinSquare]) -> Tuple[Tuple[int, ...], ...]:
    return frame.spec.holes if isinstance(frame, HoleyLatinSquare) else frame.holes


def _rotations_for(
    v: int, holes: Sequence[Sequence[int]], policy: RotationPolicy
) -> List[List[UnitVector]]:
    return [
        rotated_filler_basis(
            [UnitVector.basis_state(v, x) for x in h], policy, idx
        )
        for idx, h in enumerate(holes)
    ]


def fill_holes_qls(
    frame: Union[HoleyLatinSquare, HoleyQuantumLatinSquare],
    fillers: Sequence[Filler],
    policy: RotationPolicy = DEFAULT_POLICY,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> Tuple[QuantumLatinSquare, ConstructionCertificate]:
    """Fill every hole of a holey frame, producing a full quantum square."""
    holes = _holes_of(frame)
    if len(fillers) != len(holes):
        raise SizeMismatch(f"{len(fillers)} fillers for {len(holes)} holes")
    v = frame.order if isinstance(frame, HoleyLatinSquare) else frame.dim
    rotations = _rotations_for(v, holes, policy)
    base = lift_classical(frame) if isinstance(frame, HoleyLatinSquare) else frame
    grid: List[List[Optional[UnitVector]]] = [
        [UnitVector(base.array[i, j]) if base.filled[i, j] else None for j in range(v)]
        for i in range(v)
    ]
    for h, rot, f in zip(holes, rotations, fillers):
        _fill_into(grid, h, rot, f)
    Q = QuantumLatinSquare([[cell for cell in row] for row in grid])
    reports = [_require("qls", verify_qls(Q, tol))]
    card = cardinality(Q, tol)
    nonc = card > v
    if not nonc:
        warnings.warn("hole filling produced a classical square")
    cert = ConstructionCertificate(
        route="fill-holes",
        inputs=(("frame", content_hash(frame if isinstance(frame, HoleyQuantumLatinSquare) else frame)),),
        reports=tuple(reports),
        nonclassical=(nonc,),
        cardinalities=(card,),
    )
    return Q, cert


def _fill_into(
    grid: List[List[Optional[UnitVector]]],
    hole: Sequence[int],
    rot: Sequence[UnitVector],
    filler: Filler,
) -> List[List[Optional[UnitVector]]]:
    m = len(hole)
    B = np.array([r.data for r in rot]).T
    if isinstance(filler, LatinSquare):
        if filler.order != m:
            raise SizeMismatch(f"filler order {filler.order} != hole size {m}")
        for a in range(m):
            for b in range(m):
                grid[hole[a]][hole[b]] = rot[filler.grid[a][b]]
    else:
        if filler.dim != m:
            raise SizeMismatch(f"filler dim {filler.dim} != hole size {m}")
        for a in range(m):
            for b in range(m):
                grid[hole[a]][hole[b]] = UnitVector(B @ filler.array[a, b])
    return grid


def fill_holes_moqls(
    frames: Sequence[Union[HoleyLatinSquare, HoleyQuantumLatinSquare]],
    fillers: Sequence[Sequence[Filler]],
    policy: RotationPolicy = DEFAULT_POLICY,
    fill_last: bool = True,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> Tuple[List[Union[QuantumLatinSquare, HoleyQuantumLatinSquare]], ConstructionCertificate]:
    """Fill the holes of t mutually orthogonal holey frames.

    fillers[h][s] fills hole h of square s; the rotation per hole is shared
    across all squares.  With fill_last false the final hole stays open and
    the output is a holey family (verified by the holey orthogonality
    predicate); with fill_last true the output is a full family verified as
    mutually orthogonal quantum squares.
    """
    t = len(frames)
    holes = _holes_of(frames[0])
    for fr in frames[1:]:
        if _holes_of(fr) != holes:
            raise SpecMismatch("frames have different hole structures")
    n_fill = len(holes) if fill_last else len(holes) - 1
    if len(fillers) < n_fill:
        raise SizeMismatch(f"{len(fillers)} filler groups for {n_fill} holes to fill")
    v = frames[0].order if isinstance(frames[0], HoleyLatinSquare) else frames[0].dim
    rotations = _rotations_for(v, holes, policy)
    grids: List[List[List[Optional[UnitVector]]]] = []
    for fr in frames:
        base = lift_classical(fr) if isinstance(fr, HoleyLatinSquare) else fr
        grids.append(
            [
                [UnitVector(base.array[i, j]) if base.filled[i, j] else None for j in range(v)]
                for i in range(v)
            ]
        )
    reports = []
    # the partially filled family must stay orthogonal over the open cells
    # before the last hole closes, mirroring the two-stage argument
    for h_idx in range(len(holes) - 1):
        for s in range(t):
            _fill_into(grids[s], holes[h_idx], rotations[h_idx], fillers[h_idx][s])
    partial = [
        HoleyQuantumLatinSquare(
            [[cell for cell in row] for row in g], (holes[-1],)
        )
        for g in grids
    ]
    for a in range(t):
        for b in range(a + 1, t):
            reports.append(
                _require(
                    f"partial-pair-{a}-{b}",
                    verify_holey_orthogonal(partial[a], partial[b], tol),
                )
            )
    inputs = tuple(
        (f"frame-{s}", content_hash(fr if isinstance(fr, HoleyQuantumLatinSquare) else fr))
        for s, fr in enumerate(frames)
    )
    if not fill_last:
        cert = ConstructionCertificate(
            route="fill-holes-family(partial)",
            inputs=inputs,
            reports=tuple(reports),
            nonclassical=(),
            cardinalities=(),
        )
        return list(partial), cert
    for s in range(t):
        _fill_into(grids[s], holes[-1], rotations[-1], fillers[-1][s])
    out = [QuantumLatinSquare([[c for c in row] for row in g]) for g in grids]
    rep = verify_moqls(out, tol)
    reports.append(_require("moqls", rep))
    cards = tuple(cardinality(Q, tol) for Q in out)
    nonc = tuple(c > v for c in cards)
    if not all(nonc):
        warnings.warn("hole filling produced a classical member")
    cert = ConstructionCertificate(
        route="fill-holes-family",
        inputs=inputs,
        reports=tuple(reports),
        nonclassical=nonc,
        cardinalities=cards,
    )
    return list(out), cert


def fill_holes_soqls(
    frame: Union[HoleyLatinSquare, HoleyQuantumLatinSquare],
    fillers: Sequence[Filler],
    policy: Optional[RotationPolicy] = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> Tuple[QuantumLatinSquare, ConstructionCertificate]:
    """Fill a self-orthogonal holey frame into a self-orthogonal quantum
    square.

    The default rotation is real orthogonal: self-orthogonality pairs each
    cell with the conjugate of its transpose partner, and a real rotation
    is invariant under that conjugation.  A complex policy is attempted as
    given and the result re-verified; on failure the construction retries
    with the real rotation before giving up.
    """
    attempts = [policy] if policy is not None else []
    attempts.append(RotationPolicy(strategy="real"))
    last_witness = None
    for pol in attempts:
        Q, base_cert = fill_holes_qls(frame, fillers, pol, tol)
        rep = verify_soqls(Q, tol)
        if rep.passed:
            card = cardinality(Q, tol)
            v = Q.dim
            cert = ConstructionCertificate(
                route="fill-holes-self-orthogonal",
                inputs=base_cert.inputs,
                reports=base_cert.reports + (("soqls", rep),),
                nonclassical=(card > v,),
                cardinalities=(card,),
            )
            return Q, cert
        last_witness = rep.witness()
    raise VerificationFailed(f"self-orthogonality failed: {last_witness}")


# ---------------------------------------------------------------------------
# conjugate orthogonality route


def coils_idempotent_2moqls(
    L: HoleyLatinSquare,
    fillers: Sequence[Filler],
    policy: RotationPolicy = DEFAULT_POLICY,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> Tuple[List[QuantumLatinSquare], ConstructionCertificate]:
    """Orthogonal idempotent pair from an incomplete square orthogonal to
    its (3,2,1)-conjugate, the pair of frames being (L, conjugate of L).

    fillers is the orthogonal idempotent pair for the hole, one per output
    square, lifted through one shared rotation.
    """
    if len(L.spec.holes) != 1:
        raise NotCOILS("need exactly one hole")
    if not verify_coils(L, (3, 2, 1)):
        raise NotCOILS("frame is not orthogonal to its (3,2,1)-conjugate")
    if len(fillers) != 2:
        raise SizeMismatch("need exactly two fillers")
    M = conjugate_holey(L, (3, 2, 1))
    out, cert = fill_holes_moqls(
        [L, M], [list(fillers)], policy, fill_last=True, tol=tol
    )
    v = L.order
    reports = list(cert.reports)
    for s, Q in enumerate(out):
        reports.append(_require(f"square-{s}-idempotent", verify_idempotent_qls(Q, tol)))
    cert2 = ConstructionCertificate(
        route="conjugate-orthogonal-pair",
        inputs=(("frame", content_hash(L)),),
        reports=tuple(reports),
        nonclassical=cert.nonclassical,
        cardinalities=cert.cardinalities,
    )
    return [Q for Q in out], cert2
