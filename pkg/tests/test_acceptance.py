"""End-to-end acceptance checks.

Each test covers one numbered criterion and prints a single pass/fail line
so the suite doubles as a checklist when run verbosely.
"""

import time

import numpy as np

from qlatin.catalog import CATALOG_IDS, existence, paper_square
from qlatin.classical import (
    HoleyLatinSquare,
    field_mols,
    verify_holey_latin_square,
)
from qlatin.constructions import (
    fill_holes_moqls,
    fill_holes_soqls,
    pbd_idempotent_qls,
)
from qlatin.numerics import DEFAULT_TOL, UnitVector, equal_up_to_phase
from qlatin.pbd import pbd_provider
from qlatin.provider import provide_imols, provide_isols, provide_mols, provide_sols
from qlatin.quantum import (
    QuantumLatinSquare,
    apply_global_unitary,
    cardinality,
    lift_classical,
    verify_idempotent_qls,
    verify_orthogonal_pair,
    verify_qls,
    verify_soqls,
)


def _line(num, ok, text):
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} - {text}", flush=True)
    assert ok, f"criterion {num} failed: {text}"


def _random_unitary(v, rng):
    z = rng.normal(size=(v, v)) + 1j * rng.normal(size=(v, v))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_criterion_01_reference_idempotent_squares():
    t0 = time.time()
    ok = True
    for vid, v, card in (("qls6", 6, 8), ("qls8", 8, 16)):
        Q = paper_square(vid)
        ok &= verify_qls(Q).passed
        ok &= verify_idempotent_qls(Q).passed
        ok &= cardinality(Q) == card and card > v
    elapsed = time.time() - t0
    ok &= elapsed < 1.0
    _line(1, ok, f"qls6/qls8 verified, cardinalities 8/16, {elapsed:.2f}s")


def test_criterion_02_reference_orthogonal_pairs():
    ok = True
    times = []
    for v in (8, 10, 11):
        t0 = time.time()
        A = paper_square(f"moqls{v}_a")
        B = paper_square(f"moqls{v}_b")
        ok &= verify_orthogonal_pair(A, B).passed
        ok &= cardinality(A) > v and cardinality(B) > v
        times.append(time.time() - t0)
    ok &= all(t < 1.0 for t in times)
    _line(2, ok, "orthogonal non-classical pairs at v=8,10,11, each < 1s")


def test_criterion_03_holey_scaffolding():
    ok = True
    for vid in ("isols10_3", "isols11_3"):
        H = paper_square(vid)
        good, _ = verify_holey_latin_square(H)
        ok &= good
        # exhaustive pair coverage outside the hole-by-hole excluded set
        v = H.order
        hole = set(H.spec.holes[0])
        seen = set()
        for i in range(v):
            for j in range(v):
                if H[i, j] is None:
                    continue
                pair = (H[i, j], H.transpose()[i, j])
                ok &= pair not in seen
                seen.add(pair)
        required = {
            (a, b)
            for a in range(v)
            for b in range(v)
            if not (a in hole and b in hole)
        }
        ok &= seen == required
    _line(3, ok, "ISOLS(10;3) and ISOLS(11;3) holey and transpose-orthogonal")


def test_criterion_04_block_assembly_route():
    t0 = time.time()
    ok = True
    for v in (7, 9, 13, 15, 19, 21, 25):
        d = pbd_provider(v, (3, 4, 5))
        Q, cert = pbd_idempotent_qls(d)
        ok &= verify_qls(Q).passed
        ok &= verify_idempotent_qls(Q).passed
        ok &= cert.nonclassical == (True,)
    elapsed = time.time() - t0
    ok &= elapsed < 60.0
    _line(4, ok, f"idempotent non-classical squares for 7 orders, {elapsed:.1f}s")


def test_criterion_05_orthogonal_pair_route():
    ok = True
    total = 0.0
    for v in (9, 12, 13, 16, 20):
        t0 = time.time()
        k = 3 if v == 9 else 4
        frames = provide_imols(v, k, t=2, budget=60)
        fillers = provide_mols(k, 2)
        squares, cert = fill_holes_moqls(frames, [fillers])
        elapsed = time.time() - t0
        ok &= elapsed < 60.0
        ok &= all(verify_qls(Q).passed for Q in squares)
        ok &= verify_orthogonal_pair(*squares).passed
        ok &= all(c > v for c in cert.cardinalities)
        total += elapsed
    _line(5, ok, f"non-classical 2-MOQLS at v=9,12,13,16,20, {total:.1f}s total")


def test_criterion_06_self_orthogonal_route():
    ok = True
    for v in (13, 16):
        frame = provide_isols(v, 4)
        Q, cert = fill_holes_soqls(frame, [provide_sols(4)])
        ok &= verify_soqls(Q).passed
        ok &= cert.cardinalities[0] > v
    _line(6, ok, "non-classical SOQLS(13) and SOQLS(16)")


def test_criterion_07_existence_tables():
    ok = True
    for v in range(2, 101):
        ok &= (existence("idempotent-qls", v).verdict == "No") == (v in (3, 4, 5)) or v == 2
        ok &= (existence("qls", v).verdict == "No") == (v in (2, 3))
        ok &= (existence("2-moqls", v).verdict == "OpenException") == (4 <= v <= 7)
        ok &= (existence("3-moqls", v).verdict == "OpenException") == (4 <= v <= 15)
        open_2idem = set(range(6, 13)) | {14, 15, 18, 19, 23}
        ok &= (existence("2-idem-moqls", v).verdict == "OpenException") == (
            v in open_2idem
        )
        if v >= 6:
            ok &= existence("idempotent-qls", v).is_yes
        if v >= 4:
            ok &= existence("qls", v).is_yes
        if v >= 8:
            ok &= existence("2-moqls", v).is_yes
        if v >= 16:
            ok &= existence("3-moqls", v).is_yes
        if v >= 13:
            ok &= existence("soqls", v).is_yes
        if v >= 6 and v not in open_2idem:
            ok &= existence("2-idem-moqls", v).is_yes
    _line(7, ok, "verdict tables over 2..100 match the published sets")


def _direct_tensor_orthogonal(A, B, tol=1e-9):
    v = A.dim
    vecs = np.einsum("ija,ijb->ijab", A.array, B.array).reshape(v * v, v * v)
    gram = vecs.conj() @ vecs.T
    return bool(np.max(np.abs(gram - np.eye(v * v))) <= tol * v * v)


def test_criterion_08_oracle_equivalence():
    ok = True
    quantum = [
        paper_square(i)
        for i in CATALOG_IDS
        if isinstance(paper_square(i), QuantumLatinSquare)
    ]
    pairs = [(A, B) for A in quantum for B in quantum if A.dim == B.dim]
    rng = np.random.default_rng(0)
    for _ in range(20):
        v = int(rng.integers(3, 13))
        a = lift_classical(_random_square(v, rng))
        b = lift_classical(_random_square(v, rng))
        pairs.append((a, b))
    for A, B in pairs:
        fast = verify_orthogonal_pair(A, B).passed
        slow = _direct_tensor_orthogonal(A, B)
        ok &= fast == slow
    _line(8, ok, f"factorized and direct tensor checks agree on {len(pairs)} pairs")


def _random_square(v, rng):
    from qlatin.classical import LatinSquare

    base = LatinSquare([[(i + j) % v for j in range(v)] for i in range(v)])
    perm = list(rng.permutation(v))
    return base.relabel([int(x) for x in perm])


def test_criterion_09_property_suites():
    ok = True
    rng = np.random.default_rng(1)
    from qlatin.classical import verify_orthogonal_pair as classical_orthogonal

    # transfer: classical and lifted verdicts coincide on 50 random pairs
    for trial in range(50):
        q = int(rng.choice([3, 4, 5, 7, 8, 9]))
        a, b = field_mols(q, 2)
        a = a.relabel([int(x) for x in rng.permutation(q)])
        if trial % 2:
            b = b.relabel([int(x) for x in rng.permutation(q)])
        else:
            b = a
        ok &= classical_orthogonal(a, b) == verify_orthogonal_pair(
            lift_classical(a), lift_classical(b)
        ).passed
    # unitary invariance of the verdicts on every catalog quantum square
    for vid in CATALOG_IDS:
        Q = paper_square(vid)
        if not isinstance(Q, QuantumLatinSquare):
            continue
        base = cardinality(Q)
        for _ in range(10):
            QU = apply_global_unitary(Q, _random_unitary(Q.dim, rng))
            ok &= verify_qls(QU).passed
            ok &= cardinality(QU) == base
    # phase invariance
    for _ in range(50):
        d = int(rng.integers(2, 9))
        z = rng.normal(size=d) + 1j * rng.normal(size=d)
        a = UnitVector.normalized(z)
        b = UnitVector(np.exp(1j * rng.uniform(0, 2 * np.pi)) * a.data)
        ok &= equal_up_to_phase(a, b)
    _line(9, ok, "transfer, unitary-invariance, and phase-invariance suites")


def test_criterion_10_nonexistence_covered_by_tables():
    # the continuous nonexistence arguments are not re-derived numerically;
    # their conclusions live in the verdict tables and the cardinality tool
    ok = all(existence("idempotent-qls", v).verdict == "No" for v in (3, 4, 5))
    ok &= cardinality(paper_square("qls8")) == 16
    _line(10, ok, "nonexistence conclusions covered by tables and cardinality")
