"""Command-line surface: build, verify, inspect, and store designs.

Reports are JSON on stdout.  Exit codes: 0 success, 1 verification failed,
2 design unavailable (nonexistent or open), 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .catalog import (
    CATALOG_IDS,
    KINDS,
    build,
    catalog_root,
    existence,
    paper_square,
    store,
)
from .classical import HoleyLatinSquare, LatinSquare, verify_holey_latin_square
from .constructions import DEFAULT_POLICY, RotationPolicy
from .errors import (
    CorruptRecord,
    KnownNonexistent,
    QlatinError,
    RouteUnavailable,
    Unavailable,
    UnknownId,
    UnknownKind,
    VerificationFailed,
)
from .numerics import ToleranceConfig, UnitaryMatrix
from .quantum import (
    HoleyQuantumLatinSquare,
    QuantumLatinSquare,
    cardinality,
    conjugate_transpose_qls,
    verify_holey_qls,
    verify_idempotent_qls,
    verify_orthogonal_pair,
    verify_qls,
    verify_soqls,
)
from .serialize import from_json, to_json


class _Parser(argparse.ArgumentParser):
    """argparse with the documented usage exit code."""

    def error(self, message):
        print(json.dumps({"error": message}), file=sys.stderr)
        raise SystemExit(3)


# ---------------------------------------------------------------------------
# pretty rendering


def _term(coef: complex, k: int) -> str:
    re, im = coef.real, coef.imag
    if abs(im) < 1e-9:
        mag = f"{re:.3g}"
    elif abs(re) < 1e-9:
        mag = f"{im:.3g}i"
    else:
        mag = f"({re:.3g}{im:+.3g}i)"
    return f"{mag}|{k}⟩"


def render_vector(vec: np.ndarray, eps: float = 1e-6) -> str:
    """Symbolic shorthand: |k>, (|a>+/-|b>)/sqrt2, else an amplitude sum."""
    support = [k for k in range(len(vec)) if abs(vec[k]) > eps]
    if len(support) == 1:
        k = support[0]
        if abs(vec[k] - 1.0) < eps:
            return f"|{k}⟩"
    if len(support) == 2:
        a, b = support
        r = 1.0 / np.sqrt(2.0)
        if abs(vec[a] - r) < eps and abs(vec[b] - r) < eps:
            return f"(|{a}⟩+|{b}⟩)/√2"
        if abs(vec[a] - r) < eps and abs(vec[b] + r) < eps:
            return f"(|{a}⟩-|{b}⟩)/√2"
    return "+".join(_term(vec[k], k) for k in support).replace("+-", "-")


def render_design(design) -> str:
    if isinstance(design, QuantumLatinSquare):
        v = design.dim
        rows = [
            [render_vector(design.array[i, j]) for j in range(v)] for i in range(v)
        ]
    elif isinstance(design, HoleyQuantumLatinSquare):
        v = design.dim
        rows = [
            [
                render_vector(design.array[i, j]) if design.filled[i, j] else "."
                for j in range(v)
            ]
            for i in range(v)
        ]
    elif isinstance(design, LatinSquare):
        rows = [[str(x) for x in row] for row in design.grid]
    elif isinstance(design, HoleyLatinSquare):
        rows = [["." if x is None else str(x) for x in row] for row in design.grid]
    elif isinstance(design, UnitaryMatrix):
        rows = [[_term(z, 0)[: -len("|0⟩")] or "0" for z in row] for row in design.data]
    else:
        return json.dumps(to_json(design), indent=1)
    widths = [max(len(r[j]) for r in rows) for j in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)) for row in rows
    )


def _emit(report: Dict[str, Any], pretty_text: Optional[str], pretty: bool) -> None:
    if pretty and pretty_text is not None:
        print(pretty_text)
    else:
        print(json.dumps(report, indent=1))


# ---------------------------------------------------------------------------
# policies and file I/O


def _policy_from_flag(value: str) -> RotationPolicy:
    if value in ("fourier", "real"):
        return RotationPolicy(strategy=value)
    U = _load_design(Path(value))
    if not isinstance(U, UnitaryMatrix):
        raise UnknownKind(f"policy file {value} does not hold a unitary")
    return RotationPolicy(strategy="given", unitaries=(U,))


def _load_design(path: Path):
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptRecord(f"cannot parse {path}: {exc}") from exc
    if isinstance(obj, dict) and "payload" in obj:
        obj = obj["payload"]
    return from_json(obj)


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args) -> int:
    try:
        policy = _policy_from_flag(args.policy)
        result, cert = build(
            args.kind,
            args.v,
            policy=policy,
            budget=args.budget,
            tol=ToleranceConfig(eps_orth=args.tol),
        )
    except (KnownNonexistent, Unavailable, RouteUnavailable) as exc:
        verdict = existence(args.kind, args.v)
        _emit(
            {
                "command": "build",
                "kind": args.kind,
                "v": args.v,
                "verdict": verdict.verdict,
                "error": str(exc),
            },
            f"{args.kind}({args.v}): {verdict.verdict} ({exc})",
            args.pretty,
        )
        return 2
    except VerificationFailed as exc:
        _emit(
            {"command": "build", "kind": args.kind, "v": args.v, "error": str(exc)},
            f"verification failed: {exc}",
            args.pretty,
        )
        return 1
    squares = result if isinstance(result, list) else [result]
    stored = []
    for idx, Q in enumerate(squares):
        suffix = chr(ord("a") + idx) if len(squares) > 1 else ""
        design_id = f"{args.kind}-{args.v}{('-' + suffix) if suffix else ''}"
        store(Q, design_id, provenance=f"constructed({cert.route})")
        stored.append(design_id)
    if args.out:
        payload = to_json(squares[0]) if len(squares) == 1 else [to_json(Q) for Q in squares]
        Path(args.out).write_text(json.dumps(payload, indent=1), encoding="utf-8")
    report = {
        "command": "build",
        "kind": args.kind,
        "v": args.v,
        "verdict": "Yes",
        "route": cert.route,
        "cardinalities": list(cert.cardinalities),
        "nonclassical": list(cert.nonclassical),
        "checks": [{"name": n, "passed": r.passed} for n, r in cert.reports],
        "stored": stored,
        "out": args.out,
    }
    pretty = "\n\n".join(render_design(Q) for Q in squares)
    pretty += f"\n\nroute: {cert.route}  cardinalities: {list(cert.cardinalities)}"
    _emit(report, pretty, args.pretty)
    return 0


_CHECKS = ("qls", "idempotent", "orthogonal", "soqls", "holey", "nonclassical")


def cmd_verify(args) -> int:
    tol = ToleranceConfig(eps_orth=args.tol)
    checks = [c.strip() for c in args.check.split(",") if c.strip()]
    for c in checks:
        if c not in _CHECKS:
            print(json.dumps({"error": f"unknown check {c!r}"}), file=sys.stderr)
            return 3
    try:
        designs = [(p, _load_design(Path(p))) for p in args.paths]
    except (CorruptRecord, UnknownKind) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 3
    results: List[Dict[str, Any]] = []

    def record(target: str, name: str, passed: bool, witness=None):
        entry: Dict[str, Any] = {"target": target, "check": name, "passed": bool(passed)}
        if witness and not passed:
            entry["witness"] = str(witness)
        results.append(entry)

    for path, D in designs:
        for c in checks:
            if c == "orthogonal":
                continue
            if c == "qls" and isinstance(D, QuantumLatinSquare):
                rep = verify_qls(D, tol)
                record(path, c, rep.passed, rep.witness())
            elif c == "idempotent" and isinstance(D, QuantumLatinSquare):
                rep = verify_idempotent_qls(D, tol)
                record(path, c, rep.passed, rep.witness())
            elif c == "soqls" and isinstance(D, QuantumLatinSquare):
                rep = verify_soqls(D, tol)
                record(path, c, rep.passed, rep.witness())
            elif c == "nonclassical" and isinstance(D, QuantumLatinSquare):
                card = cardinality(D, tol)
                record(path, c, card > D.dim, f"cardinality {card}")
            elif c == "holey" and isinstance(D, HoleyQuantumLatinSquare):
                rep = verify_holey_qls(D, tol)
                record(path, c, rep.passed, rep.witness())
            elif c == "holey" and isinstance(D, HoleyLatinSquare):
                ok, witness = verify_holey_latin_square(D)
                record(path, c, ok, witness)
            else:
                record(path, c, False, f"check not applicable to {type(D).__name__}")
    if "orthogonal" in checks:
        quantum = [(p, D) for p, D in designs if isinstance(D, QuantumLatinSquare)]
        if len(quantum) == 1:
            p, D = quantum[0]
            rep = verify_orthogonal_pair(D, conjugate_transpose_qls(D), tol)
            record(p, "orthogonal(self)", rep.passed, rep.witness())
        for a in range(len(quantum)):
            for b in range(a + 1, len(quantum)):
                rep = verify_orthogonal_pair(quantum[a][1], quantum[b][1], tol)
                record(
                    f"{quantum[a][0]}|{quantum[b][0]}",
                    "orthogonal",
                    rep.passed,
                    rep.witness(),
                )
    passed = all(r["passed"] for r in results)
    report = {"command": "verify", "passed": passed, "results": results}
    lines = [
        f"{'PASS' if r['passed'] else 'FAIL'}  {r['check']:<18} {r['target']}"
        + (f"  ({r['witness']})" if "witness" in r else "")
        for r in results
    ]
    _emit(report, "\n".join(lines), args.pretty)
    return 0 if passed else 1


def cmd_catalog(args) -> int:
    if args.action == "list":
        report = {"command": "catalog", "ids": list(CATALOG_IDS)}
        _emit(report, "\n".join(CATALOG_IDS), args.pretty)
        return 0
    if not args.id:
        print(json.dumps({"error": "missing catalog id"}), file=sys.stderr)
        return 3
    try:
        design = paper_square(args.id)
    except UnknownId as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 3
    if args.action == "show":
        _emit(
            {"command": "catalog", "id": args.id, "design": to_json(design)},
            render_design(design),
            args.pretty,
        )
        return 0
    # export
    if not args.path:
        print(json.dumps({"error": "export needs a destination path"}), file=sys.stderr)
        return 3
    Path(args.path).write_text(
        json.dumps(to_json(design), indent=1), encoding="utf-8"
    )
    _emit(
        {"command": "catalog", "id": args.id, "exported": args.path},
        f"wrote {args.id} to {args.path}",
        args.pretty,
    )
    return 0


def cmd_existence(args) -> int:
    try:
        verdict = existence(args.kind, args.v)
    except UnknownKind as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 3
    report = {
        "command": "existence",
        "kind": verdict.kind,
        "v": verdict.v,
        "verdict": verdict.verdict,
        "route": verdict.route,
    }
    text = f"{verdict.kind}({verdict.v}): {verdict.verdict}"
    if verdict.route:
        text += f" via {verdict.route}"
    _emit(report, text, args.pretty)
    return 0 if verdict.verdict != "No" else 0


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qlatin", description=__doc__)
    parser.add_argument("--pretty", action="store_true", help="human-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct and store a verified design")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--v", required=True, type=int)
    p.add_argument(
        "--policy",
        default="fourier",
        help="fourier, real, or a path to a unitary JSON file",
    )
    p.add_argument("--out", default=None, help="also write the design JSON here")
    p.add_argument("--seed", type=int, default=0, help="search seed (deterministic)")
    p.add_argument("--budget", type=float, default=60.0, help="search budget, seconds")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="verify design files")
    p.add_argument("paths", nargs="+")
    p.add_argument("--check", default="qls", help="comma list: " + ",".join(_CHECKS))
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", help="inspect the shipped reference designs")
    p.add_argument("action", choices=("list", "show", "export"))
    p.add_argument("id", nargs="?", default=None)
    p.add_argument("path", nargs="?", default=None)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("existence", help="verdict for a design class and order")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--v", required=True, type=int)
    p.set_defaults(func=cmd_existence)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except QlatinError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
