"""JSON serialization for all design types, plus canonical hashing.

Complex amplitudes are stored as [re, im] pairs.  Canonical form (sorted
keys, fixed separators, repr-rounded floats) makes SHA-256 hashes stable
across runs.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Dict, List, Optional, Union

import numpy as np

from .classical import HoleyLatinSquare, HoleySpec, LatinSquare
from .errors import CorruptRecord, UnknownKind
from .numerics import UnitaryMatrix
from .pbd import PairwiseBalancedDesign
from .quantum import HoleyQuantumLatinSquare, QuantumLatinSquare


def _c2j(z: complex) -> List[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _vec2j(vec: np.ndarray) -> List[List[float]]:
    return [_c2j(z) for z in vec]


def _j2vec(data) -> np.ndarray:
    return np.array([complex(re, im) for re, im in data], dtype=np.complex128)


Design = Union[
    LatinSquare,
    HoleyLatinSquare,
    PairwiseBalancedDesign,
    QuantumLatinSquare,
    HoleyQuantumLatinSquare,
    UnitaryMatrix,
]


def to_json(design: Design) -> Dict[str, Any]:
    if isinstance(design, LatinSquare):
        return {"kind": "ls", "order": design.order, "grid": [list(r) for r in design.grid]}
    if isinstance(design, HoleyLatinSquare):
        return {
            "kind": "hls",
            "order": design.order,
            "grid": [list(r) for r in design.grid],
            "holes": [list(h) for h in design.spec.holes],
        }
    if isinstance(design, PairwiseBalancedDesign):
        return {
            "kind": "pbd",
            "v": design.v,
            "K": sorted(design.block_sizes),
            "blocks": [list(b) for b in design.blocks],
        }
    if isinstance(design, QuantumLatinSquare):
        v = design.dim
        return {
            "kind": "qls",
            "dim": v,
            "grid": [[_vec2j(design.array[i, j]) for j in range(v)] for i in range(v)],
        }
    if isinstance(design, HoleyQuantumLatinSquare):
        v = design.dim
        return {
            "kind": "hqls",
            "dim": v,
            "grid": [
                [
                    _vec2j(design.array[i, j]) if design.filled[i, j] else None
                    for j in range(v)
                ]
                for i in range(v)
            ],
            "holes": [list(h) for h in design.holes],
        }
    if isinstance(design, UnitaryMatrix):
        return {
            "kind": "unitary",
            "dim": design.dim,
            "matrix": [_vec2j(row) for row in design.data],
        }
    raise UnknownKind(f"cannot serialize {type(design).__name__}")


def from_json(obj: Dict[str, Any]) -> Design:
    try:
        kind = obj["kind"]
        if kind == "ls":
            return LatinSquare(obj["grid"])
        if kind == "hls":
            return HoleyLatinSquare(HoleySpec(obj["order"], obj["holes"]), obj["grid"])
        if kind == "pbd":
            return PairwiseBalancedDesign(obj["v"], obj["K"], obj["blocks"])
        if kind == "qls":
            return QuantumLatinSquare(
                np.array(
                    [[_j2vec(cell) for cell in row] for row in obj["grid"]],
                    dtype=np.complex128,
                )
            )
        if kind == "hqls":
            grid = [
                [None if cell is None else _j2vec(cell) for cell in row]
                for row in obj["grid"]
            ]
            return HoleyQuantumLatinSquare(grid, obj["holes"])
        if kind == "unitary":
            return UnitaryMatrix(np.array([_j2vec(row) for row in obj["matrix"]]))
    except UnknownKind:
        raise
    except Exception as exc:
        raise CorruptRecord(f"malformed {obj.get('kind', '?')} payload: {exc}") from exc
    raise UnknownKind(f"unknown design kind {kind!r}")


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def content_hash(design_or_obj: Any) -> str:
    """SHA-256 over canonical JSON; accepts a design or a JSON-ready dict."""
    obj = design_or_obj
    if not isinstance(obj, dict):
        obj = to_json(obj)
    return hashlib.sha256(canonical_dumps(obj).encode("utf-8")).hexdigest()
