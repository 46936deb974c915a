"""JSON-compatible representation and report files.

Floats are written with 17 significant digits so a write/read/write cycle
is byte-identical. Complex matrix entries are always ``[re, im]`` pairs, even
for real groups; realness is checked on load, not implied by the layout.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .errors import BadDescriptor, CharvarError, ParseError
from .groups import MEMBERSHIP_TOL, RepresentationTuple, parse_descriptor


def format_float(x: float) -> str:
    x = float(x) + 0.0  # drop the sign of -0.0
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    return format(x, ".17g")


def _depth(obj) -> int:
    if isinstance(obj, (list, tuple)):
        return 1 + max((_depth(x) for x in obj), default=0)
    return 0


def _encode(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_encode(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if _depth(obj) <= 2 and not any(isinstance(x, dict) for x in obj):
            return "[" + ", ".join(_encode(x) for x in obj) + "]"
        items = [inner + _encode(x, indent + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(float(obj)):
            return "null"
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    """Deterministic JSON text with 17-digit floats and a trailing newline."""
    return _encode(obj) + "\n"


def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def representation_to_dict(rho: RepresentationTuple) -> dict:
    return {
        "group": str(rho.descriptor),
        "rank": rho.rank,
        "matrices": [matrix_to_json(m) for m in rho.matrices],
    }


def dumps_representation(rho: RepresentationTuple) -> str:
    return dumps(representation_to_dict(rho))


def _matrix_from_json(data, n: int) -> np.ndarray:
    if not isinstance(data, list) or len(data) != n:
        raise ParseError(f"expected {n} rows")
    out = np.empty((n, n), dtype=np.complex128)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"row {i} must have {n} entries")
        for j, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
            ):
                raise ParseError(f"entry ({i}, {j}) must be a [re, im] pair of numbers")
            out[i, j] = complex(float(entry[0]), float(entry[1]))
    return out


def representation_from_dict(data: dict, tol: float = MEMBERSHIP_TOL) -> RepresentationTuple:
    if not isinstance(data, dict):
        raise ParseError("representation file must hold an object")
    for key in ("group", "rank", "matrices"):
        if key not in data:
            raise ParseError(f"missing field {key!r}")
    try:
        desc = parse_descriptor(data["group"])
    except (BadDescriptor, TypeError) as exc:
        raise ParseError(str(exc)) from exc
    rank = data["rank"]
    mats = data["matrices"]
    if not isinstance(rank, int) or rank < 1:
        raise ParseError("rank must be a positive integer")
    if not isinstance(mats, list) or len(mats) != rank:
        raise ParseError(f"expected {rank} matrices")
    matrices = [_matrix_from_json(m, desc.n) for m in mats]
    try:
        return RepresentationTuple.from_matrices(desc, matrices, tol)
    except CharvarError as exc:
        raise ParseError(f"invalid representation: {exc}") from exc


def loads_representation(text: str, tol: float = MEMBERSHIP_TOL) -> RepresentationTuple:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    return representation_from_dict(data, tol)


def read_representation(path, tol: float = MEMBERSHIP_TOL) -> RepresentationTuple:
    return loads_representation(Path(path).read_text(), tol)


def write_representation(path, rho: RepresentationTuple) -> None:
    Path(path).write_text(dumps_representation(rho))
