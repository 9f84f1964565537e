"""JSON encodings for matrices, conjugations, symbols, spaces and maps.

Complex numbers are ``[re, im]`` pairs; matrices are row-major
``{"rows", "cols", "data"}``.  :func:`dumps` sorts keys so identical
inputs give byte-identical reports.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np

from .canonical import CanonicalBlocks
from .conjugation import Conjugation, build_conjugation
from .errors import InvalidInput, ShapeMismatch
from .measure import DiscreteMeasureSpace, PointMap
from .toeplitz import Symbol

SCHEMA_VERSION = "1"


def complex_to_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(v) -> complex:
    if isinstance(v, bool):
        raise InvalidInput(f"not a complex number: {v!r}")
    if isinstance(v, (int, float)):
        z = complex(v)
    elif isinstance(v, (list, tuple)) and len(v) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in v
    ):
        z = complex(v[0], v[1])
    else:
        raise InvalidInput(f"not a complex number: {v!r}")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidInput("complex entries must be finite")
    return z


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [complex_to_json(z) for z in m.ravel()],
    }


def matrix_from_json(obj) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput("matrix JSON needs rows, cols and data") from exc
    if rows < 0 or cols < 0:
        raise InvalidInput("rows and cols must be non-negative")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise ShapeMismatch(f"data has {len(data) if isinstance(data, list) else '?'} entries, expected {rows * cols}")
    return np.array([complex_from_json(v) for v in data], dtype=np.complex128).reshape(rows, cols)


def conjugation_to_json(c: Conjugation) -> dict:
    return {
        "kind": c.kind,
        "dim": c.dim,
        "xi": c.xi,
        "theta": c.theta,
        "matrix": matrix_to_json(c.mat),
    }


def conjugation_from_json(obj) -> Conjugation:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InvalidInput("conjugation JSON needs a kind")
    matrix = obj.get("matrix")
    matrix = None if matrix is None else matrix_from_json(matrix)
    dim = obj.get("dim")
    if dim is None:
        if matrix is None:
            raise InvalidInput("conjugation JSON needs dim or matrix")
        dim = matrix.shape[0]
    return build_conjugation(
        obj["kind"],
        int(dim),
        xi=float(obj.get("xi") or 0.0),
        theta=float(obj.get("theta") or 0.0),
        matrix=matrix if obj["kind"] == "custom" else None,
    )


def symbol_to_json(sym: Symbol) -> dict:
    return {
        "coeffs": {str(k): complex_to_json(v) for k, v in sorted(sym.coeffs.items())},
        "tail_bound": sym.tail_bound,
    }


def symbol_from_json(obj) -> Symbol:
    if not isinstance(obj, dict) or not isinstance(obj.get("coeffs"), dict):
        raise InvalidInput("symbol JSON needs a coeffs object")
    try:
        coeffs = {int(k): complex_from_json(v) for k, v in obj["coeffs"].items()}
    except ValueError as exc:
        raise InvalidInput("symbol indices must be integers") from exc
    tail = obj.get("tail_bound", 0.0)
    if not isinstance(tail, (int, float)) or isinstance(tail, bool):
        raise InvalidInput("tail_bound must be a number")
    return Symbol(coeffs, float(tail))


def _weight_to_json(w):
    if isinstance(w, Fraction):
        return w.numerator if w.denominator == 1 else str(w)
    return w


def space_to_json(space: DiscreteMeasureSpace) -> dict:
    out = {
        "points": list(space.points),
        "weights": {p: _weight_to_json(w) for p, w in space.weights.items()},
    }
    if space.interior is not None:
        out["interior"] = sorted(space.interior)
    return out


def space_from_json(obj) -> DiscreteMeasureSpace:
    if not isinstance(obj, dict) or "points" not in obj or "weights" not in obj:
        raise InvalidInput("space JSON needs points and weights")
    return DiscreteMeasureSpace(tuple(obj["points"]), dict(obj["weights"]), obj.get("interior"))


def map_to_json(t: PointMap) -> dict:
    out = {"map": dict(t.map)}
    if t.complete is not None:
        out["complete"] = sorted(t.complete)
    return out


def map_from_json(obj) -> PointMap:
    if not isinstance(obj, dict) or not isinstance(obj.get("map"), dict):
        raise InvalidInput("map JSON needs a map object")
    return PointMap(obj["map"], obj.get("complete"))


def values_from_json(obj) -> dict:
    """Multiplier ``{"values": {"x": [re, im], ...}}``."""
    if not isinstance(obj, dict) or not isinstance(obj.get("values"), dict):
        raise InvalidInput("multiplier JSON needs a values object")
    return {str(k): complex_from_json(v) for k, v in obj["values"].items()}


def blocks_from_json(obj) -> CanonicalBlocks:
    if not isinstance(obj, dict):
        raise InvalidInput("blocks JSON must be an object")
    try:
        singles = [float(r) for r in obj.get("singles", [])]
        pairs = [(float(s), float(t)) for s, t in obj.get("pairs", [])]
    except (TypeError, ValueError) as exc:
        raise InvalidInput("blocks need numeric singles and [s, t] pairs") from exc
    if not all(math.isfinite(x) for x in singles + [v for p in pairs for v in p]):
        raise InvalidInput("block parameters must be finite")
    return CanonicalBlocks(singles, pairs, obj.get("order"))


def _default(o):
    if isinstance(o, Fraction):
        return _weight_to_json(o)
    if isinstance(o, complex):
        return complex_to_json(o)
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return matrix_to_json(o) if o.ndim == 2 else o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _clean(o):
    """Replace non-finite floats by ``None`` (JSON has no NaN)."""
    if isinstance(o, float) and not math.isfinite(o):
        return None
    if isinstance(o, dict):
        return {k: _clean(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_clean(v) for v in o]
    return o


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, default=_default, allow_nan=False)


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"malformed JSON: {exc}") from exc
