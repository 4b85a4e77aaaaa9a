"""JSON serialization and validation for operator, projection, and
rotation-algebra polynomial specs.  Schemas are documented under docs/."""
from __future__ import annotations

import json

import numpy as np

from . import operators as ops
from . import projections as prj
from .operators import (
    AlmostMathieu,
    Band,
    Dense,
    Kron,
    LatticeMismatchError,
    NyquistError,
    OperatorSpec,
    Poly,
    Shift,
    Toeplitz,
    toeplitz_from_samples,
)
from .traces import NCPolynomial


class SpecValidationError(ValueError):
    """A spec file or document failed structural validation."""


def _need(doc: dict, key: str, where: str):
    if key not in doc:
        raise SpecValidationError(f"{where}: missing field {key!r}")
    return doc[key]


def _as_complex(pair, where: str) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    if (
        isinstance(pair, (list, tuple))
        and len(pair) == 2
        and all(isinstance(x, (int, float)) for x in pair)
    ):
        return complex(pair[0], pair[1])
    raise SpecValidationError(f"{where}: expected a number or [re, im] pair, got {pair!r}")


def _lattice(doc: dict, where: str, default=None) -> str:
    lat = doc.get("lattice", default)
    if lat not in (ops.N0, ops.Z):
        raise SpecValidationError(f"{where}: lattice must be 'n0' or 'z', got {lat!r}")
    return lat


def _band_fn(doc, where: str):
    if isinstance(doc, (int, float, list)):
        return _as_complex(doc, where)
    if not isinstance(doc, dict):
        raise SpecValidationError(f"{where}: bad diagonal function {doc!r}")
    kind = _need(doc, "type", where)
    if kind == "const":
        return _as_complex(_need(doc, "value", where), where)
    if kind == "cos":
        amp = float(_need(doc, "amp", where))
        freq = float(_need(doc, "freq", where))
        phase = float(doc.get("phase", 0.0))
        return lambda n: amp * np.cos(2.0 * np.pi * (freq * np.asarray(n) + phase)) + 0j
    if kind == "exp":
        freq = float(_need(doc, "freq", where))
        phase = float(doc.get("phase", 0.0))
        return lambda n: np.exp(2j * np.pi * (freq * np.asarray(n) + phase))
    raise SpecValidationError(f"{where}: unknown diagonal function type {kind!r}")


def operator_from_json(doc, where: str = "operator") -> OperatorSpec:
    if not isinstance(doc, dict):
        raise SpecValidationError(f"{where}: expected an object, got {type(doc).__name__}")
    kind = _need(doc, "kind", where)
    try:
        if kind == "dense":
            rows = _need(doc, "matrix", where)
            m = np.array([[_as_complex(x, where) for x in row] for row in rows])
            return Dense(m)
        if kind == "toeplitz":
            sa = bool(doc.get("selfadjoint", False))
            if "coeffs" in doc:
                coeffs = {
                    int(k): _as_complex(v, where) for k, v in doc["coeffs"].items()
                }
                return Toeplitz(coeffs, selfadjoint=sa)
            if "samples" in doc:
                vals = [_as_complex(x, where) for x in doc["samples"]]
                bw = int(_need(doc, "bandwidth", where))
                return toeplitz_from_samples(vals, bw, selfadjoint=sa)
            raise SpecValidationError(f"{where}: toeplitz needs 'coeffs' or 'samples'")
        if kind == "shift":
            w = doc.get("weight")
            if w is None:
                return Shift()
            c = _as_complex(w, where)
            return Shift(weight=lambda i, c=c: np.full(np.shape(i), c))
        if kind == "band":
            bw = int(_need(doc, "bandwidth", where))
            diags = []
            for item in _need(doc, "diagonals", where):
                off = int(_need(item, "offset", where))
                diags.append((off, _band_fn(_need(item, "fn", where), where)))
            return Band(bw, tuple(diags))
        if kind == "almost_mathieu":
            return AlmostMathieu(
                coupling=float(_need(doc, "coupling", where)),
                freq=float(_need(doc, "freq", where)),
                phase=float(doc.get("phase", 0.0)),
            )
        if kind == "identity":
            return ops.identity(_lattice(doc, where, default=ops.N0))
        if kind == "kron":
            return Kron(
                operator_from_json(_need(doc, "left", where), where + ".left"),
                operator_from_json(_need(doc, "right", where), where + ".right"),
            )
        if kind == "poly":
            return Poly(_poly_node(_need(doc, "expr", where), where + ".expr"))
    except (ValueError, TypeError) as exc:
        if isinstance(exc, SpecValidationError):
            raise
        raise SpecValidationError(f"{where}: {exc}") from exc
    raise SpecValidationError(f"{where}: unknown operator kind {kind!r}")


def _poly_node(doc, where: str):
    if not isinstance(doc, dict):
        raise SpecValidationError(f"{where}: expected an object")
    if "op" in doc:
        spec = operator_from_json(doc["op"], where + ".op")
        return ops._as_node(spec)
    if "sum" in doc:
        return ops.SumE(tuple(_poly_node(p, where) for p in doc["sum"]))
    if "prod" in doc:
        return ops.ProdE(tuple(_poly_node(p, where) for p in doc["prod"]))
    if "adj" in doc:
        return ops.AdjE(_poly_node(doc["adj"], where + ".adj"))
    if "scale" in doc:
        return ops.ScaleE(
            _as_complex(doc["scale"], where), _poly_node(_need(doc, "of", where), where + ".of")
        )
    raise SpecValidationError(f"{where}: polynomial node needs op/sum/prod/adj/scale")


def projection_from_json(doc, where: str = "projection"):
    if not isinstance(doc, dict):
        raise SpecValidationError(f"{where}: expected an object")
    kind = _need(doc, "kind", where)
    try:
        if kind == "window":
            return prj.Window(
                _lattice(doc, where), int(_need(doc, "lo", where)), int(_need(doc, "hi", where))
            )
        if kind == "index_set":
            return prj.IndexSet(_lattice(doc, where), tuple(_need(doc, "indices", where)))
        if kind == "kron":
            return prj.KronProj(
                projection_from_json(_need(doc, "left", where), where + ".left"),
                projection_from_json(_need(doc, "right", where), where + ".right"),
            )
    except (ValueError, TypeError) as exc:
        if isinstance(exc, SpecValidationError):
            raise
        raise SpecValidationError(f"{where}: {exc}") from exc
    raise SpecValidationError(f"{where}: unknown projection kind {kind!r}")


def ncpoly_from_json(doc, where: str = "ncpoly") -> NCPolynomial:
    if not isinstance(doc, dict):
        raise SpecValidationError(f"{where}: expected an object")
    alpha = _need(doc, "alpha", where)
    if not isinstance(alpha, (int, float)):
        raise SpecValidationError(f"{where}: alpha must be a real number")
    terms = {}
    for item in _need(doc, "terms", where):
        m = int(_need(item, "m", where))
        k = int(_need(item, "k", where))
        c = _as_complex(_need(item, "coeff", where), where)
        terms[(m, k)] = {0: terms.get((m, k), {}).get(0, 0j) + c}
    return NCPolynomial(float(alpha), terms)


def load_spec_file(path):
    """Load a spec file; returns ('operator'|'projection'|'ncpoly', value)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecValidationError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict) or "kind" not in doc:
        raise SpecValidationError(f"{path}: spec document needs a 'kind' field")
    kind = doc["kind"]
    if kind == "ncpoly":
        return "ncpoly", ncpoly_from_json(doc, str(path))
    if kind in ("window", "index_set"):
        return "projection", projection_from_json(doc, str(path))
    return "operator", operator_from_json(doc, str(path))
