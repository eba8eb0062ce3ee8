"""JSON model files.

Layout (keys in this order when written)::

    {
      "name": "u2_central_kropina",
      "notes": "...",
      "dim": 4,
      "basis_labels": ["b0", "b1", "b2", "b3"],
      "structure": [{"i": 1, "j": 2, "k": 3, "value": 1.0}, ...],
      "q0": [[1.0, 0.0, ...], ...],
      "phi": [[...], ...],
      "h_indices": [],
      "x": [1.0, 0.0, 0.0, 0.0]
    }

Only ``dim``, ``structure`` and ``q0`` are required. ``structure`` lists
``[b_i, b_j]`` coefficients; entries with ``i > j`` are accepted but must agree
with the antisymmetric completion of the ``i < j`` ones. ``phi`` defaults to
the identity, ``h_indices`` to empty, ``x`` to absent.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .algebra import LieAlgebra, ReductiveSplit
from .errors import ModelFileError, StructureError, ValidationError
from .metric import InvariantMetric
from .models import MAX_DIM, ModelSpec


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ModelFileError(f"expected a number, got {value!r}", where)
    if not math.isfinite(value):
        raise ModelFileError("number is not finite", where)
    return float(value)


def _index(value, dim, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ModelFileError(f"expected an integer index, got {value!r}", where)
    if not 0 <= value < dim:
        raise ModelFileError(f"index {value} out of range 0..{dim - 1}", where)
    return value


def _matrix(doc, key, dim):
    rows = doc[key]
    if not isinstance(rows, list) or len(rows) != dim:
        raise ModelFileError(f"expected {dim} rows", f"field '{key}'")
    out = np.zeros((dim, dim))
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise ModelFileError(f"expected {dim} entries", f"field '{key}[{r}]'")
        for col, v in enumerate(row):
            out[r, col] = _number(v, f"field '{key}[{r}][{col}]'")
    return out


def _structure(records, dim):
    if not isinstance(records, list):
        raise ModelFileError("expected a list of {i, j, k, value} records", "field 'structure'")
    c = np.zeros((dim, dim, dim))
    seen = {}
    for n, rec in enumerate(records):
        where = f"field 'structure[{n}]'"
        if not isinstance(rec, dict):
            raise ModelFileError("expected an object with keys i, j, k, value", where)
        missing = [k for k in ("i", "j", "k", "value") if k not in rec]
        if missing:
            raise ModelFileError(f"missing key(s) {', '.join(missing)}", where)
        i, j, k = (_index(rec[key], dim, f"field 'structure[{n}].{key}'") for key in ("i", "j", "k"))
        value = _number(rec["value"], f"field 'structure[{n}].value'")
        if i == j:
            if value != 0.0:
                raise ModelFileError(f"[b{i}, b{i}] must vanish", where)
            continue
        # store in i < j orientation
        key, signed = ((i, j, k), value) if i < j else ((j, i, k), -value)
        if key in seen and seen[key][1] != signed:
            raise ModelFileError(
                f"antisymmetry conflict with structure[{seen[key][0]}] for [b{key[0]}, b{key[1]}]_b{k}", where)
        seen[key] = (n, signed)
        c[key] = signed
        c[key[1], key[0], key[2]] = -signed
    return c


def model_from_dict(doc, validate: bool = True) -> ModelSpec:
    if not isinstance(doc, dict):
        raise ModelFileError("top level must be a JSON object")
    for key in ("dim", "structure", "q0"):
        if key not in doc:
            raise ModelFileError("missing required field", f"field '{key}'")
    known = {"name", "notes", "dim", "basis_labels", "structure", "q0", "phi", "h_indices", "x"}
    extra = sorted(set(doc) - known)
    if extra:
        raise ModelFileError(f"unknown field(s): {', '.join(extra)}")
    dim = doc["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or not 1 <= dim <= MAX_DIM:
        raise ModelFileError(f"dim must be an integer in 1..{MAX_DIM}, got {dim!r}", "field 'dim'")

    labels = doc.get("basis_labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != dim
                               or not all(isinstance(s, str) for s in labels)):
        raise ModelFileError(f"expected {dim} strings", "field 'basis_labels'")
    c = _structure(doc["structure"], dim)
    q0 = _matrix(doc, "q0", dim)
    phi = _matrix(doc, "phi", dim) if doc.get("phi") is not None else np.eye(dim)

    h = doc.get("h_indices") or []
    if not isinstance(h, list):
        raise ModelFileError("expected a list of indices", "field 'h_indices'")
    h = [_index(v, dim, f"field 'h_indices[{n}]'") for n, v in enumerate(h)]
    if len(set(h)) != len(h):
        raise ModelFileError("duplicate index", "field 'h_indices'")

    x = doc.get("x")
    if x is not None:
        if not isinstance(x, list) or len(x) != dim:
            raise ModelFileError(f"expected {dim} numbers", "field 'x'")
        x = np.array([_number(v, f"field 'x[{n}]'") for n, v in enumerate(x)])

    name = doc.get("name", "")
    notes = doc.get("notes", "")
    for key, val in (("name", name), ("notes", notes)):
        if not isinstance(val, str):
            raise ModelFileError("expected a string", f"field '{key}'")

    try:
        spec = ModelSpec(name, LieAlgebra(c, tuple(labels) if labels else None), ReductiveSplit(dim, tuple(h)),
                         InvariantMetric(q0, phi), x, notes)
    except StructureError as exc:
        raise ModelFileError(str(exc)) from None
    if validate:
        report = spec.validate()
        if not report.ok:
            names = ", ".join(ch.name for ch in report.failures())
            raise ValidationError(f"model {name or '<unnamed>'} failed validation: {names}", report)
    return spec


def model_to_dict(spec: ModelSpec) -> dict:
    c = spec.algebra.structure
    n = spec.dim
    records = [{"i": i, "j": j, "k": k, "value": float(c[i, j, k])}
               for i in range(n) for j in range(i + 1, n) for k in range(n) if c[i, j, k] != 0.0]
    doc = {"name": spec.name, "notes": spec.notes, "dim": n}
    if spec.algebra.basis_labels:
        doc["basis_labels"] = list(spec.algebra.basis_labels)
    doc["structure"] = records
    doc["q0"] = spec.metric.q0.tolist()
    doc["phi"] = spec.metric.phi.tolist()
    doc["h_indices"] = list(spec.split.h_indices)
    if spec.x_field is not None:
        doc["x"] = spec.x_field.tolist()
    return doc


def dumps_model(spec: ModelSpec) -> str:
    return json.dumps(model_to_dict(spec), indent=2) + "\n"


def loads_model(text: str, validate: bool = True) -> ModelSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    return model_from_dict(doc, validate=validate)


def save_model(spec: ModelSpec, path) -> None:
    Path(path).write_text(dumps_model(spec), encoding="utf-8")


def load_model(path, validate: bool = True) -> ModelSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFileError(f"cannot read model file: {exc.strerror}", str(path)) from None
    return loads_model(text, validate=validate)
