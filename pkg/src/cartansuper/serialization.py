"""Versioned, integer-only text format for models and schema validation of JSON outputs."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .cartan import SpecialDatum, attach_special_embedding
from .model import AlgebraModel, ModelError
from .superpoly import ShapeParams

FORMAT_VERSION = 1

# key order of the written file
_FIELDS = (
    "format_version",
    "kind",
    "name",
    "p",
    "m",
    "n",
    "t",
    "labels",
    "parity",
    "zdegree",
    "basis_data",
    "torus",
    "weights",
    "structure",
)


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    """Load a schema shipped in ``cartansuper/schemas``."""
    text = resources.files("cartansuper").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(obj: dict, name: str) -> None:
    """Raise ``jsonschema.ValidationError`` if ``obj`` does not match schema ``name``."""
    jsonschema.validate(obj, load_schema(name))


def _basis_data_out(model: AlgebraModel):
    if model.basis_data is None:
        return None
    if model.kind == "special":
        return [[d.i, d.j, list(d.alpha), list(d.u)] for d in model.basis_data]
    if model.kind == "witt":
        return [[list(alpha), list(u), j] for alpha, u, j in model.basis_data]
    return None


def _basis_data_in(kind: str, raw):
    if raw is None:
        return None
    if kind == "special":
        return tuple(SpecialDatum(int(i), int(j), tuple(alpha), tuple(u)) for i, j, alpha, u in raw)
    if kind == "witt":
        return tuple((tuple(alpha), tuple(u), int(j)) for alpha, u, j in raw)
    raise ModelError(f"basis_data is not supported for kind {kind!r}")


def model_to_dict(model: AlgebraModel) -> dict:
    """Plain-integer dictionary form of a model (canonical structure rows only)."""
    shape = model.shape
    rows = model.canonical_rows()
    return {
        "format_version": FORMAT_VERSION,
        "kind": model.kind,
        "name": model.name,
        "p": model.p,
        "m": shape.m if shape is not None else None,
        "n": shape.n if shape is not None else None,
        "t": list(shape.t) if shape is not None else None,
        "labels": list(model.labels),
        "parity": model.parity.tolist(),
        "zdegree": model.zdegree.tolist(),
        "basis_data": _basis_data_out(model),
        "torus": model.torus.tolist() if model.torus is not None else None,
        "weights": model.weights.tolist() if model.weights is not None else None,
        "structure": rows.tolist(),
    }


def model_from_dict(obj: dict) -> AlgebraModel:
    """Inverse of :func:`model_to_dict`; validates against the model schema first."""
    validate(obj, "model")
    if obj["format_version"] != FORMAT_VERSION:
        raise ModelError(f"unsupported format_version {obj['format_version']}")
    shape = None
    if obj["m"] is not None:
        small = obj["kind"] not in ("witt", "special")
        shape = ShapeParams(obj["m"], obj["n"], tuple(obj["t"]), obj["p"], allow_small=small)
    d = len(obj["labels"])
    rows = np.asarray(obj["structure"], dtype=np.int64).reshape(-1, 4)
    for key in ("parity", "zdegree"):
        if len(obj[key]) != d:
            raise ModelError(f"{key} has length {len(obj[key])}, expected {d}")
    model = AlgebraModel.from_canonical(
        obj["p"],
        obj["labels"],
        obj["parity"],
        obj["zdegree"],
        rows,
        kind=obj["kind"],
        name=obj["name"],
        shape=shape,
        torus=obj["torus"],
        weights=obj["weights"],
        basis_data=_basis_data_in(obj["kind"], obj["basis_data"]),
    )
    if model.kind == "special" and model.shape is not None and model.basis_data is not None:
        attach_special_embedding(model)
    return model


def _dump_value(v) -> str:
    return json.dumps(v, ensure_ascii=False, separators=(",", ":"))


def dumps_model(model: AlgebraModel) -> str:
    """Deterministic text: one top-level key per line, one row per line for tables."""
    obj = model_to_dict(model)
    out = ["{"]
    for n, key in enumerate(_FIELDS):
        v = obj[key]
        tail = "," if n + 1 < len(_FIELDS) else ""
        if isinstance(v, list) and v and isinstance(v[0], list):
            body = ",\n".join("  " + _dump_value(r) for r in v)
            out.append(f' "{key}": [\n{body}\n ]{tail}')
        else:
            out.append(f' "{key}": {_dump_value(v)}{tail}')
    out.append("}")
    return "\n".join(out) + "\n"


def loads_model(text: str) -> AlgebraModel:
    return model_from_dict(json.loads(text))


def save_model(model: AlgebraModel, path) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def load_model(path) -> AlgebraModel:
    return loads_model(Path(path).read_text(encoding="utf-8"))


def models_equal(a: AlgebraModel, b: AlgebraModel) -> bool:
    """Field-for-field equality of the serialized content."""

    def same(x, y):
        if x is None or y is None:
            return x is None and y is None
        return np.array_equal(np.asarray(x), np.asarray(y))

    return (
        a.p == b.p
        and a.kind == b.kind
        and a.name == b.name
        and a.shape == b.shape
        and a.labels == b.labels
        and a.basis_data == b.basis_data
        and same(a.parity, b.parity)
        and same(a.zdegree, b.zdegree)
        and same(a.struct, b.struct)
        and same(a.torus, b.torus)
        and same(a.weights, b.weights)
    )
