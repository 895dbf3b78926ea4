from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import pytest

from cartansuper.cartan import build_special_model, build_witt_model, express_in_special, special_generator
from cartansuper.corpus import corpus
from cartansuper.model import verify_structure
from cartansuper.serialization import (
    dumps_model,
    load_model,
    load_schema,
    loads_model,
    model_to_dict,
    models_equal,
    save_model,
    validate,
)
from cartansuper.superpoly import SuperPolynomial

from conftest import DESK

GOLDEN = Path(__file__).parent / "golden" / "S_2_2_11_3.json"


def test_roundtrip_desk(S3):
    text = dumps_model(S3)
    back = loads_model(text)
    assert models_equal(S3, back)
    assert dumps_model(back) == text
    assert verify_structure(back).ok


def test_roundtrip_keeps_embedding(S3):
    back = loads_model(dumps_model(S3))
    f = SuperPolynomial.monomial(DESK, (1, 1))
    w = special_generator(1, 3, f).coords()
    assert (express_in_special(back, w) == express_in_special(S3, w)).all()


def test_roundtrip_witt(W3):
    back = loads_model(dumps_model(W3))
    assert models_equal(W3, back)


@pytest.mark.parametrize("model", corpus(), ids=lambda m: m.name)
def test_roundtrip_corpus(model):
    assert models_equal(model, loads_model(dumps_model(model)))


def test_byte_stable_across_builds():
    a = dumps_model(build_special_model(DESK))
    b = dumps_model(build_special_model(DESK))
    assert a == b


def test_golden_file(S3):
    assert dumps_model(S3) == GOLDEN.read_text(encoding="utf-8")


def test_save_load(tmp_path, S3):
    path = tmp_path / "s.json"
    save_model(S3, path)
    assert models_equal(load_model(path), S3)


def test_schema_rejects_bad_documents(S3):
    obj = model_to_dict(S3)
    validate(obj, "model")
    for mutate in (
        lambda d: d.pop("structure"),
        lambda d: d.update(p="3"),
        lambda d: d.update(extra=1),
        lambda d: d["structure"].append([0, 0, -1, 1]),
    ):
        bad = json.loads(json.dumps(obj))
        mutate(bad)
        with pytest.raises(jsonschema.ValidationError):
            validate(bad, "model")


def test_schemas_are_valid():
    for name in ("model", "report"):
        jsonschema.Draft7Validator.check_schema(load_schema(name))
