import json

import numpy as np
import pytest

from invkropina import builtin, catalog, dumps_model, load_model, loads_model, save_model
from invkropina.errors import ModelFileError, ValidationError
from invkropina.modelfile import model_to_dict


@pytest.mark.parametrize("name", catalog())
def test_round_trip_and_byte_stability(name, tmp_path):
    spec = builtin(name)
    path = tmp_path / f"{name}.json"
    save_model(spec, path)
    first = path.read_bytes()
    loaded = load_model(path)
    assert loaded == spec
    save_model(loaded, path)
    assert path.read_bytes() == first


def test_round_trip_random_phi(tmp_path, rng):
    from invkropina import ModelSpec, random_phi
    base = builtin("circle_su2_mod_u1")
    met = random_phi(99, base.algebra, base.split, (0.3, 3.3))
    spec = ModelSpec("rand", base.algebra, base.split, met, x_field=base.x_field, notes="random φ")
    text = dumps_model(spec)
    assert loads_model(text) == spec
    assert dumps_model(loads_model(text)) == text


def minimal():
    return {"dim": 3, "structure": [{"i": 0, "j": 1, "k": 2, "value": 1},
                                    {"i": 1, "j": 2, "k": 0, "value": 1},
                                    {"i": 2, "j": 0, "k": 1, "value": 1}],
            "q0": np.eye(3).tolist()}


def test_minimal_file_defaults():
    spec = loads_model(json.dumps(minimal()))
    np.testing.assert_array_equal(spec.metric.phi, np.eye(3))
    assert spec.split.trivial
    assert spec.x_field is None
    assert spec.algebra.bracket([1, 0, 0], [0, 1, 0]).tolist() == [0, 0, 1]


def test_antisymmetry_conflict():
    doc = minimal()
    doc["structure"].append({"i": 1, "j": 0, "k": 2, "value": 1})
    with pytest.raises(ModelFileError, match="structure") as info:
        loads_model(json.dumps(doc))
    assert "structure[3]" in str(info.value)


def test_consistent_lower_triangle_entries_accepted():
    doc = minimal()
    doc["structure"].append({"i": 1, "j": 0, "k": 2, "value": -1})
    assert loads_model(json.dumps(doc)) == loads_model(json.dumps(minimal()))


def test_missing_q0_names_field():
    doc = minimal()
    del doc["q0"]
    with pytest.raises(ModelFileError, match="field 'q0'"):
        loads_model(json.dumps(doc))


@pytest.mark.parametrize("mutate, where", [
    (lambda d: d.update(dim=0), "field 'dim'"),
    (lambda d: d.update(q0=[[1, 0, 0], [0, 1, 0]]), "field 'q0'"),
    (lambda d: d.update(q0=[[1, 0, 0], [0, 1], [0, 0, 1]]), "field 'q0[1]'"),
    (lambda d: d["structure"][0].update(k=5), "field 'structure[0].k'"),
    (lambda d: d["structure"][1].pop("value"), "field 'structure[1]'"),
    (lambda d: d.update(x=[1, 0]), "field 'x'"),
    (lambda d: d.update(h_indices=[2, 2]), "field 'h_indices'"),
    (lambda d: d.update(colour="red"), "unknown field"),
])
def test_located_errors(mutate, where):
    doc = minimal()
    mutate(doc)
    with pytest.raises(ModelFileError, match=where.replace("[", r"\[").replace("]", r"\]")):
        loads_model(json.dumps(doc))


def test_json_syntax_error_located():
    text = '{\n  "dim": 3,\n  "q0": [1, 2,\n}'
    with pytest.raises(ModelFileError, match=r"line 4, column 1"):
        loads_model(text)


def test_validation_failure_carries_report():
    doc = minimal()
    doc["q0"] = np.diag([1.0, 1.0, 2.0]).tolist()
    with pytest.raises(ValidationError) as info:
        loads_model(json.dumps(doc))
    assert info.value.report["metric.q0_bi_invariant"].residual == pytest.approx(1.0)
    # opt out of validation to inspect a broken model
    assert loads_model(json.dumps(doc), validate=False).dim == 3


def test_unreadable_path(tmp_path):
    with pytest.raises(ModelFileError, match="cannot read"):
        load_model(tmp_path / "missing.json")


def test_written_layout():
    doc = model_to_dict(builtin("u2_central_kropina"))
    assert list(doc) == ["name", "notes", "dim", "basis_labels", "structure", "q0", "phi", "h_indices", "x"]
    assert all(r["i"] < r["j"] for r in doc["structure"])
