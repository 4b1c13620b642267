import json
import os
import pathlib

import pytest

import unigen

TESTS = pathlib.Path(os.environ.get("UNIGEN_TEST_DIR", pathlib.Path(__file__).parents[2] / "tests"))


def read(rel):
    return (TESTS / rel).read_text(encoding="utf-8")


def test_reported_metrics():
    assert [str(unigen.completeness(p, t)) for p, t in [(15, 15), (15, 16), (17, 19)]] == ["100.0", "93.8", "89.5"]
    assert str(unigen.improvement(140, 12)) == "91.4"
    assert unigen.improvement(75, 5).tenths == 933
    assert str(unigen.matrix_completeness(read("data/matrix_game2.json"))) == "93.8"


def test_errors_carry_codes():
    with pytest.raises(unigen.UnigenError) as info:
        unigen.completeness(3, 0)
    assert info.value.code == "InvalidMatrix"
    with pytest.raises(unigen.UnigenError) as info:
        unigen.extract_json("nothing here")
    assert info.value.code == "NoJsonFound"


def test_blueprint_round_trip():
    text = read("data/obstacle_run.blueprint.json")
    canonical = unigen.canonical_serialize(text)
    assert unigen.canonical_serialize(canonical) == canonical
    assert unigen.blueprint_hash(text) == unigen.blueprint_hash(canonical)
    assert unigen.validate_blueprint(text) == []
    bp = unigen.parse_blueprint(text)
    assert bp["meta"]["name"] == "Obstacle Run"
    broken = json.loads(text)
    broken["entities"][0]["scale"] = [1, 0, 1]
    codes = {d["code"] for d in unigen.validate_blueprint(json.dumps(broken))}
    assert "NONPOSITIVE_SCALE" in codes


def test_templates_match_goldens():
    text = read("data/templates.blueprint.json")
    sources = unigen.template_generate(text)
    kinds = {p["typeName"]: p["kind"] for p in unigen.plan_script_set(text)}
    assert len(sources) == 8
    for type_name, source in sources.items():
        assert source == read(f"golden/templates/{kinds[type_name]}.cs")
    assert unigen.validate_scripts(text, sources) == []


def test_compile_log_matches_oracle():
    got = unigen.parse_compile_log(read("data/compile_mixed.log"))
    expected = json.loads(read("data/compile_mixed.expected.json"))
    assert [{k: d[k] for k in ("file", "line", "column", "severity", "code", "message")} for d in got] == [
        {k: d[k] for k in ("file", "line", "column", "severity", "code", "message")} for d in expected
    ]
