import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ontotwin.ontology import (
    COMPLEXITY_TABLE, OPTIONAL_EXPORTS, REQUIRED_EXPORTS, TEMPLATE_IDS, MissingExports, ParseError,
    ReferentialViolation, apply_diff, canonical_bytes, canonical_form, diff, load_document, measure,
    parse_document, snapshot, template_data, template_snapshot, validate_counts, version_id,
)
from ontotwin.ontology.synthetic import widen_stations


def test_required_exports_are_45_unique_names():
    assert len(REQUIRED_EXPORTS) == 45
    assert len(set(REQUIRED_EXPORTS)) == 45
    assert not set(OPTIONAL_EXPORTS) & set(REQUIRED_EXPORTS)


@pytest.mark.parametrize("template_id", TEMPLATE_IDS)
def test_templates_load(template_id):
    doc = template_snapshot(template_id).document
    assert set(REQUIRED_EXPORTS) <= set(doc.keys())
    assert doc.line_order[0] == "S1"


def test_aerospace_counts():
    doc = template_snapshot("aerospace").document
    assert len(doc["STATIONS"]) == 6
    assert len(doc["FAILURE_CODES"]) == 24


def test_food_and_pharma_counts():
    food = measure(template_snapshot("food_beverage").document)
    assert (food.stations, food.failure_codes, food.inspection_plans, food.tool_definitions) == (14, 28, 14, 8)
    assert measure(template_snapshot("pharma").document).failure_codes == 27


def test_missing_stations_names_the_key():
    data = template_data("aerospace")
    del data["STATIONS"]
    with pytest.raises(MissingExports) as err:
        parse_document(data)
    assert err.value.missing == ["STATIONS"]


def test_missing_optional_key_is_fine():
    data = template_data("aerospace")
    data.pop("ENTITY_ALIASES", None)
    assert parse_document(data)["ENTITY_ALIASES"] == {}


def test_unknown_station_reference_is_rejected():
    data = template_data("aerospace")
    data["STATION_FAILURE_CODES"]["S9"] = ["AER-S1-01"]
    with pytest.raises(ReferentialViolation) as err:
        parse_document(data)
    assert any("S9" in str(v) for v in err.value.violations)


def test_unknown_failure_code_reference_is_rejected():
    data = template_data("pharma")
    data["STATION_FAILURE_CODES"]["S1"] = list(data["STATION_FAILURE_CODES"]["S1"]) + ["NOPE-01"]
    with pytest.raises(ReferentialViolation):
        parse_document(data)


@pytest.mark.parametrize("mutate", [
    lambda d: d["STATIONS"]["S1"].__setitem__("cycle_time_range_min", [500, 100]),
    lambda d: d["STATIONS"]["S1"].__setitem__("first_pass_yield", 1.2),
    lambda d: d.__setitem__("EQUIPMENT_DOWNTIME_PROB", -0.1),
])
def test_range_and_probability_rules(mutate):
    data = template_data("automotive")
    mutate(data)
    with pytest.raises(ReferentialViolation):
        parse_document(data)


def test_non_object_document_is_a_parse_error(tmp_path):
    with pytest.raises(ParseError):
        parse_document([1, 2, 3])
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ParseError):
        load_document(bad)


def test_document_is_read_only():
    doc = template_snapshot("aerospace").document
    with pytest.raises(TypeError):
        doc["STATIONS"]["S1"] = {}


@pytest.mark.parametrize("template_id", TEMPLATE_IDS)
def test_complexity_matches_reference(template_id):
    report = validate_counts(template_snapshot(template_id).document, COMPLEXITY_TABLE[template_id])
    assert report.ok, report.mismatches


def test_self_comparison_is_all_match():
    doc = template_snapshot("electronics").document
    assert validate_counts(doc, measure(doc)).ok


def test_snapshot_is_deterministic_and_content_addressed():
    data = template_data("aerospace")
    a = snapshot(parse_document(data))
    b = snapshot(parse_document(template_data("aerospace")))
    assert a.version_id == b.version_id
    data["STATIONS"]["S4"]["first_pass_yield"] = 0.93
    assert snapshot(parse_document(data)).version_id != a.version_id


def test_version_survives_serialization_roundtrip(tmp_path):
    snap = template_snapshot("aerospace")
    path = tmp_path / "aero.json"
    path.write_text(json.dumps(snap.document.to_dict()), encoding="utf-8")
    assert snapshot(load_document(path)).version_id == snap.version_id


def test_canonical_numbers_are_stable():
    assert canonical_bytes({"a": 1.0}) == canonical_bytes({"a": 1})
    assert version_id({"b": [1, 2], "a": 0.5}) == version_id({"a": 0.5, "b": [1, 2]})


def test_diff_self_is_empty():
    a = template_snapshot("aerospace")
    assert diff(a, a).is_empty()


def test_diff_aerospace_pharma_renames_s4():
    d = diff(template_snapshot("aerospace"), template_snapshot("pharma"))
    names = {(e.export, e.path): (e.before, e.after) for e in d.changed}
    assert names[("STATIONS", ("S4", "name"))] == ("Bonding", "Compression")


@pytest.mark.parametrize("pair", [("aerospace", "pharma"), ("food_beverage", "warehousing"), ("pharma", "electronics")])
def test_apply_diff_roundtrip(pair):
    a, b = (template_snapshot(t) for t in pair)
    applied = apply_diff(canonical_form(a.document.to_dict()), diff(a, b))
    assert applied == canonical_form(b.document.to_dict())


@settings(max_examples=40, deadline=None)
@given(station=st.sampled_from(["S1", "S2", "S3", "S4", "S5", "S6"]),
       fpy=st.floats(min_value=0.5, max_value=1.0, allow_nan=False))
def test_version_is_a_function_of_content(station, fpy):
    base = template_data("aerospace")
    mutated = template_data("aerospace")
    mutated["STATIONS"][station]["first_pass_yield"] = fpy
    same = canonical_form(mutated) == canonical_form(base)
    assert (version_id(mutated) == version_id(base)) == same
    # key order never matters
    reordered = dict(reversed(list(mutated.items())))
    assert version_id(reordered) == version_id(mutated)


def test_widened_document_is_valid():
    doc = parse_document(widen_stations(template_data("aerospace"), 40))
    assert len(doc["STATIONS"]) == 40
    assert doc.line_order[-1] == "S40"
