import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ontotwin.contract import AnnotatedResult, EntityKind, ResolutionError, valid_ids
from ontotwin.ontology import TEMPLATE_IDS, template_snapshot
from ontotwin.tools import (
    TOOL_SPECS, TOOLS_BY_NAME, ConstraintMode, DomainGroup, EmptyResult, PeriodError, ToolError, invoke,
    parse_period, project_schemas, result_entity_ids, schemas_json,
)

FIELD_KINDS = {
    "station": EntityKind.STATION, "station_id": EntityKind.STATION, "failure_code": EntityKind.FAILURE_CODE,
    "disposition": EntityKind.NCR_DISPOSITION, "material_id": EntityKind.RAW_MATERIAL,
    "supplier": EntityKind.SUPPLIER, "supplier_id": EntityKind.SUPPLIER, "product_id": EntityKind.PRODUCT,
    "equipment_id": EntityKind.EQUIPMENT,
}

DEFAULT_ARGS = {
    "cycle_time": {"station_id": "S4"}, "first_pass_yield": {"station_id": "S4"},
    "oee_decomposition": {"station_id": "S4"}, "ncr_pareto": {}, "spc_violation": {"station_id": "S4"},
    "quality_action": {}, "material_genealogy": {}, "supplier_performance": {"supplier_id": "SUP-AER-01"},
    "change_impact": {}, "change_velocity": {}, "equipment_downtime": {}, "production_status": {},
}


def test_twelve_tools_in_five_groups():
    assert len(TOOL_SPECS) == 12
    assert {t.domain_group for t in TOOL_SPECS} == set(DomainGroup)
    assert set(DEFAULT_ARGS) == set(TOOLS_BY_NAME)


@pytest.mark.parametrize("template_id", TEMPLATE_IDS)
def test_constrained_schemas_carry_enums(template_id):
    snap = template_snapshot(template_id)
    for spec in project_schemas(snap, "constrained"):
        props = spec.to_wire()["inputSchema"]["properties"]
        for p in spec.params:
            if p.entity_kind is not None:
                assert props[p.name]["enum"] == list(valid_ids(p.entity_kind, snap))
            else:
                assert "enum" not in props[p.name]


def test_unconstrained_schemas_are_free_strings(aero):
    for spec in project_schemas(aero, ConstraintMode.UNCONSTRAINED):
        for prop in spec.to_wire()["inputSchema"]["properties"].values():
            assert prop["type"] == "string" and "enum" not in prop


def test_only_enums_differ_between_modes(aero):
    def strip(specs):
        wire = [s.to_wire() for s in specs]
        for w in wire:
            for prop in w["inputSchema"]["properties"].values():
                prop.pop("enum", None)
        return wire

    assert strip(project_schemas(aero, "constrained")) == strip(project_schemas(aero, "unconstrained"))
    assert schemas_json(project_schemas(aero, "constrained")) == schemas_json(project_schemas(aero, "constrained"))


def test_s4_cycle_time_within_configured_range(aero, aero_wh):
    out = invoke("cycle_time", {"station_id": "S4"}, aero, aero_wh.store)
    assert isinstance(out, AnnotatedResult)
    r = out.result.to_dict()
    lo, hi = aero.document.stations["S4"].cycle_time_range_min
    v = aero.document["CYCLE_TIME_VARIANCE"]
    assert lo <= r["value"] <= hi
    assert lo * (1 - v) - 1 <= r["min"] and r["max"] <= hi * (1 + v) + 1
    assert out.context.name == "Bonding"


def test_ncr_pareto_is_sorted(aero, aero_wh):
    r = invoke("ncr_pareto", {}, aero, aero_wh.store).result
    counts = [b["count"] for b in r.breakdown]
    assert counts == sorted(counts, reverse=True)
    assert r.breakdown[-1]["cumulative_share"] == 1.0
    assert sum(counts) == r.value


def test_ncr_pareto_failure_code_scoped_to_station(aero, aero_wh):
    out = invoke("ncr_pareto", {"station_id": "S4", "failure_code": "AER-S1-01"}, aero, aero_wh.store)
    assert isinstance(out, ResolutionError)
    assert out.valid_set == ("AER-S4-01", "AER-S4-02", "AER-S4-03", "AER-S4-04")


def test_future_week_is_empty_not_an_error(aero, aero_wh):
    out = invoke("cycle_time", {"station_id": "S4", "period": "2026-w01"}, aero, aero_wh.store)
    assert isinstance(out, AnnotatedResult)
    assert isinstance(out.result, EmptyResult)
    d = out.result.to_dict()
    assert d["empty"] is True and d["rows"] == 0


def test_line_level_status_has_no_context(aero, aero_wh):
    out = invoke("production_status", {}, aero, aero_wh.store)
    assert isinstance(out, AnnotatedResult) and out.context is None
    assert out.result.value > 0


@pytest.mark.parametrize("tool", sorted(DEFAULT_ARGS))
def test_results_only_mention_known_ids(aero, aero_wh, tool):
    out = invoke(tool, DEFAULT_ARGS[tool], aero, aero_wh.store)
    assert isinstance(out, AnnotatedResult), out
    assert out.snapshot_version == aero.version_id
    for fld, ids in result_entity_ids(out.result).items():
        assert ids <= set(valid_ids(FIELD_KINDS[fld], aero)), fld


@pytest.mark.parametrize("args,code", [
    ({}, "invalid_arguments"),
    ({"station_id": "S4", "bogus": "x"}, "invalid_arguments"),
    ({"station_id": 4}, "invalid_arguments"),
    ({"station_id": "S4", "period": "last week"}, "invalid_arguments"),
])
def test_bad_arguments_are_tool_errors(aero, short_wh, args, code):
    out = invoke("cycle_time", args, aero, short_wh.store)
    assert isinstance(out, ToolError) and out.code == code


def test_unknown_tool(aero, short_wh):
    assert invoke("no_such_tool", {}, aero, short_wh.store).code == "unknown_tool"


def test_rejection_never_touches_storage(aero, short_wh):
    before = short_wh.store.query_count
    out = invoke("first_pass_yield", {"station_id": "BOND-1"}, aero, short_wh.store)
    assert isinstance(out, ResolutionError)
    assert short_wh.store.query_count == before


def test_period_forms():
    assert parse_period(None).label == "all"
    w = parse_period("2025-w18")
    assert w.bounds == (20250428, 20250504)
    assert parse_period("2025-05-01..2025-05-03").bounds == (20250501, 20250503)
    assert parse_period("2025-05-01").bounds == (20250501, 20250501)
    for bad in ("2025-05-03..2025-05-01", "2025-w60", "May", "2025-13-01"):
        with pytest.raises(PeriodError):
            parse_period(bad)


@settings(max_examples=100, deadline=None)
@given(text=st.text(max_size=25))
def test_period_parser_is_total(text):
    try:
        p = parse_period(text)
    except PeriodError:
        return
    assert p.start_key <= p.end_key
