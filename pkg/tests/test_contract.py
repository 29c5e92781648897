import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ontotwin.contract import (
    AnnotatedResult, EntityKind, NodeRef, ResolutionError, VersionMismatch, annotate, contextualize,
    natural_key, resolve, valid_ids,
)
from ontotwin.ontology import TEMPLATE_IDS, template_snapshot
from ontotwin.ontology.synthetic import widen_stations
from ontotwin.ontology import parse_document, snapshot, template_data

STATIONS = ["S1", "S2", "S3", "S4", "S5", "S6"]


def test_known_station_resolves(aero):
    ref = resolve("S4", EntityKind.STATION, aero)
    assert ref == NodeRef(EntityKind.STATION, "S4", aero.version_id)


def test_fabricated_station_is_rejected_with_valid_set(aero):
    err = resolve("BOND-1", EntityKind.STATION, aero)
    assert isinstance(err, ResolutionError)
    assert err.to_wire() == {"error": "invalid_parameter", "kind": "Station", "rejected": "BOND-1", "valid": STATIONS}
    assert "BOND-1" in err.message() and "S1, S2" in err.message()


@pytest.mark.parametrize("value", ["", "s4", " S4", "S4 ", "S04", None, 4, ["S4"]])
def test_only_exact_ids_resolve(aero, value):
    assert isinstance(resolve(value, EntityKind.STATION, aero), ResolutionError)


def test_failure_codes_scoped_by_station(aero):
    assert isinstance(resolve("AER-S4-02", EntityKind.FAILURE_CODE, aero, station="S4"), NodeRef)
    err = resolve("AER-S1-01", EntityKind.FAILURE_CODE, aero, station="S4")
    assert isinstance(err, ResolutionError)
    assert err.valid_set == ("AER-S4-01", "AER-S4-02", "AER-S4-03", "AER-S4-04")
    assert isinstance(resolve("AER-S1-01", EntityKind.FAILURE_CODE, aero), NodeRef)


def test_valid_set_is_naturally_sorted():
    snap = snapshot(parse_document(widen_stations(template_data("aerospace"), 12)))
    assert valid_ids(EntityKind.STATION, snap)[-3:] == ("S10", "S11", "S12")
    assert sorted(["S10", "S2", "S1"], key=natural_key) == ["S1", "S2", "S10"]


@pytest.mark.parametrize("template_id", TEMPLATE_IDS)
@pytest.mark.parametrize("kind", list(EntityKind))
def test_every_listed_id_resolves(template_id, kind):
    snap = template_snapshot(template_id)
    for ident in valid_ids(kind, snap):
        assert isinstance(resolve(ident, kind, snap), NodeRef)


@settings(max_examples=200, deadline=None)
@given(value=st.one_of(st.text(max_size=12), st.integers(), st.none()),
       kind=st.sampled_from(list(EntityKind)))
def test_resolve_is_total_and_exact(value, kind):
    snap = template_snapshot("aerospace")
    out = resolve(value, kind, snap)
    assert isinstance(out, (NodeRef, ResolutionError))
    assert isinstance(out, NodeRef) == (value in valid_ids(kind, snap))


def test_aerospace_bonding_context(aero):
    ctx = contextualize(resolve("S4", EntityKind.STATION, aero), aero)
    assert ctx.name == "Bonding"
    assert ctx.applicable_failure_codes == ("AER-S4-01", "AER-S4-02", "AER-S4-03", "AER-S4-04")
    assert "NADCAP" in ctx.regulatory_standards
    assert ctx.upstream.id == "S3" and ctx.downstream.id == "S5"
    assert ctx.required_certifications == ("CERT-AER-BOND",)
    assert ctx.process_parameters["cycle_time_range_min"] == [90, 240]


def test_same_id_different_meaning_across_templates():
    pharma = template_snapshot("pharma")
    ctx = contextualize(resolve("S4", EntityKind.STATION, pharma), pharma)
    assert ctx.name == "Compression"
    assert "GMP" in ctx.regulatory_standards
    assert all(c.startswith("PHM-S4-") for c in ctx.applicable_failure_codes)


def test_line_ends_have_no_neighbour(aero):
    assert contextualize(resolve("S1", EntityKind.STATION, aero), aero).upstream is None
    assert contextualize(resolve("S6", EntityKind.STATION, aero), aero).downstream is None


@pytest.mark.parametrize("kind", list(EntityKind))
def test_every_kind_contextualizes(aero, kind):
    ident = valid_ids(kind, aero)[0]
    ctx = contextualize(resolve(ident, kind, aero), aero)
    assert ctx.node.id == ident
    # skills live only in operational tables
    assert bool(ctx.join_hints) == (kind is not EntityKind.SKILL)


def test_contextualize_rejects_foreign_ref(aero):
    pharma = template_snapshot("pharma")
    with pytest.raises(VersionMismatch):
        contextualize(resolve("S4", EntityKind.STATION, pharma), aero)


def test_annotate_stamps_version(aero):
    ctx = contextualize(resolve("S2", EntityKind.STATION, aero), aero)
    out = annotate({"value": 1}, ctx, aero)
    assert isinstance(out, AnnotatedResult)
    d = out.to_dict()
    assert set(d) == {"result", "context", "snapshot_version", "produced_at"}
    assert d["snapshot_version"] == aero.version_id
    assert annotate([], None, aero).context is None


def test_annotate_rejects_cross_snapshot_context(aero):
    pharma = template_snapshot("pharma")
    ctx = contextualize(resolve("S4", EntityKind.STATION, pharma), pharma)
    with pytest.raises(VersionMismatch):
        annotate({}, ctx, aero)
