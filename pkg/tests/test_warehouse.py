import sqlite3

import pytest

from ontotwin.ontology import TEMPLATE_IDS, template_snapshot
from ontotwin.simulator import CdcRecord, run_simulation
from ontotwin.warehouse import (
    ALL_TABLES, FOREIGN_KEYS, OPERATIONAL_TABLES, OrderViolation, SchemaMismatch, SqliteStore, StorageError,
    TableKind, build_schema, ddl_script, ingest, populate, refresh_star, table_rows, write_ddl,
)


@pytest.mark.parametrize("template_id", TEMPLATE_IDS)
def test_analytics_layer_shape(template_id):
    m = build_schema(template_snapshot(template_id), SqliteStore())
    assert m.analytics_counts == {"Dimension": 14, "Fact": 8, "Bridge": 1}
    assert m.count(TableKind.OPERATIONAL) >= 40


@pytest.mark.parametrize("template_id,stations", [("aerospace", 6), ("food_beverage", 14)])
def test_station_dimension_matches_ontology(template_id, stations):
    store = SqliteStore()
    build_schema(template_snapshot(template_id), store)
    refresh_star(store)
    assert store.query("SELECT COUNT(*) AS n FROM dim_station")[0]["n"] == stations


def test_ddl_is_valid_sqlite(tmp_path):
    path = write_ddl(tmp_path / "schema.sql")
    conn = sqlite3.connect(":memory:")
    conn.executescript(path.read_text())
    names = {r[0] for r in conn.execute("SELECT name FROM sqlite_master WHERE type='table'")}
    assert names == {t.name for t in ALL_TABLES}
    assert ddl_script() == path.read_text()


def test_fact_foreign_keys_resolve(aero_wh):
    store = aero_wh.store
    assert FOREIGN_KEYS
    for (fact, col), (dim, key) in FOREIGN_KEYS.items():
        orphans = store.query(
            f"SELECT COUNT(*) AS n FROM {fact} f WHERE f.{col} IS NOT NULL "
            f"AND NOT EXISTS (SELECT 1 FROM {dim} d WHERE d.{key} = f.{col})")[0]["n"]
        assert orphans == 0, (fact, col)


def test_fact_ncr_matches_event_count(aero_log, aero_wh):
    ncrs = sum(1 for r in aero_log.event_records if r.table == "ncr" and r.op == "insert")
    assert aero_wh.star_report.table_rows["fact_ncr"] == ncrs


def test_refresh_is_idempotent(short_wh):
    first = refresh_star(short_wh.store).table_rows
    assert refresh_star(short_wh.store).table_rows == first == short_wh.star_report.table_rows


def test_empty_log_still_fills_dimensions(aero):
    wh = populate(aero, run_simulation(aero, 1, 0).records)
    rows = wh.star_report.table_rows
    assert rows["dim_station"] == 6 and rows["dim_operator"] == 46
    assert rows["fact_ncr"] == 0


def test_replay_into_fresh_store_is_identical(aero):
    log = run_simulation(aero, 5, 3)
    a, b = populate(aero, log.records), populate(aero, log.records)
    assert a.ingest_report.table_rows == b.ingest_report.table_rows
    assert a.star_report.table_rows == b.star_report.table_rows


def test_replay_into_same_store_is_rejected(aero):
    log = run_simulation(aero, 5, 1)
    wh = populate(aero, log.records)
    with pytest.raises(StorageError):
        ingest(log.records, wh.store)


def test_update_before_insert_is_an_order_violation(aero):
    store = SqliteStore()
    build_schema(aero, store)
    rec = CdcRecord("ncr", "update", "2025-04-28T06:00:00", {"ncr_id": "NCR-X", "status": "Closed"})
    with pytest.raises(OrderViolation):
        ingest([rec], store)


@pytest.mark.parametrize("rec", [
    CdcRecord("nope", "insert", "t", {"a": 1}),
    CdcRecord("ncr", "insert", "t", {"ncr_id": "X", "bogus": 1}),
    CdcRecord("ncr", "update", "t", {"status": "Closed"}),
    CdcRecord("ncr", "delete", "t", {"ncr_id": "X"}),
    CdcRecord("dim_station", "insert", "t", {"station_id": "S1"}),
])
def test_schema_mismatches(aero, rec):
    store = SqliteStore()
    build_schema(aero, store)
    with pytest.raises(SchemaMismatch):
        ingest([rec], store)


def test_every_operational_table_written_by_a_month(aero_wh):
    rows = aero_wh.ingest_report.table_rows
    empty = sorted(t for t, n in rows.items() if n == 0)
    # shocks and plan revisions only occur under disruption profiles
    assert set(empty) <= {"disruption_event", "bop_revision"}


def test_storage_counts_queries(tmp_path):
    store = SqliteStore(str(tmp_path / "w.db"))
    before = store.query_count
    store.query("SELECT 1 AS x")
    assert store.query_count == before + 1
    store.close()


def test_table_rows_helper(short_wh):
    rows = table_rows(short_wh.store, OPERATIONAL_TABLES)
    assert rows == short_wh.ingest_report.table_rows
