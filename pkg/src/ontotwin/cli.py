"""Command-line entry point.

Exit codes: 0 success, 1 validation or experiment failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional, Sequence

from .ontology import (
    COMPLEXITY_TABLE, TEMPLATE_IDS, LoadError, diff, measure, resolve_document_arg, snapshot, validate_counts,
)
from .simulator import PROFILES, EventLog, run_simulation
from .warehouse import SqliteStore, StorageError, TableKind, build_schema, ingest, refresh_star, write_ddl

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
STORE_ENV = "ONTOTWIN_STORE"


class UsageError(Exception):
    pass


@dataclass
class RunManifest:
    """Enough to rerun a command and check its outputs. Timestamps are metadata only."""

    command: str
    argv: list[str]
    template_id: Optional[str] = None
    seed: Optional[int] = None
    days: Optional[int] = None
    profile: Optional[str] = None
    inputs: dict[str, str] = field(default_factory=dict)  # name -> content hash
    outputs: dict[str, str] = field(default_factory=dict)  # path -> sha256
    started_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    finished_at: Optional[str] = None

    def add_output(self, path: str | Path) -> None:
        self.outputs[str(path)] = hashlib.sha256(Path(path).read_bytes()).hexdigest()

    def finish(self) -> "RunManifest":
        self.finished_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return self

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _snapshot_arg(arg: str):
    doc = resolve_document_arg(arg)
    return snapshot(doc, arg if arg in TEMPLATE_IDS else Path(arg).stem)


def open_store(db: Optional[str]) -> SqliteStore:
    target = db or os.environ.get(STORE_ENV) or ":memory:"
    if target.startswith("sqlite:///"):
        target = target[len("sqlite:///"):]
    elif "://" in target:
        raise UsageError(f"no storage backend installed for {target.split('://')[0]!r}; only sqlite is shipped")
    return SqliteStore(target)


def _emit(args, payload: dict[str, Any], text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    elif text:
        print(text)


def _finish(args, manifest: RunManifest, payload: dict[str, Any]) -> None:
    manifest.finish()
    payload["manifest"] = manifest.to_dict()
    path = getattr(args, "manifest", None)
    if path:
        Path(path).write_text(json.dumps(manifest.to_dict(), indent=2) + "\n", encoding="utf-8")


# commands

def cmd_validate(args, manifest: RunManifest) -> int:
    manifest.template_id = args.document
    try:
        doc = resolve_document_arg(args.document)
    except LoadError as exc:
        payload = {"ok": False, "source": exc.source if hasattr(exc, "source") else args.document,
                   "missing": exc.missing, "violations": [str(v) for v in exc.violations], "error": str(exc)}
        _finish(args, manifest, payload)
        lines = [f"INVALID {args.document}"]
        lines += [f"  missing export: {k}" for k in exc.missing]
        lines += [f"  {v}" for v in exc.violations]
        if not exc.missing and not exc.violations:
            lines.append(f"  {exc}")
        _emit(args, payload, "\n".join(lines))
        return EXIT_FAIL
    snap = snapshot(doc)
    manifest.inputs["ontology"] = snap.version_id
    counts = measure(doc)
    payload: dict[str, Any] = {"ok": True, "version": snap.version_id, "counts": asdict(counts)}
    lines = [f"OK {args.document}  version {snap.short_version}",
             "  " + ", ".join(f"{k}={v}" for k, v in asdict(counts).items())]
    if args.document in COMPLEXITY_TABLE:
        report = validate_counts(doc, COMPLEXITY_TABLE[args.document])
        payload["complexity_ok"] = report.ok
        payload["complexity_mismatches"] = {k: list(v) for k, v in report.mismatches.items()}
        lines.append("  complexity matches reference" if report.ok else f"  complexity mismatch: {report.mismatches}")
        if not report.ok:
            payload["ok"] = False
    _finish(args, manifest, payload)
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if payload["ok"] else EXIT_FAIL


def cmd_diff(args, manifest: RunManifest) -> int:
    try:
        a, b = _snapshot_arg(args.a), _snapshot_arg(args.b)
    except LoadError as exc:
        print(f"cannot load: {exc}", file=sys.stderr)
        return EXIT_FAIL
    manifest.inputs.update(a=a.version_id, b=b.version_id)
    d = diff(a, b)
    payload = d.to_dict()
    _finish(args, manifest, payload)
    lines = [f"{a.short_version} -> {b.short_version}: {len(d)} change(s)"]
    for kind in ("added", "removed", "changed"):
        for entry in getattr(d, kind):
            lines.append(f"  {kind[0].upper()} {'.'.join(map(str, (entry.export, *entry.path)))}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_simulate(args, manifest: RunManifest) -> int:
    snap = _snapshot_arg(args.template)
    manifest.template_id, manifest.seed, manifest.days, manifest.profile = args.template, args.seed, args.days, args.profile
    manifest.inputs["ontology"] = snap.version_id
    started = time.perf_counter()
    log = run_simulation(snap, args.seed, args.days, args.profile)
    elapsed = time.perf_counter() - started
    digest = log.content_hash()
    if args.out:
        log.write(args.out)
        manifest.add_output(args.out)
    payload = {"log_hash": digest, "records": len(log.records), "tables": len(log.table_counts()),
               "elapsed_s": round(elapsed, 3), "stats": log.stats.to_dict()}
    _finish(args, manifest, payload)
    if args.log_hash and not args.json:
        print(digest)
        return EXIT_OK
    st = log.stats
    text = (f"{args.template} seed={args.seed} days={args.days} profile={args.profile}: {len(log.records)} records "
            f"across {len(log.table_counts())} tables in {elapsed:.2f}s\n"
            f"  throughput {st.daily_throughput():.2f}/day, mean FPY {st.mean_station_fpy():.4f}, "
            f"NCR rate {st.ncr_rate():.4f}\n  log hash {digest}")
    _emit(args, payload, text)
    return EXIT_OK


def cmd_warehouse(args, manifest: RunManifest) -> int:
    snap = _snapshot_arg(args.template)
    manifest.template_id = args.template
    manifest.inputs["ontology"] = snap.version_id
    store = open_store(args.db)
    try:
        if args.action == "build":
            m = build_schema(snap, store)
            store.commit()
            if args.ddl:
                write_ddl(args.ddl)
                manifest.add_output(args.ddl)
            payload = m.to_dict()
            text = (f"schema for {args.template}: {m.count(TableKind.OPERATIONAL)} operational tables, "
                    f"{m.analytics_counts}")
        else:
            if args.events:
                log = EventLog.read(args.events)
                manifest.inputs["events"] = log.content_hash()
            else:
                manifest.seed, manifest.days, manifest.profile = args.seed, args.days, args.profile
                log = run_simulation(snap, args.seed, args.days, args.profile)
            if "plant" not in store.table_names():
                build_schema(snap, store)
            report = ingest(log.records, store)
            star = refresh_star(store)
            store.commit()
            payload = {"ingest": json.loads(report.to_json()), "star": asdict(star)}
            text = (f"ingested {report.records_applied} records into {report.populated_tables} tables "
                    f"({report.total_rows} rows) in {report.elapsed_s:.2f}s")
    finally:
        store.close()
    if args.db and Path(args.db).exists():
        manifest.add_output(args.db)
    _finish(args, manifest, payload)
    _emit(args, payload, text)
    return EXIT_OK


def cmd_serve(args, manifest: RunManifest) -> int:
    from .orchestrator import AuditLog
    from .toolserver import serve
    from .warehouse import populate

    snap = _snapshot_arg(args.template)
    if args.db:
        store = open_store(args.db)
    else:
        store = populate(snap, run_simulation(snap, args.seed, args.days, args.profile).records).store
    audit = AuditLog(args.audit) if args.audit else AuditLog(lambda line: print(line, file=sys.stderr))
    max_rounds = None if args.max_rounds <= 0 else args.max_rounds
    if args.transport == "stdio":
        serve(snap, store, "stdio", mode=args.mode, max_rounds=max_rounds, audit=audit)
        return EXIT_OK
    server = serve(snap, store, "tcp", port=args.port, mode=args.mode, max_rounds=max_rounds, audit=audit,
                   host=args.host)
    print(f"listening on {args.host}:{server.port} ({args.mode})", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def cmd_experiment(args, manifest: RunManifest) -> int:
    from .harness import (
        LiveChatClient, MockFabricator, OutcomeClass, build_warehouses, load_queries, run_experiment,
    )

    queries = load_queries(args.queries)
    templates = list(dict.fromkeys(q.template_id for q in queries))
    manifest.seed, manifest.days, manifest.profile = args.seed, args.days, "stable"
    manifest.inputs["queries"] = hashlib.sha256(
        json.dumps([q.to_dict() for q in queries], sort_keys=True).encode()).hexdigest()
    warehouses = build_warehouses(templates, args.seed, args.days)
    modes = ["constrained", "unconstrained"] if args.mode == "both" else [args.mode]
    reports, failed = [], False
    for mode in modes:
        if args.client == "live":
            client = LiveChatClient.from_env()
        else:
            client = MockFabricator(args.p, args.mock_seed, sampling=args.sampling)
        report = run_experiment(queries, client, mode, warehouses)
        reports.append(report)
        if report.storage_queries_on_rejected:
            failed = True
        if mode == "constrained" and report.count(OutcomeClass.FABRICATED_ID):
            failed = True
    payload = {"reports": [r.to_dict() for r in reports], "failed": failed}
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        manifest.add_output(args.out)
    _finish(args, manifest, payload)
    _emit(args, payload, "\n\n".join(r.to_text() for r in reports))
    return EXIT_FAIL if failed else EXIT_OK


def cmd_calibrate(args, manifest: RunManifest) -> int:
    from .harness import run_calibration

    seeds = list(range(args.first_seed, args.first_seed + args.seeds))
    manifest.days, manifest.profile = args.days, args.profile
    manifest.seed = args.first_seed
    report = run_calibration(args.configs, seeds, args.days, args.profile, workers=args.workers)
    payload = report.to_dict()
    if args.out:
        Path(args.out).write_text(report.to_json() + "\n", encoding="utf-8")
        manifest.add_output(args.out)
    _finish(args, manifest, payload)
    _emit(args, payload, report.to_text())
    return EXIT_OK if report.all_within else EXIT_FAIL


# parser

def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--manifest", help="write the run manifest to this path")

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--seed", type=int, default=42)
    sim.add_argument("--days", type=_positive, default=30)
    sim.add_argument("--profile", choices=sorted(PROFILES), default="stable")

    p = argparse.ArgumentParser(prog="ontotwin", description="Ontology-grounded manufacturing digital twin")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", parents=[common], help="load and check an ontology document")
    v.add_argument("document", help="template name or path to a JSON document")
    v.set_defaults(func=cmd_validate)

    d = sub.add_parser("diff", parents=[common], help="structural diff between two ontologies")
    d.add_argument("a")
    d.add_argument("b")
    d.set_defaults(func=cmd_diff)

    s = sub.add_parser("simulate", parents=[common, sim], help="run the simulator")
    s.add_argument("template")
    s.add_argument("--out", help="write the NDJSON event log here")
    s.add_argument("--log-hash", action="store_true", help="print only the event-log hash")
    s.set_defaults(func=cmd_simulate)

    w = sub.add_parser("warehouse", parents=[common, sim], help="create or load the warehouse")
    w.add_argument("action", choices=["build", "ingest"])
    w.add_argument("template")
    w.add_argument("--db", help=f"sqlite path or sqlite:/// URL (default ${STORE_ENV} or in-memory)")
    w.add_argument("--ddl", help="also write the DDL script here (build)")
    w.add_argument("--events", help="NDJSON event log to ingest; simulated inline when omitted")
    w.set_defaults(func=cmd_warehouse)

    sv = sub.add_parser("serve", parents=[common, sim], help="serve the tools over JSON-RPC")
    sv.add_argument("template")
    sv.add_argument("--transport", choices=["stdio", "tcp"], default="stdio")
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8765)
    sv.add_argument("--mode", choices=["constrained", "unconstrained"], default="constrained")
    sv.add_argument("--max-rounds", type=int, default=3, help="rounds per question; 0 disables the breaker")
    sv.add_argument("--db", help="serve an existing warehouse instead of simulating")
    sv.add_argument("--audit", help="append audit lines to this file (default stderr)")
    sv.set_defaults(func=cmd_serve)

    e = sub.add_parser("experiment", parents=[common], help="run the fabrication experiment")
    e.add_argument("--client", choices=["mock", "live"], default="mock")
    e.add_argument("--mode", choices=["constrained", "unconstrained", "both"], default="both")
    e.add_argument("--p", type=float, default=0.43, help="mock fabrication probability")
    e.add_argument("--mock-seed", type=int, default=42)
    e.add_argument("--sampling", choices=["systematic", "bernoulli"], default="systematic")
    e.add_argument("--queries", help="query set JSON (default: bundled set)")
    e.add_argument("--seed", type=int, default=42, help="simulation seed")
    e.add_argument("--days", type=_positive, default=30)
    e.add_argument("--out", help="write the JSON report here")
    e.set_defaults(func=cmd_experiment)

    c = sub.add_parser("calibrate", parents=[common], help="multi-seed KPI calibration")
    c.add_argument("--seeds", type=_positive, default=10)
    c.add_argument("--first-seed", type=int, default=42)
    c.add_argument("--days", type=_positive, default=30)
    c.add_argument("--profile", choices=sorted(PROFILES), default="stable")
    c.add_argument("--configs", nargs="+", default=["aerospace", "pharma", "automotive", "electronics"],
                   choices=list(TEMPLATE_IDS))
    c.add_argument("--workers", type=_positive, default=1)
    c.add_argument("--out", help="write the JSON report here")
    c.set_defaults(func=cmd_calibrate)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    manifest = RunManifest(args.command, argv)
    try:
        return args.func(args, manifest)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LoadError, StorageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
