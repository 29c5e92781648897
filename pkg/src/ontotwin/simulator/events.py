"""CDC records and the newline-delimited event log."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator


@dataclass(frozen=True)
class CdcRecord:
    table: str
    op: str  # insert | update
    ts: str
    payload: dict[str, Any]

    def to_json(self) -> str:
        return json.dumps(
            {"table": self.table, "op": self.op, "ts": self.ts, "payload": self.payload},
            sort_keys=True, separators=(",", ":"), ensure_ascii=False,
        )

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "CdcRecord":
        return cls(d["table"], d["op"], d["ts"], d["payload"])


@dataclass
class RunStats:
    """Counters collected while the engine runs; used by calibration."""

    operating_days: int = 0
    orders_released: int = 0
    orders_per_day: list[int] = field(default_factory=list)
    inspected: dict[str, int] = field(default_factory=dict)
    passed: dict[str, int] = field(default_factory=dict)
    ncrs: int = 0
    operations_completed: int = 0
    orders_completed: int = 0

    def station_fpy(self) -> dict[str, float]:
        return {s: self.passed.get(s, 0) / n for s, n in self.inspected.items() if n}

    def mean_station_fpy(self) -> float:
        vals = list(self.station_fpy().values())
        return sum(vals) / len(vals) if vals else float("nan")

    def daily_throughput(self) -> float:
        return self.orders_released / self.operating_days if self.operating_days else float("nan")

    def ncr_rate(self) -> float:
        total = sum(self.inspected.values())
        return self.ncrs / total if total else float("nan")

    def to_dict(self) -> dict[str, Any]:
        return {
            "operating_days": self.operating_days,
            "orders_released": self.orders_released,
            "orders_completed": self.orders_completed,
            "operations_completed": self.operations_completed,
            "ncrs": self.ncrs,
            "daily_throughput": self.daily_throughput(),
            "mean_station_fpy": self.mean_station_fpy(),
            "ncr_rate": self.ncr_rate(),
            "station_fpy": self.station_fpy(),
        }


@dataclass
class EventLog:
    records: list[CdcRecord] = field(default_factory=list)
    seed_count: int = 0
    stats: RunStats = field(default_factory=RunStats)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[CdcRecord]:
        return iter(self.records)

    @property
    def event_records(self) -> list[CdcRecord]:
        """Records after the seed-entity preamble."""
        return self.records[self.seed_count:]

    def lines(self) -> Iterable[str]:
        return (r.to_json() for r in self.records)

    def content_hash(self) -> str:
        h = hashlib.sha256()
        for line in self.lines():
            h.update(line.encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()

    def write(self, path: str | Path) -> Path:
        path = Path(path)
        with path.open("w", encoding="utf-8") as fh:
            for line in self.lines():
                fh.write(line + "\n")
        return path

    @classmethod
    def read(cls, path: str | Path) -> "EventLog":
        records = []
        with Path(path).open(encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    records.append(CdcRecord.from_dict(json.loads(line)))
        # Seed rows are stamped before the horizon; count the leading run of them.
        seed_count = 0
        if records:
            first_ts = records[0].ts
            while seed_count < len(records) and records[seed_count].ts == first_ts:
                seed_count += 1
        return cls(records, seed_count)

    def table_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for r in self.records:
            if r.op == "insert":
                counts[r.table] = counts.get(r.table, 0) + 1
        return counts
