"""Storage port and its embedded sqlite implementation."""

from __future__ import annotations

import sqlite3
import threading
from abc import ABC, abstractmethod
from typing import Any, Iterable, Sequence


class StorageError(Exception):
    pass


class StoragePort(ABC):
    """SQL-capable handle. ``query_count`` counts every read query issued."""

    query_count: int

    @abstractmethod
    def execute_script(self, sql: str) -> None: ...

    @abstractmethod
    def execute(self, sql: str, params: Sequence[Any] = ()) -> int:
        """Run one write statement; returns the affected row count."""

    @abstractmethod
    def executemany(self, sql: str, rows: Iterable[Sequence[Any]]) -> None: ...

    @abstractmethod
    def query(self, sql: str, params: Sequence[Any] = ()) -> list[dict[str, Any]]: ...

    @abstractmethod
    def commit(self) -> None: ...

    def close(self) -> None:
        pass


class SqliteStore(StoragePort):
    def __init__(self, path: str = ":memory:"):
        self.path = path
        self._conn = sqlite3.connect(path, check_same_thread=False)
        self._conn.row_factory = sqlite3.Row
        self._lock = threading.Lock()
        self.query_count = 0

    def _run(self, fn, *args):
        with self._lock:
            try:
                return fn(*args)
            except sqlite3.Error as exc:
                raise StorageError(str(exc)) from exc

    def execute_script(self, sql: str) -> None:
        self._run(self._conn.executescript, sql)

    def execute(self, sql: str, params: Sequence[Any] = ()) -> int:
        return self._run(lambda: self._conn.execute(sql, tuple(params)).rowcount)

    def executemany(self, sql: str, rows: Iterable[Sequence[Any]]) -> None:
        self._run(self._conn.executemany, sql, rows)

    def query(self, sql: str, params: Sequence[Any] = ()) -> list[dict[str, Any]]:
        def go():
            self.query_count += 1
            return [dict(r) for r in self._conn.execute(sql, tuple(params)).fetchall()]
        return self._run(go)

    def commit(self) -> None:
        self._run(self._conn.commit)

    def close(self) -> None:
        self._conn.close()

    def table_names(self) -> list[str]:
        rows = self._conn.execute("SELECT name FROM sqlite_master WHERE type = 'table' ORDER BY name").fetchall()
        return [r[0] for r in rows]
