from .build import (IngestReport, OrderViolation, SchemaManifest, SchemaMismatch, StarReport, build_schema, ingest,
                    refresh_star, table_rows, write_ddl, Warehouse, populate)
from .schema import (ALL_TABLES, BRIDGES, DIMENSIONS, EVENT_TABLES, FACTS, FOREIGN_KEYS, JOIN_HINTS,
                     OPERATIONAL_TABLES, SEED_TABLES, STAR_TABLES, TABLES_BY_NAME, Column, TableKind, TableSchema,
                     ddl_script)
from .store import SqliteStore, StorageError, StoragePort

__all__ = [
    "ALL_TABLES", "BRIDGES", "Column", "DIMENSIONS", "EVENT_TABLES", "FACTS", "FOREIGN_KEYS", "IngestReport",
    "JOIN_HINTS", "OPERATIONAL_TABLES", "OrderViolation", "SEED_TABLES", "STAR_TABLES", "SchemaManifest",
    "SchemaMismatch", "SqliteStore", "StarReport", "StorageError", "StoragePort", "TABLES_BY_NAME", "TableKind",
    "TableSchema", "Warehouse", "build_schema", "populate", "ddl_script", "ingest", "refresh_star", "table_rows", "write_ddl",
]
