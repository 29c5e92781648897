"""Resolve-latency measurement used by the scaling benchmark."""

from __future__ import annotations

import gc
import random
import statistics
import time

from .contract import EntityKind, resolve, valid_ids
from .ontology import OntologySnapshot, parse_document, snapshot, template_data
from .ontology.synthetic import widen_stations


def median_resolve_ns(snap: OntologySnapshot, calls: int, seed: int = 0) -> float:
    """Median wall time of one Station resolve over ``calls`` random valid ids."""
    ids = list(valid_ids(EntityKind.STATION, snap))
    rng = random.Random(seed)
    values = [rng.choice(ids) for _ in range(calls)]
    resolve(values[0], EntityKind.STATION, snap)  # warm the index
    clock = time.perf_counter_ns
    samples = [0] * calls
    enabled = gc.isenabled()
    gc.disable()  # as timeit does; collector pauses are not resolve latency
    try:
        for i, v in enumerate(values):
            t0 = clock()
            resolve(v, EntityKind.STATION, snap)
            samples[i] = clock() - t0
    finally:
        if enabled:
            gc.enable()
    return statistics.median(samples)


def widened_snapshot(template_id: str, stations: int) -> OntologySnapshot:
    return snapshot(parse_document(widen_stations(template_data(template_id), stations)), f"{template_id}-wide")


def compare_resolve_latency(small: OntologySnapshot, wide: OntologySnapshot, calls: int = 100_000,
                            repeats: int = 3) -> tuple[float, float]:
    """(small, wide) median latency. Runs alternate and the lowest median per snapshot is kept,
    so warm-up and frequency drift do not favour whichever snapshot runs second."""
    a, b = [], []
    for r in range(repeats):
        a.append(median_resolve_ns(small, calls, seed=r))
        b.append(median_resolve_ns(wide, calls, seed=r))
    return min(a), min(b)
