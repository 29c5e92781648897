"""Multi-seed calibration of simulated KPIs against configured targets."""

from __future__ import annotations

import json
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable, Optional, Sequence

from scipy import stats

from ..ontology import template_snapshot
from ..simulator import run_simulation

CALIBRATION_CONFIGS = ("aerospace", "pharma", "automotive", "electronics")
CALIBRATION_SEEDS = tuple(range(42, 52))
THROUGHPUT_TOLERANCE = 0.05  # relative
NCR_TOLERANCE = 0.01  # absolute


def t_interval(values: Sequence[float], confidence: float = 0.95) -> tuple[float, float, Optional[float]]:
    """(mean, sample sd, half-width). Half-width is None below two samples."""
    n = len(values)
    if n == 0:
        raise ValueError("no samples")
    mean = statistics.fmean(values)
    if n < 2:
        return mean, float("nan"), None
    sd = statistics.stdev(values)
    q = stats.t.ppf(0.5 + confidence / 2.0, n - 1)
    return mean, sd, float(q * sd / math.sqrt(n))


@dataclass(frozen=True)
class KpiStats:
    config: str
    kpi: str
    target: float
    band: tuple[float, float]
    samples: tuple[float, ...]
    mean: float
    sd: float
    half_width: Optional[float]

    @property
    def n(self) -> int:
        return len(self.samples)

    @property
    def insufficient(self) -> bool:
        return self.half_width is None

    @property
    def ci(self) -> Optional[tuple[float, float]]:
        if self.half_width is None:
            return None
        return self.mean - self.half_width, self.mean + self.half_width

    @property
    def within(self) -> bool:
        return self.band[0] <= self.mean <= self.band[1]

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out.update(n=self.n, ci=self.ci, insufficient=self.insufficient, within=self.within)
        if math.isnan(self.sd):
            out["sd"] = None
        return out


@dataclass
class CalibrationReport:
    days: int
    profile: str
    seeds: tuple[int, ...]
    rows: list[KpiStats] = field(default_factory=list)

    def get(self, config: str, kpi: str) -> KpiStats:
        for r in self.rows:
            if r.config == config and r.kpi == kpi:
                return r
        raise KeyError((config, kpi))

    @property
    def all_within(self) -> bool:
        return all(r.within for r in self.rows)

    def to_dict(self) -> dict[str, Any]:
        return {"days": self.days, "profile": self.profile, "seeds": list(self.seeds),
                "rows": [r.to_dict() for r in self.rows], "all_within": self.all_within}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        n = len(self.seeds)
        lines = [f"Calibration: {n} seed(s) x {self.days} days, {self.profile} profile, 95% t-interval",
                 f"{'Config':<13}{'KPI':<12}{'Target':>9}{'Band':>17}{'Mean':>10}{'SD':>9}{'95% CI':>21}  OK"]
        for r in self.rows:
            ci = "insufficient n" if r.ci is None else f"[{r.ci[0]:.4f}, {r.ci[1]:.4f}]"
            sd = "-" if math.isnan(r.sd) else f"{r.sd:.4f}"
            band = f"[{r.band[0]:.3f}, {r.band[1]:.3f}]"
            lines.append(f"{r.config:<13}{r.kpi:<12}{r.target:>9.4f}{band:>17}{r.mean:>10.4f}{sd:>9}{ci:>21}  "
                         f"{'yes' if r.within else 'NO'}")
        return "\n".join(lines)


def kpi_targets(config: str) -> dict[str, tuple[float, tuple[float, float]]]:
    """kpi -> (target, acceptance band)."""
    doc = template_snapshot(config).document
    fpy_target = statistics.fmean(s.first_pass_yield for s in doc.stations.values())
    lo, hi = doc["FIRST_PASS_YIELD_RANGE"]
    tp = doc.daily_throughput_target()
    ncr = 1.0 - fpy_target
    return {
        "fpy": (fpy_target, (float(lo), float(hi))),
        "throughput": (tp, (tp * (1 - THROUGHPUT_TOLERANCE), tp * (1 + THROUGHPUT_TOLERANCE))),
        "ncr_rate": (ncr, (ncr - NCR_TOLERANCE, ncr + NCR_TOLERANCE)),
    }


def _one_run(args: tuple[str, int, int, str]) -> tuple[str, int, dict[str, float]]:
    config, seed, days, profile = args
    st = run_simulation(template_snapshot(config), seed, days, profile).stats
    return config, seed, {"fpy": st.mean_station_fpy(), "throughput": st.daily_throughput(), "ncr_rate": st.ncr_rate()}


def run_calibration(configs: Iterable[str] = CALIBRATION_CONFIGS, seeds: Iterable[int] = CALIBRATION_SEEDS,
                    days: int = 30, profile: str = "stable", workers: int = 1) -> CalibrationReport:
    configs, seeds = tuple(configs), tuple(seeds)
    jobs = [(c, s, days, profile) for c in configs for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_one_run, jobs))
    else:
        results = [_one_run(j) for j in jobs]
    report = CalibrationReport(days, profile, seeds)
    for config in configs:
        per_seed = [kpis for c, _, kpis in results if c == config]
        for kpi, (target, band) in kpi_targets(config).items():
            samples = tuple(k[kpi] for k in per_seed)
            mean, sd, hw = t_interval(samples)
            report.rows.append(KpiStats(config, kpi, target, band, samples, mean, sd, hw))
    return report
