"""Factory calendar: shifts, breaks and PM windows resolved to per-minute flags."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta

from ..ontology import OntologyDocument
from ..ontology.document import WEEKDAYS

# Monday; chosen so the horizon starts on a week boundary.
SIM_START = datetime(2025, 4, 28)
MINUTES_PER_DAY = 1440


def hhmm(text: str) -> int:
    h, m = text.split(":")
    return int(h) * 60 + int(m)


@dataclass(frozen=True)
class ShiftInstance:
    shift_id: str
    day: int  # day index the shift starts on
    start: int  # absolute minute
    end: int


@dataclass(frozen=True)
class SimClock:
    """Simulated time in whole minutes from the horizon start."""

    current: int = 0
    tick_resolution: int = 1
    origin: datetime = SIM_START

    def advance(self) -> "SimClock":
        return SimClock(self.current + self.tick_resolution, self.tick_resolution, self.origin)

    def timestamp(self) -> datetime:
        return self.origin + timedelta(minutes=self.current)


class FactoryCalendar:
    """Per-minute productive flags over [0, days * 1440).

    A minute is productive iff it lies inside a shift that starts on an
    operating day and is outside that shift's break and any PM window.
    """

    def __init__(self, doc: OntologyDocument, days: int, origin: datetime = SIM_START):
        self.origin = origin
        self.days = days
        self.total = days * MINUTES_PER_DAY
        self.operating_weekdays = frozenset(WEEKDAYS.index(d) for d in doc["OPERATING_DAYS"])
        self.shift_ids = tuple(doc["SHIFTS"])
        break_len = int(doc["BREAK_DURATION_MIN"])
        pm_len = int(round(float(doc["WEEKLY_PM_HOURS"]) * 60))

        self.productive = bytearray(self.total)
        self.shift_at = bytearray(self.total)  # 0 = off shift, i+1 = shift_ids[i]
        self.shifts: list[ShiftInstance] = []
        self.breaks: list[tuple[int, int]] = []
        self.pm_windows: list[tuple[int, int]] = []

        first_shift = min(self.shift_ids, key=lambda s: hhmm(doc["SHIFTS"][s]["start"]))
        pm_days = self._pm_days()

        for day in range(-1, days):
            if not self.is_operating_day(day):
                continue
            for i, sid in enumerate(self.shift_ids):
                rec = doc["SHIFTS"][sid]
                start = day * MINUTES_PER_DAY + hhmm(rec["start"])
                end = day * MINUTES_PER_DAY + hhmm(rec["end"])
                if end <= start:
                    end += MINUTES_PER_DAY
                mid = (start + end) // 2
                brk = (mid - break_len // 2, mid - break_len // 2 + break_len)
                pm = None
                if sid == first_shift and day in pm_days:
                    pm = (start, min(end, start + pm_len))
                    self.pm_windows.append(pm)
                if end > 0 and start < self.total:
                    self.shifts.append(ShiftInstance(sid, day, start, end))
                    self.breaks.append(brk)
                for m in range(max(start, 0), min(end, self.total)):
                    self.shift_at[m] = i + 1
                    if brk[0] <= m < brk[1] or (pm and pm[0] <= m < pm[1]):
                        continue
                    self.productive[m] = 1

        self.order_ticks = self._order_ticks(doc, first_shift)

    def weekday(self, day: int) -> int:
        return (self.origin + timedelta(days=day)).weekday()

    def is_operating_day(self, day: int) -> bool:
        return self.weekday(day) in self.operating_weekdays

    def operating_days(self) -> list[int]:
        return [d for d in range(self.days) if self.is_operating_day(d)]

    def _pm_days(self) -> set[int]:
        # First operating day of every calendar week touched by the horizon.
        out, seen = set(), set()
        for day in range(self.days):
            week = (self.origin + timedelta(days=day)).isocalendar()[:2]
            if week not in seen and self.is_operating_day(day):
                seen.add(week)
                out.add(day)
        return out

    def _order_ticks(self, doc, first_shift: str) -> dict[int, int]:
        """First productive minute of each operating day, counted from its first shift."""
        out = {}
        offset = hhmm(doc["SHIFTS"][first_shift]["start"])
        for day in self.operating_days():
            m = day * MINUTES_PER_DAY + offset
            stop = min(self.total, (day + 1) * MINUTES_PER_DAY + offset)
            while m < stop and not self.productive[m]:
                m += 1
            if m < stop:
                out[day] = m
        return out

    def shift_id_at(self, minute: int) -> str | None:
        i = self.shift_at[minute]
        return self.shift_ids[i - 1] if i else None

    def is_productive(self, minute: int) -> bool:
        return 0 <= minute < self.total and bool(self.productive[minute])

    def next_productive(self, minute: int) -> int | None:
        """First productive minute >= ``minute``; None past the horizon."""
        p = self.productive.find(1, max(minute, 0))
        return None if p < 0 else p

    def productive_minutes(self) -> int:
        return self.productive.count(1)
