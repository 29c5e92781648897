"""Period strings -> inclusive date-key ranges."""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date
from typing import Optional

_WEEK = re.compile(r"^(\d{4})-[wW](\d{1,2})$")
_DAY = re.compile(r"^\d{4}-\d{2}-\d{2}$")

ALL = "all"


class PeriodError(ValueError):
    pass


@dataclass(frozen=True)
class Period:
    label: str
    start_key: int
    end_key: int

    @property
    def bounds(self) -> tuple[int, int]:
        return self.start_key, self.end_key


def _key(d: date) -> int:
    return d.year * 10000 + d.month * 100 + d.day


def _day(text: str) -> date:
    if not _DAY.match(text):
        raise PeriodError(f"bad date {text!r}; expected YYYY-MM-DD")
    try:
        return date.fromisoformat(text)
    except ValueError as exc:
        raise PeriodError(str(exc)) from None


def parse_period(text: Optional[str]) -> Period:
    if text is None or text == "" or text == ALL:
        return Period(ALL, 0, 99991231)
    text = text.strip()
    m = _WEEK.match(text)
    if m:
        year, week = int(m.group(1)), int(m.group(2))
        try:
            start, end = date.fromisocalendar(year, week, 1), date.fromisocalendar(year, week, 7)
        except ValueError as exc:
            raise PeriodError(str(exc)) from None
        return Period(f"{year}-w{week:02d}", _key(start), _key(end))
    if ".." in text:
        a, _, b = text.partition("..")
        start, end = _day(a.strip()), _day(b.strip())
        if end < start:
            raise PeriodError(f"period end {end} precedes start {start}")
        return Period(f"{start}..{end}", _key(start), _key(end))
    d = _day(text)
    return Period(d.isoformat(), _key(d), _key(d))
