"""Arrival-data ingestion: CSV parsing, per-day instance extraction, bucketing.

Timestamps are truncated to one-minute resolution; the minute index within a
day starts at 1.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import date, datetime
from typing import Dict, Iterable, List, TextIO, Tuple, Union

from .schedule import Direction

CSV_HEADER = ("timestamp", "direction")


class MalformedRowError(ValueError):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class NoArrivalsError(ValueError):
    """No arrivals exist for the requested day and direction."""


@dataclass(frozen=True)
class ArrivalRecord:
    timestamp: datetime  # truncated to the minute
    direction: Direction

    @property
    def day(self) -> date:
        return self.timestamp.date()

    @property
    def minute_of_day(self) -> int:
        """1-based minute index within the record's day."""
        return self.timestamp.hour * 60 + self.timestamp.minute + 1


@dataclass(frozen=True)
class ArrivalDataset:
    records: Tuple[ArrivalRecord, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(sorted(self.records, key=lambda r: r.timestamp)))

    def days(self) -> List[date]:
        return sorted({r.day for r in self.records})

    def minutes_for(self, day: date, direction: Direction) -> List[int]:
        """Sorted 1-based arrival minutes for one day and direction."""
        return [r.minute_of_day for r in self.records if r.day == day and r.direction is direction]


@dataclass(frozen=True)
class MatchingInstance:
    """Arrivals of one day/direction, horizon ending at the last arrival."""

    arrival_minutes: Tuple[int, ...]
    T: int
    n: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "arrival_minutes", tuple(self.arrival_minutes))
        if self.n != len(self.arrival_minutes):
            raise ValueError(f"n={self.n} does not match {len(self.arrival_minutes)} arrivals")
        if self.n < 1:
            raise ValueError("instance must contain at least one arrival")
        if any(not 1 <= t <= self.T for t in self.arrival_minutes):
            raise ValueError("arrival minutes must lie in [1, T]")
        if list(self.arrival_minutes) != sorted(self.arrival_minutes):
            raise ValueError("arrival minutes must be sorted")


def parse_arrivals(source: Union[TextIO, Iterable[str]]) -> ArrivalDataset:
    """Parse the `timestamp,direction` CSV format into a sorted dataset."""
    reader = csv.reader(source)
    records = []
    for line_number, row in enumerate(reader, start=1):
        if not row:
            continue
        if line_number == 1:
            if tuple(cell.strip() for cell in row) != CSV_HEADER:
                raise MalformedRowError(line_number, f"expected header {','.join(CSV_HEADER)}")
            continue
        if len(row) != 2:
            raise MalformedRowError(line_number, f"expected 2 fields, got {len(row)}")
        raw_ts, raw_dir = row[0].strip(), row[1].strip()
        try:
            ts = datetime.fromisoformat(raw_ts)
        except ValueError as exc:
            raise MalformedRowError(line_number, f"bad timestamp {raw_ts!r}: {exc}") from None
        try:
            direction = Direction(raw_dir)
        except ValueError:
            raise MalformedRowError(line_number, f"unknown direction token {raw_dir!r}") from None
        records.append(ArrivalRecord(ts.replace(second=0, microsecond=0, tzinfo=None), direction))
    return ArrivalDataset(tuple(records))


def serialize_arrivals(dataset: ArrivalDataset) -> str:
    """Inverse of parse_arrivals (LF line endings)."""
    lines = [",".join(CSV_HEADER)]
    for r in dataset.records:
        lines.append(f"{r.timestamp.isoformat()},{r.direction.value}")
    return "\n".join(lines) + "\n"


def extract_instance(dataset: ArrivalDataset, day: date, direction: Direction, n: int) -> MatchingInstance:
    """First min(n, available) arrivals of the day/direction; T = last one."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    minutes = dataset.minutes_for(day, direction)
    if not minutes:
        raise NoArrivalsError(f"no {direction.value} arrivals on {day.isoformat()}")
    selected = minutes[: min(n, len(minutes))]
    return MatchingInstance(arrival_minutes=tuple(selected), T=selected[-1], n=len(selected))


def bucket_to_periods(
    dataset: ArrivalDataset, day: date, period_minutes: int, horizon_periods: int
) -> List[Tuple[int, int]]:
    """Per-period (downstream, upstream) arrival counts for one day.

    Minute m maps to period ceil(m / period_minutes); arrivals past the
    horizon are dropped.
    """
    if period_minutes < 1:
        raise ValueError(f"period_minutes must be >= 1, got {period_minutes}")
    if horizon_periods < 1:
        raise ValueError(f"horizon_periods must be >= 1, got {horizon_periods}")
    counts = [[0, 0] for _ in range(horizon_periods)]
    for direction in (Direction.DOWN, Direction.UP):
        idx = 0 if direction is Direction.DOWN else 1
        for m in dataset.minutes_for(day, direction):
            period = -(-m // period_minutes)
            if period <= horizon_periods:
                counts[period - 1][idx] += 1
    return [(d, u) for d, u in counts]
