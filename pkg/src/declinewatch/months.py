"""Calendar-month arithmetic on UTC month boundaries."""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterator

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")


@dataclass(frozen=True, order=True)
class Month:
    """One UTC calendar month, e.g. 2019-04."""

    year: int
    month: int

    def __post_init__(self) -> None:
        if not 1 <= self.month <= 12:
            raise ValueError(f"month out of range: {self.month}")

    @classmethod
    def parse(cls, text: str) -> "Month":
        m = _MONTH_RE.match(text.strip())
        if not m:
            raise ValueError(f"expected YYYY-MM, got {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    @classmethod
    def containing(cls, when: datetime) -> "Month":
        utc = when.astimezone(timezone.utc) if when.tzinfo else when.replace(tzinfo=timezone.utc)
        return cls(utc.year, utc.month)

    @classmethod
    def from_index(cls, index: int) -> "Month":
        year, month0 = divmod(index, 12)
        return cls(year, month0 + 1)

    @property
    def index(self) -> int:
        return self.year * 12 + self.month - 1

    @property
    def start(self) -> datetime:
        """First instant of the month (inclusive boundary)."""
        return datetime(self.year, self.month, 1, tzinfo=timezone.utc)

    @property
    def end_exclusive(self) -> datetime:
        """First instant of the following month."""
        return (self + 1).start

    def __add__(self, n: int) -> "Month":
        return Month.from_index(self.index + n)

    def __sub__(self, other):
        if isinstance(other, Month):
            return self.index - other.index
        return Month.from_index(self.index - other)

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"


def month_range(start: Month, end: Month) -> Iterator[Month]:
    """Yield every month from start through end, inclusive."""
    if end < start:
        raise ValueError(f"month range end {end} precedes start {start}")
    for index in range(start.index, end.index + 1):
        yield Month.from_index(index)


def parse_rfc3339(text: str) -> datetime:
    """Parse an RFC 3339 timestamp into an aware UTC datetime.

    Accepts a trailing 'Z', an explicit offset, or (leniently) a bare
    date / naive timestamp, which is taken as UTC.
    """
    cleaned = text.strip().replace("Z", "+00:00").replace("z", "+00:00")
    parsed = datetime.fromisoformat(cleaned)
    if parsed.tzinfo is None:
        return parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


def format_rfc3339(when: datetime) -> str:
    if when.tzinfo is None:
        when = when.replace(tzinfo=timezone.utc)
    return when.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")
