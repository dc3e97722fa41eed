import time
from collections import Counter
from functools import lru_cache
from typing import FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple, TypeVar

import pandas as pd

from groupsense.types import Timestamp

ISO_FORMAT = "%Y-%m-%dT%H:%M:%SZ"
SECONDS_PER_MINUTE = 60
SECONDS_PER_HOUR = 3600
SECONDS_PER_DAY = 86400

_UTC_NAMES = frozenset(["UTC", "utc", "Etc/UTC", "GMT"])
_EPOCH = pd.Timestamp(0, tz="UTC")

T = TypeVar("T", bound=Hashable)


def to_iso(ts: Timestamp) -> str:
    """Format epoch seconds as an ISO-8601 UTC string.

    Examples
    --------
    >>> to_iso(0)
    '1970-01-01T00:00:00Z'
    """
    return time.strftime(ISO_FORMAT, time.gmtime(ts))


def from_iso(value: str) -> Timestamp:
    """Parse an ISO-8601 string into epoch seconds (naive values are read as UTC).

    Examples
    --------
    >>> from_iso("1970-01-02T00:00:00Z")
    86400
    """
    stamp = pd.Timestamp(value)
    if stamp.tzinfo is None:
        stamp = stamp.tz_localize("UTC")
    return int((stamp - _EPOCH) // pd.Timedelta(seconds=1))


def parse_timestamps(values: pd.Series, fmt: Optional[str] = None) -> pd.Series:
    """Vectorized timestamp parsing into float epoch seconds.

    Unparseable values come back as ``NaN`` so callers can reject them row by row.
    """
    parsed = pd.to_datetime(values, format=fmt, errors="coerce", utc=True)
    seconds = (parsed - _EPOCH) // pd.Timedelta(seconds=1)
    return seconds.astype("float64")


@lru_cache(maxsize=65536)
def _utc_offset_for_hour(hour: int, timezone: str) -> int:
    stamp = pd.Timestamp(hour * SECONDS_PER_HOUR, unit="s", tz="UTC")
    return int(stamp.tz_convert(timezone).utcoffset().total_seconds())


def utc_offset(ts: Timestamp, timezone: str = "UTC") -> int:
    """Offset of ``timezone`` from UTC at ``ts``, in seconds."""
    if timezone in _UTC_NAMES:
        return 0
    return _utc_offset_for_hour(int(ts) // SECONDS_PER_HOUR, timezone)


def local_intervals(
    intervals: Iterable[Tuple[Timestamp, Timestamp]], timezone: str = "UTC"
) -> List[Tuple[int, int]]:
    """Shift intervals to local wall-clock seconds.

    Intervals crossing a change of UTC offset are split at the change, so every
    piece is shifted by the offset in force during it.

    Examples
    --------
    >>> local_intervals([(0, 3600)], "Etc/GMT+6")
    [(-21600, -18000)]
    """
    local = []
    for start, end in intervals:
        start, end = int(start), int(end)
        offset = utc_offset(start, timezone)
        while utc_offset(end, timezone) != offset:
            hour = start // SECONDS_PER_HOUR + 1
            while utc_offset(hour * SECONDS_PER_HOUR, timezone) == offset:
                hour += 1
            switch = hour * SECONDS_PER_HOUR
            local.append((start + offset, switch + offset))
            start, offset = switch, utc_offset(switch, timezone)
        local.append((start + offset, end + offset))
    return local


def local_seconds(ts: Timestamp, timezone: str = "UTC") -> int:
    return int(ts) + utc_offset(ts, timezone)


def local_day(ts: Timestamp, timezone: str = "UTC") -> int:
    """Local calendar day of ``ts``, counted in days since 1970-01-01."""
    return local_seconds(ts, timezone) // SECONDS_PER_DAY


def day_start(day: int, timezone: str = "UTC") -> Timestamp:
    """Epoch seconds of local midnight opening ``day``."""
    naive = day * SECONDS_PER_DAY
    guess = naive - utc_offset(naive, timezone)
    return naive - utc_offset(guess, timezone)


def modal_label(labels: Iterable[T], order: Optional[Sequence[T]] = None) -> T:
    """Most frequent label, ties broken by ``order`` (else lexicographically).

    Parameters
    ----------
    labels
        Non-empty collection of labels
    order
        Precedence order used to break ties; labels missing from it rank last

    Returns
    -------
    Hashable
        The modal label

    Raises
    ------
    ValueError
        If ``labels`` is empty

    Examples
    --------
    >>> modal_label(["work", "dining", "work"])
    'work'
    >>> modal_label(["work", "dining"])
    'dining'
    >>> modal_label(["work", "dining"], order=["work", "dining"])
    'work'
    """
    counts = Counter(labels)
    if not counts:
        raise ValueError("Cannot take the mode of an empty label collection.")
    top = max(counts.values())
    tied = [label for label, count in counts.items() if count == top]
    if order is None:
        return min(tied)  # type: ignore
    rank = {label: i for i, label in enumerate(order)}
    return min(tied, key=lambda label: (rank.get(label, len(rank)), str(label)))


def join_set(values: Iterable[str]) -> str:
    """Serialize a set of identifiers as a sorted, semicolon-joined string.

    Examples
    --------
    >>> join_set({"b", "a"})
    'a;b'
    """
    return ";".join(sorted(values))


def split_set(value: str) -> FrozenSet[str]:
    """Inverse of ``join_set``."""
    return frozenset(value.split(";")) if value else frozenset()
