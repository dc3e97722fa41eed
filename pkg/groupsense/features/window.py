from typing import Dict, Iterable, List

from groupsense.sessions import Session
from groupsense.utils import day_start, local_day

from .core import FeatureWindow


def processing_days(sessions: Iterable[Session], timezone: str = "UTC") -> List[int]:
    """Every local calendar day from the first session entry to the last departure."""
    sessions = list(sessions)
    if not sessions:
        return []
    first = min(local_day(s.entry, timezone) for s in sessions)
    last = max(local_day(max(s.entry, s.departure - 1), timezone) for s in sessions)
    return list(range(first, last + 1))


def window_for_day(
    day: int, first_day: int, last_day: int, window_days: int, timezone: str = "UTC"
) -> FeatureWindow:
    """History window used to score groups seen on ``day``.

    The window spans the ``window_days`` days ending with ``day``. While less
    history exists, it is anchored at ``first_day`` instead and covers the first
    ``window_days`` days of the data (or all of them, if fewer).

    Examples
    --------
    >>> window_for_day(10, 0, 20, 7)
    FeatureWindow(start=345600, end=950400)
    >>> window_for_day(2, 0, 20, 7)
    FeatureWindow(start=0, end=604800)
    """
    if window_days < 1:
        raise ValueError(f"window_days must be at least 1, got {window_days}")
    lo = day - window_days + 1
    if lo >= first_day:
        hi = day
    else:
        lo = first_day
        hi = min(first_day + window_days - 1, last_day)
    return FeatureWindow(day_start(lo, timezone), day_start(hi + 1, timezone))


def windows_by_day(
    days: List[int], window_days: int, timezone: str = "UTC"
) -> Dict[int, FeatureWindow]:
    """Assign a history window to every processing day."""
    if not days:
        return {}
    first_day, last_day = min(days), max(days)
    return {
        day: window_for_day(day, first_day, last_day, window_days, timezone)
        for day in days
    }
