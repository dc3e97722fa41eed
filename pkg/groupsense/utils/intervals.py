from typing import Iterable, List, Optional

import numpy as np

from groupsense.types import Interval, Timestamp

MINUTES_PER_DAY = 1440


def overlaps(
    a_start: Timestamp, a_end: Timestamp, b_start: Timestamp, b_end: Timestamp
) -> bool:
    """Closed-interval overlap test; touching endpoints overlap.

    Examples
    --------
    >>> overlaps(0, 10, 10, 20)
    True
    >>> overlaps(0, 10, 11, 20)
    False
    """
    return a_start <= b_end and b_start <= a_end


def clip_interval(
    start: Timestamp, end: Timestamp, lo: Timestamp, hi: Timestamp
) -> Optional[Interval]:
    """Clip ``[start, end]`` to ``[lo, hi]``, or ``None`` when they are disjoint."""
    clipped_start, clipped_end = max(start, lo), min(end, hi)
    if clipped_start > clipped_end:
        return None
    return clipped_start, clipped_end


def union_intervals(intervals: Iterable[Interval]) -> List[Interval]:
    """Union closed intervals into maximal disjoint ones; touching intervals merge.

    Examples
    --------
    >>> union_intervals([(5, 8), (0, 2), (2, 4)])
    [(0, 4), (5, 8)]
    """
    merged: List[Interval] = []
    for start, end in sorted(intervals):
        if merged and start <= merged[-1][1]:
            if end > merged[-1][1]:
                merged[-1] = (merged[-1][0], end)
        else:
            merged.append((start, end))
    return merged


def total_length(intervals: Iterable[Interval]) -> int:
    """Length of the union of ``intervals``, in seconds."""
    return sum(end - start for start, end in union_intervals(intervals))


def _minute_span(start: int, end: int) -> Interval:
    # Half-open minute range [first, last) touched by [start, end]; empty if start == end
    if end <= start:
        return start // 60, start // 60
    return start // 60, -(-end // 60)


def minute_of_day_coverage(
    intervals: Iterable[Interval], offset: int = 0
) -> np.ndarray:
    """Boolean mask over the 1440 minutes of the day touched by ``intervals``.

    Parameters
    ----------
    intervals
        Closed intervals in epoch seconds
    offset
        Seconds added before bucketing, i.e. the local UTC offset

    Returns
    -------
    np.ndarray
        A [1440] boolean array
    """
    mask = np.zeros(MINUTES_PER_DAY, dtype=bool)
    for start, end in intervals:
        first, last = _minute_span(start + offset, end + offset)
        if last - first >= MINUTES_PER_DAY:
            mask[:] = True
            break
        mask[np.arange(first, last) % MINUTES_PER_DAY] = True
    return mask


def absolute_minute_count(intervals: Iterable[Interval]) -> int:
    """Number of distinct absolute minutes touched by ``intervals``."""
    spans = union_intervals(
        _minute_span(start, end) for start, end in intervals  # type: ignore
    )
    # Minute spans are half-open, so touching spans do not share a minute
    return sum(last - first for first, last in spans)
