from collections import defaultdict
from typing import DefaultDict, Hashable, Iterator, List, Sequence, Tuple

import pandas as pd

from groupsense.utils import SECONDS_PER_DAY, local_seconds

from .core import ACCEPTED, GroupSession

WEEK = "week"
HOUR = "hour"
ACTIVITY = "activity"
BUCKETINGS = (WEEK, HOUR, ACTIVITY)

_SECONDS_PER_HOUR = 3600


def _split(local_start: int, local_end: int, step: int) -> Iterator[Tuple[int, int]]:
    # Yield (slot index, seconds in slot) for [local_start, local_end)
    t = local_start
    while t < local_end:
        slot = t // step
        segment_end = min((slot + 1) * step, local_end)
        yield slot, segment_end - t
        t = segment_end


def _iso_week(day: int) -> str:
    year, week, _ = pd.Timestamp(day * SECONDS_PER_DAY, unit="s").isocalendar()
    return f"{year}-W{week:02d}"


def _buckets(
    g: GroupSession, bucketing: str, timezone: str
) -> Iterator[Tuple[Hashable, float]]:
    if bucketing == ACTIVITY:
        yield g.activity, g.duration_minutes
        return
    local_start = local_seconds(g.entry, timezone)
    local_end = local_start + (g.departure - g.entry)
    if bucketing == HOUR:
        for slot, seconds in _split(local_start, local_end, _SECONDS_PER_HOUR):
            yield slot % 24, seconds / 60.0
    else:
        for day, seconds in _split(local_start, local_end, SECONDS_PER_DAY):
            yield _iso_week(day), seconds / 60.0


def rollup_reports(
    groups: Sequence[GroupSession],
    bucketing: str = WEEK,
    timezone: str = "UTC",
    per_member: bool = False,
) -> pd.DataFrame:
    """Total minutes spent in accepted groups per bucket.

    Group intervals are split at bucket boundaries, so a group crossing midnight
    contributes to both hours (and, at a week boundary, to both weeks).

    Parameters
    ----------
    groups
        Group sessions; only accepted ones are counted
    bucketing
        ``"week"`` (ISO week of local time), ``"hour"`` (local hour of day) or
        ``"activity"``
    timezone
        Zone defining hours and weeks
    per_member
        Break totals down by group member

    Returns
    -------
    pd.DataFrame
        Columns ``bucket`` and ``minutes`` (plus ``member`` first when
        ``per_member=True``), sorted by bucket
    """
    if bucketing not in BUCKETINGS:
        raise ValueError(
            f"Unknown bucketing '{bucketing}'. Valid options: {', '.join(BUCKETINGS)}"
        )
    totals: DefaultDict[Tuple, float] = defaultdict(float)
    for g in groups:
        if g.decision != ACCEPTED:
            continue
        for bucket, minutes in _buckets(g, bucketing, timezone):
            if per_member:
                for member in g.members:
                    totals[(member, bucket)] += minutes
            else:
                totals[(bucket,)] += minutes
    columns: List[str] = ["member", "bucket"] if per_member else ["bucket"]
    rows = [(*key, minutes) for key, minutes in sorted(totals.items())]
    return pd.DataFrame(rows, columns=columns + ["minutes"])
