from typing import List, Tuple

from groupsense.types import Timestamp
from groupsense.utils import SECONDS_PER_DAY, local_seconds

from .core import (
    DINING,
    GYM,
    HOME,
    OTHER,
    TRANSITION,
    WORK,
    Trajectory,
    TrajectoryEntry,
)

TRANSITION_MAX_MINUTES = 10
WORK_HOURS = (8 * 3600, 18 * 3600)
DINING_TYPES = frozenset(["dining", "food"])
GYM_TYPES = frozenset(["recreation"])
HOME_TYPES = frozenset(["residential"])
OFFICE_TYPES = frozenset(["library", "administration", "labs", "school"])


def overlaps_work_hours(
    start: Timestamp, end: Timestamp, timezone: str = "UTC"
) -> bool:
    """Whether ``[start, end]`` overlaps 08:00-18:00 local time on any day."""
    local_start = local_seconds(start, timezone)
    local_end = local_start + (end - start)
    for day in range(local_start // SECONDS_PER_DAY, local_end // SECONDS_PER_DAY + 1):
        opens = day * SECONDS_PER_DAY + WORK_HOURS[0]
        closes = day * SECONDS_PER_DAY + WORK_HOURS[1]
        if local_start < closes and local_end > opens:
            return True
    return False


def classify_stay(
    loc_type: str,
    start: Timestamp,
    end: Timestamp,
    timezone: str = "UTC",
    work_min_minutes: int = 60,
) -> str:
    """Label a stay; rules are tried in precedence order.

    Examples
    --------
    >>> classify_stay("dining", 0, 8 * 60)
    'transition'
    >>> classify_stay("labs", 9 * 3600, 12 * 3600)
    'work'
    >>> classify_stay("residential", 0, 45 * 60)
    'home'
    """
    duration = end - start
    if duration < TRANSITION_MAX_MINUTES * 60:
        return TRANSITION
    if loc_type in DINING_TYPES:
        return DINING
    if loc_type in GYM_TYPES:
        return GYM
    if loc_type in HOME_TYPES:
        return HOME
    if (
        loc_type in OFFICE_TYPES
        and duration >= work_min_minutes * 60
        and overlaps_work_hours(start, end, timezone)
    ):
        return WORK
    return OTHER


def _stay_runs(stream: List[TrajectoryEntry]) -> List[Tuple[int, int]]:
    # Maximal runs [i, j) of contiguous entries in one vicinity
    runs = []
    i = 0
    while i < len(stream):
        j = i + 1
        if not stream[i].location.is_unknown:
            while (
                j < len(stream)
                and not stream[j].location.is_unknown
                and stream[j].start == stream[j - 1].end
                and stream[j].location.vicinity == stream[i].location.vicinity
            ):
                j += 1
        runs.append((i, j))
        i = j
    return runs


def annotate_activity(
    trajectory: Trajectory, timezone: str = "UTC", work_min_minutes: int = 60
) -> Trajectory:
    """Attach an activity label to every trajectory entry.

    A stay is a maximal run of contiguous entries of one device in one vicinity
    (a floor for WiFi, the location itself for check-ins). Each stay is labeled
    with ``classify_stay`` using its full extent, and every entry of the stay
    inherits that label; UNKN entries are labeled ``other``.

    Parameters
    ----------
    trajectory
        Trajectory with location types assigned
    timezone
        Zone used to evaluate working hours
    work_min_minutes
        Shortest office stay labeled ``work``

    Returns
    -------
    Trajectory
        The same entries, labeled
    """
    labeled: List[TrajectoryEntry] = []
    for stream in trajectory.device_streams().values():
        for i, j in _stay_runs(stream):
            first = stream[i]
            if first.location.is_unknown:
                activity = OTHER
            else:
                activity = classify_stay(
                    first.location.loc_type,
                    first.start,
                    stream[j - 1].end,
                    timezone,
                    work_min_minutes,
                )
            labeled.extend(entry._replace(activity=activity) for entry in stream[i:j])
    labeled.sort(key=lambda entry: (entry.start, entry.device_id, entry.end))
    return Trajectory(trajectory.user_id, labeled)
