"""Time, interval and configuration helpers shared across groupsense."""

from .core import (  # noqa: F401
    SECONDS_PER_DAY,
    SECONDS_PER_MINUTE,
    day_start,
    from_iso,
    join_set,
    local_day,
    local_intervals,
    local_seconds,
    modal_label,
    parse_timestamps,
    split_set,
    to_iso,
    utc_offset,
)
from .intervals import (  # noqa: F401
    absolute_minute_count,
    clip_interval,
    minute_of_day_coverage,
    overlaps,
    total_length,
    union_intervals,
)
