"""Parse WiFi syslog and check-in traces into annotated trajectories."""

from .activity import annotate_activity, classify_stay  # noqa: F401
from .checkin import format_checkin, parse_checkins  # noqa: F401
from .core import (  # noqa: F401
    ACTIVITY_PRECEDENCE,
    IngestError,
    IngestMetadata,
    LocationRef,
    MobilityEvent,
    Trajectory,
    TrajectoryEntry,
    TrajectoryMetadata,
    UNKNOWN_LOCATION,
)
from .io import load_events, read_trajectories, write_trajectories  # noqa: F401
from .registry import LocationRegistry  # noqa: F401
from .syslog import format_syslog_event, parse_wifi_syslog  # noqa: F401
from .trajectory import build_trajectory, group_events_by_user  # noqa: F401
