from typing import Dict, List, NamedTuple, Optional

from groupsense.types import DeviceId, LocationKey, Timestamp, UserId

# Event kinds
ASSOCIATE = "associate"
DISASSOCIATE = "disassociate"
REASSOCIATE = "reassociate"
AUTHENTICATE = "authenticate"
DEAUTHENTICATE = "deauthenticate"
DRIFT = "drift"
CHECKIN = "checkin"

# Kinds that place a device at the event's location
OPEN_KINDS = frozenset([ASSOCIATE, REASSOCIATE, AUTHENTICATE, DRIFT, CHECKIN])
# Kinds that end the device's presence at the event's location
CLOSE_KINDS = frozenset([DISASSOCIATE, DEAUTHENTICATE])
EVENT_KINDS = OPEN_KINDS | CLOSE_KINDS

# Location types
UNKN = "UNKN"
CAMPUS_LOCATION_TYPES = (
    "administration",
    "dining",
    "health",
    "labs",
    "landmark",
    "library",
    "parking",
    "police",
    "recreation",
    "residential",
    "school",
    "student_organizations",
    "other",
)
LBSN_LOCATION_TYPES = (
    "community",
    "entertainment",
    "food",
    "nightlife",
    "outdoors",
    "shopping",
    "travel",
    "other",
)
LOCATION_TYPES = frozenset(CAMPUS_LOCATION_TYPES + LBSN_LOCATION_TYPES + (UNKN,))
LOCATION_TYPE_ALIASES = {"health center": "health", "health_center": "health"}

# Activity labels, listed in tie-break precedence order
TRANSITION = "transition"
DINING = "dining"
GYM = "gym"
HOME = "home"
WORK = "work"
OTHER = "other"
ACTIVITY_PRECEDENCE = (TRANSITION, DINING, GYM, HOME, WORK, OTHER)

# Session granularities
FLOOR = "floor"
BUILDING = "building"
CHECKIN_PERIOD = "checkin_period"
ACCESS_POINT = "access_point"


class LocationRef(NamedTuple):
    """A place a device was seen at.

    WiFi references carry the building, floor and AP parsed from the AP identifier;
    check-in references carry the location ID as ``unit`` and a latitude/longitude.
    """

    building: str
    floor: str
    unit: str
    latitude: Optional[float] = None
    longitude: Optional[float] = None
    loc_type: str = "other"

    @property
    def is_unknown(self) -> bool:
        return self.loc_type == UNKN

    @property
    def identifier(self) -> str:
        """Fully qualified unit identifier, e.g. ``LIB-2-ap14`` or a location ID."""
        if self.building:
            return f"{self.building}-{self.floor}-{self.unit}"
        return self.unit

    @property
    def vicinity(self) -> LocationKey:
        """Floor for WiFi references, the location itself for check-ins."""
        if self.building:
            return f"{self.building}-{self.floor}"
        return self.unit

    def key(self, granularity: str) -> LocationKey:
        """Location key used to compare sessions at ``granularity``.

        Examples
        --------
        >>> ref = LocationRef("LIB", "2", "ap14", loc_type="library")
        >>> ref.key("floor"), ref.key("building"), ref.key("access_point")
        ('LIB-2', 'LIB', 'LIB-2-ap14')
        """
        if granularity == FLOOR:
            return self.vicinity
        if granularity == BUILDING:
            return self.building or self.unit
        if granularity in (CHECKIN_PERIOD, ACCESS_POINT):
            return self.identifier
        raise ValueError(f"Unknown granularity: {granularity}")


UNKNOWN_LOCATION = LocationRef("", "", "", loc_type=UNKN)


class MobilityEvent(NamedTuple):
    """One parsed syslog or check-in record."""

    user_id: UserId
    device_id: DeviceId
    timestamp: Timestamp
    location: LocationRef
    event_kind: str


class TrajectoryEntry(NamedTuple):
    """A presence interval of one device at one location."""

    device_id: DeviceId
    location: LocationRef
    start: Timestamp
    end: Timestamp
    activity: str = OTHER

    @property
    def duration(self) -> int:
        return self.end - self.start


class Trajectory(NamedTuple):
    """Time-ordered entries of one user; devices are kept as parallel streams."""

    user_id: UserId
    entries: List[TrajectoryEntry]

    def device_streams(self) -> Dict[DeviceId, List[TrajectoryEntry]]:
        streams: Dict[DeviceId, List[TrajectoryEntry]] = {}
        for entry in self.entries:
            streams.setdefault(entry.device_id, []).append(entry)
        return streams


class IngestMetadata(NamedTuple):
    """Metadata about a parser call."""

    source: str
    n_lines: int
    n_rejected: int
    n_skipped: int
    # Map from device ID to the username bound to it by authentication events
    device_map: Dict[DeviceId, UserId]


class TrajectoryMetadata(NamedTuple):
    """Metadata about a trajectory build."""

    # Close events that matched no open presence
    unmatched_closes: int
    # Gaps longer than gap_max filled with an UNKN entry
    unknown_gaps: int


class IngestError(ValueError):
    """Raised when a trace file holds too many unparseable lines."""


def check_reject_ratio(
    source: str, n_lines: int, n_rejected: int, max_reject_ratio: float
) -> None:
    """Raise an ``IngestError`` if the file's rejection ratio exceeds the limit."""
    if n_lines == 0:
        return
    ratio = n_rejected / n_lines
    if ratio > max_reject_ratio:
        raise IngestError(
            f"{source}: rejected {n_rejected} of {n_lines} lines ({ratio:.1%}), "
            f"above max_reject_ratio={max_reject_ratio}"
        )
