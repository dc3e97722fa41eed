from typing import FrozenSet, List, NamedTuple

from groupsense.ingest.core import (
    ACCESS_POINT,
    ACTIVITY_PRECEDENCE,
    BUILDING,
    CHECKIN_PERIOD,
    FLOOR,
    Trajectory,
    TrajectoryEntry,
)
from groupsense.types import DeviceId, LocationKey, Timestamp, UserId
from groupsense.utils import modal_label


class Session(NamedTuple):
    """An extended stay of one device in one vicinity.

    ``locations`` holds the unit identifiers (APs or location IDs) visited during
    the stay and ``location_key`` their common vicinity at the session's
    granularity.
    """

    user_id: UserId
    device_id: DeviceId
    location_key: LocationKey
    locations: FrozenSet[str]
    loc_type: str
    entry: Timestamp
    departure: Timestamp
    activity: str
    granularity: str

    @property
    def duration(self) -> int:
        return self.departure - self.entry


def _session_from_run(
    user_id: UserId, run: List[TrajectoryEntry], granularity: str
) -> Session:
    first = run[0]
    return Session(
        user_id=user_id,
        device_id=first.device_id,
        location_key=first.location.key(granularity),
        locations=frozenset(entry.location.identifier for entry in run),
        loc_type=first.location.loc_type,
        entry=first.start,
        departure=run[-1].end,
        activity=modal_label(
            (entry.activity for entry in run), order=ACTIVITY_PRECEDENCE
        ),
        granularity=granularity,
    )


def extract_sessions_wifi(
    trajectory: Trajectory, granularity: str = FLOOR
) -> List[Session]:
    """Collapse consecutive same-vicinity entries into sessions.

    A session is a maximal run of contiguous entries of one device whose
    locations share a floor (or a building when ``granularity="building"``).
    UNKN entries end a run and produce no session.

    Parameters
    ----------
    trajectory
        Annotated WiFi trajectory
    granularity
        ``"floor"`` or ``"building"``

    Returns
    -------
    List[Session]
        Sessions sorted by entry time

    Raises
    ------
    ValueError
        If ``granularity`` is not a WiFi granularity
    """
    if granularity not in (FLOOR, BUILDING):
        raise ValueError(
            f"WiFi sessions use floor or building granularity, got {granularity}"
        )
    sessions: List[Session] = []
    for stream in trajectory.device_streams().values():
        run: List[TrajectoryEntry] = []
        for entry in stream:
            if entry.location.is_unknown:
                if run:
                    sessions.append(_session_from_run(trajectory.user_id, run, granularity))
                run = []
                continue
            if run and (
                entry.start != run[-1].end
                or entry.location.key(granularity) != run[0].location.key(granularity)
            ):
                sessions.append(_session_from_run(trajectory.user_id, run, granularity))
                run = []
            run.append(entry)
        if run:
            sessions.append(_session_from_run(trajectory.user_id, run, granularity))
    sessions.sort(key=lambda s: (s.entry, s.device_id, s.departure))
    return sessions


def discretize_checkins(
    trajectory: Trajectory, period_minutes: int = 10
) -> List[Session]:
    """Turn every check-in into a session lasting ``period_minutes``.

    Sessions of dense check-ins may overlap.

    Examples
    --------
    >>> from groupsense.ingest import LocationRef, TrajectoryEntry, Trajectory
    >>> ref = LocationRef("", "", "22847", 30.2, -97.8, "food")
    >>> traj = Trajectory("u1", [TrajectoryEntry("u1", ref, 0, 240, "dining")])
    >>> [(s.entry, s.departure) for s in discretize_checkins(traj)]
    [(0, 600)]
    """
    if period_minutes <= 0:
        raise ValueError(f"period_minutes must be positive, got {period_minutes}")
    sessions = [
        Session(
            user_id=trajectory.user_id,
            device_id=entry.device_id,
            location_key=entry.location.key(CHECKIN_PERIOD),
            locations=frozenset([entry.location.identifier]),
            loc_type=entry.location.loc_type,
            entry=entry.start,
            departure=entry.start + period_minutes * 60,
            activity=entry.activity,
            granularity=CHECKIN_PERIOD,
        )
        for entry in trajectory.entries
        if not entry.location.is_unknown
    ]
    sessions.sort(key=lambda s: (s.entry, s.device_id, s.departure))
    return sessions


def entry_sessions(trajectory: Trajectory) -> List[Session]:
    """One session per non-UNKN trajectory entry, keyed by its AP or location ID.

    Used to detect co-occurrences directly on trajectories, without sessionizing.
    """
    return sorted(
        (
            Session(
                user_id=trajectory.user_id,
                device_id=entry.device_id,
                location_key=entry.location.key(ACCESS_POINT),
                locations=frozenset([entry.location.identifier]),
                loc_type=entry.location.loc_type,
                entry=entry.start,
                departure=entry.end,
                activity=entry.activity,
                granularity=ACCESS_POINT,
            )
            for entry in trajectory.entries
            if not entry.location.is_unknown
        ),
        key=lambda s: (s.entry, s.device_id, s.departure),
    )


def extract_sessions(
    trajectory: Trajectory, granularity: str = FLOOR, period_minutes: int = 10
) -> List[Session]:
    """Dispatch to the sessionizer matching ``granularity``."""
    if granularity == CHECKIN_PERIOD:
        return discretize_checkins(trajectory, period_minutes)
    if granularity == ACCESS_POINT:
        return entry_sessions(trajectory)
    return extract_sessions_wifi(trajectory, granularity)
