import logging
from collections import defaultdict
from typing import DefaultDict, List, Optional, Sequence, Tuple, Union

from groupsense.types import DeviceId, Timestamp, UserId

from .core import (
    CHECKIN,
    CLOSE_KINDS,
    EVENT_KINDS,
    UNKNOWN_LOCATION,
    LocationRef,
    MobilityEvent,
    Trajectory,
    TrajectoryEntry,
    TrajectoryMetadata,
)


class _DeviceReplay:
    """Linear replay of one device's association events into presence entries."""

    def __init__(self, device_id: DeviceId, gap_max: int) -> None:
        self.device_id = device_id
        self.gap_max = gap_max
        self.entries: List[TrajectoryEntry] = []
        self.unmatched_closes = 0
        self.unknown_gaps = 0
        self._open: Optional[Tuple[LocationRef, Timestamp]] = None
        self._last_ts: Optional[Timestamp] = None
        self._cut_by_gap = False

    def _close(self, end: Timestamp) -> None:
        location, start = self._open  # type: ignore
        if end > start:
            self.entries.append(TrajectoryEntry(self.device_id, location, start, end))
        self._open = None

    def _fill_gap(self, ts: Timestamp) -> None:
        if not self.entries:
            return
        previous_end = self.entries[-1].end
        if self._cut_by_gap or ts - previous_end > self.gap_max:
            self.entries.append(
                TrajectoryEntry(self.device_id, UNKNOWN_LOCATION, previous_end, ts)
            )
            self.unknown_gaps += 1
        self._cut_by_gap = False

    def feed(self, event: MobilityEvent) -> None:
        ts = event.timestamp
        if self._open is not None and ts - self._last_ts > self.gap_max:  # type: ignore
            self._close(self._last_ts + self.gap_max)  # type: ignore
            self._cut_by_gap = True

        if event.event_kind in CLOSE_KINDS:
            if self._open is not None and (
                self._open[0].identifier == event.location.identifier
            ):
                self._close(ts)
            else:
                self.unmatched_closes += 1
        elif self._open is None:
            self._fill_gap(ts)
            self._open = (event.location, ts)
        elif self._open[0].identifier != event.location.identifier:
            self._close(ts)
            self._open = (event.location, ts)
        self._last_ts = ts

    def finish(self) -> List[TrajectoryEntry]:
        if self._open is not None:
            self._close(self._last_ts + self.gap_max)  # type: ignore
        return self.entries


def _checkin_entries(
    device_id: DeviceId, events: Sequence[MobilityEvent], gap_max: int
) -> List[TrajectoryEntry]:
    # Each check-in is held until the next one, capped at gap_max
    entries = []
    for k, event in enumerate(events):
        end = event.timestamp + gap_max
        if k + 1 < len(events):
            end = min(end, events[k + 1].timestamp)
        if end > event.timestamp:
            entries.append(
                TrajectoryEntry(device_id, event.location, event.timestamp, end)
            )
    return entries


def build_trajectory(
    events: Sequence[MobilityEvent],
    gap_max_minutes: int = 30,
    user_id: Optional[UserId] = None,
    return_meta: bool = False,
) -> Union[Trajectory, Tuple[Trajectory, TrajectoryMetadata]]:
    """Replay one user's events into presence intervals.

    Per device, every association-class event opens a presence at its AP that is
    held until the next event of that device. A disassociation closes the open
    presence only when it names the open AP; otherwise it is ignored and counted.
    A presence with no event for more than ``gap_max_minutes`` is cut at
    ``last event + gap_max`` and the silence up to the next event becomes a
    single UNKN entry. Check-in streams become one entry per check-in, held
    until the next check-in (capped at ``gap_max``). Devices of one user are
    kept as parallel streams.

    Parameters
    ----------
    events
        Events of a single user, in any order
    gap_max_minutes
        Longest silence bridged by a presence
    user_id
        User the trajectory belongs to; required when ``events`` is empty
    return_meta
        Also return a ``TrajectoryMetadata``

    Returns
    -------
    Trajectory
        Entries sorted by start time
    TrajectoryMetadata
        Only returned when ``return_meta=True``

    Raises
    ------
    ValueError
        If the events belong to more than one user, or no user can be determined,
        or an event has an unknown kind
    """
    users = {event.user_id for event in events}
    if user_id is not None:
        users.add(user_id)
    if len(users) != 1:
        raise ValueError(
            f"build_trajectory expects the events of exactly one user, got {len(users)}"
        )
    (owner,) = users
    unknown_kinds = {event.event_kind for event in events} - EVENT_KINDS
    if unknown_kinds:
        raise ValueError(f"Unknown event kinds: {sorted(unknown_kinds)}")
    gap_max = gap_max_minutes * 60

    by_device: DefaultDict[DeviceId, List[MobilityEvent]] = defaultdict(list)
    for event in events:
        by_device[event.device_id].append(event)

    entries: List[TrajectoryEntry] = []
    unmatched_closes = unknown_gaps = 0
    for device_id in sorted(by_device):
        device_events = sorted(by_device[device_id], key=lambda e: e.timestamp)
        if all(event.event_kind == CHECKIN for event in device_events):
            entries.extend(_checkin_entries(device_id, device_events, gap_max))
            continue
        replay = _DeviceReplay(device_id, gap_max)
        for event in device_events:
            replay.feed(event)
        entries.extend(replay.finish())
        unmatched_closes += replay.unmatched_closes
        unknown_gaps += replay.unknown_gaps

    if unmatched_closes:
        logging.warning(
            f"User {owner}: ignored {unmatched_closes} disassociations "
            "without a matching association"
        )
    entries.sort(key=lambda entry: (entry.start, entry.device_id, entry.end))
    trajectory = Trajectory(owner, entries)
    if return_meta:
        return trajectory, TrajectoryMetadata(unmatched_closes, unknown_gaps)
    return trajectory


def group_events_by_user(
    events: Sequence[MobilityEvent],
) -> DefaultDict[UserId, List[MobilityEvent]]:
    """Split a parsed event list into per-user event lists."""
    by_user: DefaultDict[UserId, List[MobilityEvent]] = defaultdict(list)
    for event in events:
        by_user[event.user_id].append(event)
    return by_user
