import logging
from typing import Dict, List, NamedTuple, Sequence, Tuple

import numpy as np
import pandas as pd

from groupsense.ingest import LocationRegistry, MobilityEvent
from groupsense.ingest.core import (
    ASSOCIATE,
    AUTHENTICATE,
    CHECKIN,
    DINING,
    DISASSOCIATE,
    DRIFT,
    GYM,
    OTHER,
    REASSOCIATE,
)
from groupsense.types import Config, Timestamp, UserId
from groupsense.utils import SECONDS_PER_MINUTE, day_start

from .world import Venue, World

# Relation tags of planted groups
WORK = "work"
FRIENDS = "friends"
WORK_FRIENDS = "work+friends"
RELATION_TAGS = (WORK, FRIENDS, WORK_FRIENDS)

OFFICE_CLASSES = ("labs", "school", "administration", "library")
ERRAND_CLASSES = ("dining", "library", "recreation")
WORK_VENUE_CLASSES = ("labs", "school")
FRIEND_VENUE_CLASSES = ("dining", "recreation")

MIN_GROUP_SIZE = 2
MAX_GROUP_SIZE = 7

# Day segment kinds
HOME_SEGMENT = "home"
OFFICE_SEGMENT = "office"
ERRAND_SEGMENT = "errand"
MEETING_SEGMENT = "meeting"
VISIT_SEGMENT = "visit"
PRIVATE_SEGMENTS = frozenset([HOME_SEGMENT, OFFICE_SEGMENT, ERRAND_SEGMENT])

CHANCE_VISIT_MINUTES = (4, 12)
MIN_STAY_SECONDS = 60

_MEETING_ACTIVITY = {"dining": DINING, "recreation": GYM}


class MeetingTemplate(NamedTuple):
    """A recurring weekly meeting slot of a planted group.

    Parameters
    ----------
    weekdays
        Days of the week the group meets (0 is Monday)
    start_minute
        Local minute of the day the meeting nominally starts
    duration_minutes
        Inclusive range the meeting length is drawn from
    venue_class
        Campus location type of the venues the group meets at
    start_jitter_minutes
        Meetings start uniformly within this many minutes of ``start_minute``
    n_venues
        Number of venues of ``venue_class`` the group rotates between
    """

    weekdays: Tuple[int, ...]
    start_minute: int
    duration_minutes: Tuple[int, int] = (30, 50)
    venue_class: str = "dining"
    start_jitter_minutes: int = 15
    n_venues: int = 1


class PlantedGroup(NamedTuple):
    """Members of a planted group, how they relate and when they meet."""

    members: Tuple[UserId, ...]
    relation_tag: str
    meetings: Tuple[MeetingTemplate, ...]


class PopulationSpec(Config):
    """Description of a synthetic population and its noise.

    Parameters
    ----------
    n_users
        Number of users; user IDs are ``u0000``, ``u0001``, ...
    n_days
        Number of generated days
    start_date
        First generated day (local date)
    n_groups
        Number of randomly planted groups, used when ``planted_groups`` is empty
    group_size
        Inclusive size range of randomly planted groups
    planted_groups
        Explicit groups; overrides random planting when non-empty
    chance_rate
        Probability, per user-day, that the user makes a chance visit to a stranger
    dropout
        Probability that each emitted trace event is dropped
    jitter_seconds
        Maximum perturbation of stay boundaries, in seconds
    source
        Trace format, ``wifi`` or ``checkin``
    rng_seed
        Seed all random streams are derived from
    keepalive_minutes
        Inclusive range between WiFi reassociations during a stay
    checkin_minutes
        Inclusive range between repeated check-ins during a stay
    drift_rate
        Probability that a WiFi keepalive lands on another AP of the floor
    second_device_rate
        Probability that a user carries a second device to the office and meetings
    floors_per_building
        Floors allocated per building
    aps_per_floor
        Inclusive range of APs per floor
    timezone
        Time zone of the day templates
    """

    n_users: int = 50
    n_days: int = 14
    start_date: str = "2022-02-14"
    n_groups: int = 10
    group_size: Tuple[int, int] = (2, 2)
    planted_groups: Tuple[PlantedGroup, ...] = ()
    chance_rate: float = 0.0
    dropout: float = 0.0
    jitter_seconds: int = 0
    source: str = "wifi"
    rng_seed: int = 0
    keepalive_minutes: Tuple[int, int] = (3, 8)
    checkin_minutes: Tuple[int, int] = (5, 10)
    drift_rate: float = 0.1
    second_device_rate: float = 0.0
    floors_per_building: int = 10
    aps_per_floor: Tuple[int, int] = (1, 4)
    timezone: str = "UTC"


class GroundTruthSession(NamedTuple):
    """One planted meeting, as it was scheduled."""

    members: Tuple[UserId, ...]
    entry: Timestamp
    departure: Timestamp
    location_key: str
    loc_type: str
    activity: str
    relation_tag: str


class SyntheticCorpus(NamedTuple):
    """Events, ground truth and location registry of one generated population."""

    events: List[MobilityEvent]
    truth: List[GroundTruthSession]
    registry: LocationRegistry
    groups: List[PlantedGroup]


class _Segment(NamedTuple):
    start: int
    end: int
    venue: Venue
    kind: str


class _Stay(NamedTuple):
    start: Timestamp
    end: Timestamp
    venue: Venue
    kind: str


def user_ids(n_users: int) -> List[UserId]:
    return [f"u{k:04d}" for k in range(n_users)]


def _check_range(name: str, value: Tuple[int, int], lo: int = 0) -> None:
    if len(value) != 2 or value[0] > value[1] or value[0] < lo:
        raise ValueError(f"{name} must be an ordered (low, high) pair >= {lo}, got {value}")


def validate_spec(spec: PopulationSpec) -> PopulationSpec:
    """Check a ``PopulationSpec`` and return it unchanged.

    Raises
    ------
    ValueError
        If a count, rate, range or planted group is invalid
    """
    if spec.n_users < 1 or spec.n_days < 1:
        raise ValueError("n_users and n_days must be at least 1")
    for name in ["chance_rate", "dropout", "drift_rate", "second_device_rate"]:
        value = getattr(spec, name)
        if not 0 <= value <= 1:
            raise ValueError(f"{name} must be in [0, 1], got {value}")
    if spec.jitter_seconds < 0:
        raise ValueError(f"jitter_seconds must be >= 0, got {spec.jitter_seconds}")
    if spec.source not in ("wifi", "checkin"):
        raise ValueError(f"Unknown trace source: {spec.source}")
    _check_range("group_size", spec.group_size, MIN_GROUP_SIZE)
    if spec.group_size[1] > MAX_GROUP_SIZE:
        raise ValueError(f"Group sizes must not exceed {MAX_GROUP_SIZE}")
    _check_range("keepalive_minutes", spec.keepalive_minutes, 1)
    _check_range("checkin_minutes", spec.checkin_minutes, 1)
    _check_range("aps_per_floor", spec.aps_per_floor, 1)
    known = set(user_ids(spec.n_users))
    for group in spec.planted_groups:
        if not MIN_GROUP_SIZE <= len(set(group.members)) <= MAX_GROUP_SIZE:
            raise ValueError(
                f"Planted group {group.members} must have between "
                f"{MIN_GROUP_SIZE} and {MAX_GROUP_SIZE} distinct members"
            )
        unknown = set(group.members) - known
        if unknown:
            raise ValueError(f"Planted group names unknown users: {sorted(unknown)}")
        if group.relation_tag not in RELATION_TAGS:
            raise ValueError(f"Unknown relation tag: {group.relation_tag}")
        for meeting in group.meetings:
            if meeting.venue_class not in WORK_VENUE_CLASSES + FRIEND_VENUE_CLASSES:
                raise ValueError(f"Unknown meeting venue class: {meeting.venue_class}")
            if meeting.n_venues < 1:
                raise ValueError("Meetings need at least one venue")
            _check_range("duration_minutes", meeting.duration_minutes, 1)
    return spec


def _random_meetings(relation_tag: str, rng: np.random.Generator) -> List[MeetingTemplate]:
    meetings = []
    if relation_tag in (WORK, WORK_FRIENDS):
        weekdays = rng.choice(5, size=int(rng.integers(2, 4)), replace=False)
        meetings.append(
            MeetingTemplate(
                weekdays=tuple(sorted(int(d) for d in weekdays)),
                start_minute=int(rng.choice([600, 900])),
                venue_class=str(rng.choice(WORK_VENUE_CLASSES)),
                n_venues=int(rng.integers(1, 3)),
            )
        )
    if relation_tag in (FRIENDS, WORK_FRIENDS):
        weekdays = rng.choice(7, size=2, replace=False)
        lunch = bool(rng.random() < 0.5)
        meetings.append(
            MeetingTemplate(
                weekdays=tuple(sorted(int(d) for d in weekdays)),
                start_minute=720 if lunch else 1140,
                venue_class="dining" if lunch else "recreation",
                n_venues=int(rng.integers(1, 3)),
            )
        )
    return meetings


def plant_groups(spec: PopulationSpec, rng: np.random.Generator) -> List[PlantedGroup]:
    """Draw ``spec.n_groups`` groups with disjoint members and random schedules."""
    users = user_ids(spec.n_users)
    sizes = rng.integers(spec.group_size[0], spec.group_size[1] + 1, size=spec.n_groups)
    if sizes.sum() > len(users):
        raise ValueError(
            f"Cannot plant {spec.n_groups} disjoint groups ({sizes.sum()} members) "
            f"among {len(users)} users"
        )
    order = rng.permutation(len(users))
    groups = []
    offset = 0
    for size in sizes:
        members = tuple(sorted(users[i] for i in order[offset : offset + size]))
        offset += size
        relation_tag = str(rng.choice(RELATION_TAGS))
        meetings = tuple(_random_meetings(relation_tag, rng))
        groups.append(PlantedGroup(members, relation_tag, meetings))
    return groups


def _base_day(
    weekday: int, home: Venue, office: Venue, errand: Venue, rng: np.random.Generator
) -> List[_Segment]:
    if weekday < 5:
        wake = int(rng.integers(390, 480))
        errand_start = int(rng.integers(660, 780))
        errand_end = errand_start + int(rng.integers(20, 41))
        leave = int(rng.integers(1020, 1140))
        return [
            _Segment(0, wake, home, HOME_SEGMENT),
            _Segment(wake, errand_start, office, OFFICE_SEGMENT),
            _Segment(errand_start, errand_end, errand, ERRAND_SEGMENT),
            _Segment(errand_end, leave, office, OFFICE_SEGMENT),
            _Segment(leave, 1440, home, HOME_SEGMENT),
        ]
    errand_start = int(rng.integers(600, 900))
    errand_end = errand_start + int(rng.integers(20, 41))
    return [
        _Segment(0, errand_start, home, HOME_SEGMENT),
        _Segment(errand_start, errand_end, errand, ERRAND_SEGMENT),
        _Segment(errand_end, 1440, home, HOME_SEGMENT),
    ]


def _splice(segments: List[_Segment], new: _Segment) -> List[_Segment]:
    """Overwrite ``[new.start, new.end)`` of a day plan with ``new``."""
    result = []
    for seg in segments:
        if seg.end <= new.start or seg.start >= new.end:
            result.append(seg)
            continue
        if seg.start < new.start:
            result.append(seg._replace(end=new.start))
        if seg.end > new.end:
            result.append(seg._replace(start=new.end))
    result.append(new)
    return sorted(result, key=lambda s: s.start)


def _schedule_meetings(
    spec: PopulationSpec,
    groups: Sequence[PlantedGroup],
    group_venues: Dict[Tuple[int, int], List[Venue]],
    plans: Dict[UserId, List[List[_Segment]]],
    first_day: int,
    rng: np.random.Generator,
) -> List[GroundTruthSession]:
    truth = []
    for day in range(spec.n_days):
        weekday = (first_day + day + 3) % 7  # 1970-01-01 was a Thursday
        midnight = day_start(first_day + day, spec.timezone)
        for g_idx, group in enumerate(groups):
            for m_idx, meeting in enumerate(group.meetings):
                if weekday not in meeting.weekdays:
                    continue
                jitter = meeting.start_jitter_minutes
                start = meeting.start_minute + int(rng.integers(-jitter, jitter + 1))
                lo, hi = meeting.duration_minutes
                end = min(start + int(rng.integers(lo, hi + 1)), 1440)
                start = max(start, 0)
                venues = group_venues[(g_idx, m_idx)]
                venue = venues[int(rng.integers(len(venues)))]
                new = _Segment(start, end, venue, MEETING_SEGMENT)
                for user in group.members:
                    day_plan = plans[user][day]
                    for seg in day_plan:
                        if (
                            seg.kind == MEETING_SEGMENT
                            and seg.start < end
                            and start < seg.end
                        ):
                            raise ValueError(
                                f"Infeasible schedule: user {user} has overlapping "
                                f"meetings on day {day}"
                            )
                    plans[user][day] = _splice(day_plan, new)
                truth.append(
                    GroundTruthSession(
                        members=tuple(sorted(group.members)),
                        entry=midnight + start * SECONDS_PER_MINUTE,
                        departure=midnight + end * SECONDS_PER_MINUTE,
                        location_key=venue.location_key(spec.source),
                        loc_type=venue.location_type(spec.source),
                        activity=_MEETING_ACTIVITY.get(venue.loc_type, OTHER),
                        relation_tag=group.relation_tag,
                    )
                )
    return truth


def _schedule_chance_visits(
    spec: PopulationSpec,
    plans: Dict[UserId, List[List[_Segment]]],
    rng: np.random.Generator,
) -> int:
    users = sorted(plans)
    n_visits = 0
    if len(users) < 2 or spec.chance_rate == 0:
        return n_visits
    lo, hi = CHANCE_VISIT_MINUTES
    for day in range(spec.n_days):
        for stranger in users:
            if rng.random() >= spec.chance_rate:
                continue
            target = users[int(rng.integers(len(users) - 1))]
            if target >= stranger:
                target = users[users.index(target) + 1]
            errands = [
                s
                for s in plans[target][day]
                if s.kind == ERRAND_SEGMENT and s.end - s.start >= lo
            ]
            if not errands:
                continue
            errand = errands[0]
            length = int(rng.integers(lo, min(hi, errand.end - errand.start) + 1))
            start = int(rng.integers(errand.start, errand.end - length + 1))
            covering = [
                s
                for s in plans[stranger][day]
                if s.start < start + length and start < s.end
            ]
            if len(covering) != 1 or covering[0].kind not in PRIVATE_SEGMENTS:
                continue
            if covering[0].venue == errand.venue:
                continue
            visit = _Segment(start, start + length, errand.venue, VISIT_SEGMENT)
            plans[stranger][day] = _splice(plans[stranger][day], visit)
            n_visits += 1
    return n_visits


def _to_stays(
    segments: List[List[_Segment]], first_day: int, timezone: str
) -> List[_Stay]:
    stays: List[_Stay] = []
    for day, day_plan in enumerate(segments):
        midnight = day_start(first_day + day, timezone)
        for seg in day_plan:
            if seg.end <= seg.start:
                continue
            start = midnight + seg.start * SECONDS_PER_MINUTE
            end = midnight + seg.end * SECONDS_PER_MINUTE
            if stays and stays[-1].venue == seg.venue and stays[-1].end == start:
                stays[-1] = stays[-1]._replace(end=end)
            else:
                stays.append(_Stay(start, end, seg.venue, seg.kind))
    return stays


def _jitter_stays(
    stays: List[_Stay], jitter_seconds: int, rng: np.random.Generator
) -> List[_Stay]:
    if jitter_seconds == 0 or len(stays) < 2:
        return stays
    jittered = list(stays)
    for k in range(1, len(jittered)):
        prev, cur = jittered[k - 1], jittered[k]
        shift = int(rng.integers(-jitter_seconds, jitter_seconds + 1))
        boundary = cur.start + shift
        boundary = max(boundary, prev.start + MIN_STAY_SECONDS)
        boundary = min(boundary, cur.end - MIN_STAY_SECONDS)
        if prev.start + MIN_STAY_SECONDS <= boundary <= cur.end - MIN_STAY_SECONDS:
            jittered[k - 1] = prev._replace(end=boundary)
            jittered[k] = cur._replace(start=boundary)
    return jittered


def _mac_address(rng: np.random.Generator) -> str:
    return ":".join(f"{b:02x}" for b in rng.integers(0, 256, size=6))


def _emit_wifi(
    user_id: UserId,
    device_id: str,
    stays: Sequence[_Stay],
    spec: PopulationSpec,
    rng: np.random.Generator,
) -> List[MobilityEvent]:
    events: List[MobilityEvent] = []
    lo, hi = spec.keepalive_minutes
    for stay in stays:
        aps = stay.venue.aps
        ap = aps[int(rng.integers(len(aps)))]
        location = stay.venue.location("wifi", ap)
        if not events:
            events.append(MobilityEvent(user_id, device_id, stay.start, location, AUTHENTICATE))
        events.append(MobilityEvent(user_id, device_id, stay.start, location, ASSOCIATE))
        t = stay.start + int(rng.integers(lo * 60, hi * 60 + 1))
        while t < stay.end:
            kind = REASSOCIATE
            if len(aps) > 1 and rng.random() < spec.drift_rate:
                ap = str(rng.choice([a for a in aps if a != ap]))
                location = stay.venue.location("wifi", ap)
                kind = DRIFT
            events.append(MobilityEvent(user_id, device_id, t, location, kind))
            t += int(rng.integers(lo * 60, hi * 60 + 1))
        events.append(MobilityEvent(user_id, device_id, stay.end, location, DISASSOCIATE))
    return events


def _emit_checkins(
    user_id: UserId,
    stays: Sequence[_Stay],
    spec: PopulationSpec,
    rng: np.random.Generator,
) -> List[MobilityEvent]:
    events = []
    lo, hi = spec.checkin_minutes
    for stay in stays:
        location = stay.venue.location("checkin")
        t = stay.start
        while t < stay.end:
            events.append(MobilityEvent(user_id, user_id, t, location, CHECKIN))
            t += int(rng.integers(lo * 60, hi * 60 + 1))
    return events


def _apply_dropout(
    events: List[MobilityEvent], dropout: float, rng: np.random.Generator
) -> List[MobilityEvent]:
    if dropout == 0 or not events:
        return events
    keep = rng.random(len(events)) >= dropout
    return [e for e, k in zip(events, keep) if k or e.event_kind == AUTHENTICATE]


def generate(spec: PopulationSpec) -> SyntheticCorpus:
    """Generate a synthetic population with planted groups and chance colocations.

    Every random choice is drawn from streams spawned from ``spec.rng_seed``;
    trace emission and dropout use one stream per user, so the output is a pure
    function of ``spec``.

    Parameters
    ----------
    spec
        Population, schedule and noise description

    Returns
    -------
    SyntheticCorpus
        Time-ordered events, ground-truth meetings and the location registry

    Raises
    ------
    ValueError
        If the spec is invalid, the groups do not fit the population, or a user
        has overlapping meetings
    """
    validate_spec(spec)
    world_seq, plan_seq, chance_seq, trace_seq, dropout_seq = np.random.SeedSequence(
        spec.rng_seed
    ).spawn(5)
    world_rng = np.random.default_rng(world_seq)
    plan_rng = np.random.default_rng(plan_seq)
    world = World(world_rng, spec.floors_per_building, spec.aps_per_floor)
    users = user_ids(spec.n_users)
    first_day = int(
        (pd.Timestamp(spec.start_date) - pd.Timestamp(0)) // pd.Timedelta(days=1)
    )

    homes, offices, errands = {}, {}, {}
    for user in users:
        homes[user] = world.add_venue("residential")
        offices[user] = world.add_venue(str(world_rng.choice(OFFICE_CLASSES)))
        errands[user] = world.add_venue(str(world_rng.choice(ERRAND_CLASSES)))
    groups = list(spec.planted_groups) or plant_groups(spec, plan_rng)
    group_venues = {
        (g_idx, m_idx): [world.add_venue(m.venue_class) for _ in range(m.n_venues)]
        for g_idx, group in enumerate(groups)
        for m_idx, m in enumerate(group.meetings)
    }

    plans = {
        user: [
            _base_day(
                (first_day + day + 3) % 7,
                homes[user],
                offices[user],
                errands[user],
                plan_rng,
            )
            for day in range(spec.n_days)
        ]
        for user in users
    }
    truth = _schedule_meetings(spec, groups, group_venues, plans, first_day, plan_rng)
    n_visits = _schedule_chance_visits(spec, plans, np.random.default_rng(chance_seq))

    events: List[MobilityEvent] = []
    trace_rngs = [np.random.default_rng(s) for s in trace_seq.spawn(len(users))]
    dropout_rngs = [np.random.default_rng(s) for s in dropout_seq.spawn(len(users))]
    for user, trace_rng, dropout_rng in zip(users, trace_rngs, dropout_rngs):
        stays = _jitter_stays(
            _to_stays(plans[user], first_day, spec.timezone),
            spec.jitter_seconds,
            trace_rng,
        )
        if spec.source == "checkin":
            user_events = _emit_checkins(user, stays, spec, trace_rng)
        else:
            user_events = _emit_wifi(user, _mac_address(trace_rng), stays, spec, trace_rng)
            if trace_rng.random() < spec.second_device_rate:
                carried = [
                    s for s in stays if s.kind in (OFFICE_SEGMENT, MEETING_SEGMENT)
                ]
                user_events += _emit_wifi(
                    user, _mac_address(trace_rng), carried, spec, trace_rng
                )
        events.extend(_apply_dropout(user_events, spec.dropout, dropout_rng))
    events.sort(key=lambda e: e.timestamp)
    truth.sort(key=lambda t: (t.entry, t.members))
    logging.info(
        f"Generated {len(events)} events for {len(users)} users over {spec.n_days} "
        f"days: {len(groups)} groups, {len(truth)} meetings, {n_visits} chance visits"
    )
    return SyntheticCorpus(events, truth, world.registry(spec.source), groups)


def spec_from_dict(values: Dict) -> PopulationSpec:
    """Build a ``PopulationSpec`` from parsed JSON, including nested planted groups."""
    values = dict(values)
    unknown = set(values) - set(PopulationSpec._fields)
    if unknown:
        raise ValueError(f"Unknown PopulationSpec fields: {sorted(unknown)}")
    groups = []
    for group in values.pop("planted_groups", None) or []:
        meetings = []
        for meeting in group.get("meetings", []):
            meeting = dict(meeting)
            for key in ["weekdays", "duration_minutes"]:
                if key in meeting:
                    meeting[key] = tuple(meeting[key])
            meetings.append(MeetingTemplate(**meeting))
        groups.append(
            PlantedGroup(
                members=tuple(group["members"]),
                relation_tag=group.get("relation_tag", FRIENDS),
                meetings=tuple(meetings),
            )
        )
    values = {k: tuple(v) if isinstance(v, list) else v for k, v in values.items()}
    return PopulationSpec(planted_groups=tuple(groups), **values)  # type: ignore


