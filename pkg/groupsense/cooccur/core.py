from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Tuple

from groupsense.sessions import Session
from groupsense.types import LocationKey, Timestamp, UserId
from groupsense.utils import overlaps


class CoOccurrence(NamedTuple):
    """An overlap of two sessions at one location.

    ``user_i < user_j`` always holds. Before ``merge_devices`` the identities are
    device IDs; afterwards they are user IDs.
    """

    user_i: UserId
    user_j: UserId
    entry: Timestamp
    departure: Timestamp
    location_key: LocationKey
    loc_type: str
    activity: str
    loc_i: FrozenSet[str]
    loc_j: FrozenSet[str]

    @property
    def pair(self) -> Tuple[UserId, UserId]:
        return self.user_i, self.user_j

    @property
    def duration(self) -> int:
        return self.departure - self.entry


DedupKey = Tuple[UserId, UserId, Timestamp, Timestamp, LocationKey]


def cooccurrence_event(s_i: Session, s_j: Session) -> bool:
    """Whether two sessions share a location and overlap in time (closed intervals).

    Locations are compared through their key at the sessions' granularity, so two
    floor-level sessions co-occur whenever they are on the same floor.
    """
    return s_i.location_key == s_j.location_key and overlaps(
        s_i.entry, s_i.departure, s_j.entry, s_j.departure
    )


def make_cooccurrence(s_a: Session, s_b: Session) -> CoOccurrence:
    """Build the co-occurrence of two overlapping sessions of distinct devices.

    The pair is put in canonical order. With only two sessions a tie in the modal
    activity always goes to ``user_i``, so ``user_i``'s activity is used.
    """
    s_i, s_j = (s_a, s_b) if s_a.device_id < s_b.device_id else (s_b, s_a)
    return CoOccurrence(
        user_i=s_i.device_id,
        user_j=s_j.device_id,
        entry=max(s_i.entry, s_j.entry),
        departure=min(s_i.departure, s_j.departure),
        location_key=s_i.location_key,
        loc_type=s_i.loc_type,
        activity=s_i.activity,
        loc_i=s_i.locations,
        loc_j=s_j.locations,
    )


def _sort_key(c: CoOccurrence) -> tuple:
    return (
        c.location_key,
        c.entry,
        c.departure,
        c.user_i,
        c.user_j,
        c.activity,
        c.loc_type,
        tuple(sorted(c.loc_i)),
        tuple(sorted(c.loc_j)),
    )


def dedup_cooccurrences(cooccurrences: Iterable[CoOccurrence]) -> List[CoOccurrence]:
    """Sort canonically and keep one record per (pair, entry, departure, location)."""
    kept: Dict[DedupKey, CoOccurrence] = {}
    for c in sorted(cooccurrences, key=_sort_key):
        kept.setdefault((c.user_i, c.user_j, c.entry, c.departure, c.location_key), c)
    return list(kept.values())
