from typing import FrozenSet, NamedTuple, Tuple

from groupsense.types import LocationKey, Timestamp, UserId

ACCEPTED = "accepted"
REJECTED = "rejected"
SUPPRESSED = "suppressed"
PENDING = "pending"

MemberInterval = Tuple[UserId, Timestamp, Timestamp]


class GroupSession(NamedTuple):
    """Who did what, when and where, plus the filter's verdict.

    ``entry`` and ``departure`` span the earliest entry and latest departure of
    the contributing co-occurrences; ``member_intervals`` keeps each member's own
    span for auditing.
    """

    members: Tuple[UserId, ...]
    entry: Timestamp
    departure: Timestamp
    location_key: LocationKey
    locations: FrozenSet[str]
    loc_type: str
    activity: str
    group_score: float = 0.0
    decision: str = PENDING
    rule_fired: str = ""
    member_intervals: Tuple[MemberInterval, ...] = ()

    @property
    def duration_minutes(self) -> float:
        return (self.departure - self.entry) / 60.0

    @property
    def size(self) -> int:
        return len(self.members)
