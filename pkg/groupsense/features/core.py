from collections import defaultdict
from typing import (
    DefaultDict,
    Dict,
    Iterable,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
)

from groupsense.cooccur import CoOccurrence
from groupsense.sessions import Session
from groupsense.types import Interval, Timestamp, UserId
from groupsense.utils import (
    absolute_minute_count,
    local_intervals,
    minute_of_day_coverage,
    total_length,
)

USER = "user"
PAIR = "pair"
MINUTE_OF_DAY = "minute_of_day"
ABSOLUTE = "absolute"
MINUTES_MODES = (MINUTE_OF_DAY, ABSOLUTE)

Pair = Tuple[UserId, UserId]


class FeatureWindow(NamedTuple):
    """Half-open ``[start, end)`` history window, in epoch seconds."""

    start: Timestamp
    end: Timestamp

    def clip(self, entry: Timestamp, departure: Timestamp) -> Optional[Interval]:
        """Clip an interval to the window, or ``None`` if it lies outside.

        An interval belongs to the window iff it starts before the window ends and
        does not end before the window starts.
        """
        if entry >= self.end or departure < self.start:
            return None
        return max(entry, self.start), min(departure, self.end)


class FeatureVector(NamedTuple):
    """Long-term behavioral counts of a user or a pair over one window.

    Parameters
    ----------
    level
        ``"user"`` or ``"pair"``
    id_i
        User, or first member of the pair
    id_j
        Second member of the pair; empty at user level
    window_start
        Window start, epoch seconds
    window_end
        Window end, epoch seconds
    f1
        Unique locations visited
    f2
        Average visits per location (pair level only)
    f3
        Total time spent, in minutes
    f4
        Unique minutes spent
    f5
        Unique users met
    f6
        Number of interactions
    """

    level: str
    id_i: UserId
    id_j: UserId
    window_start: Timestamp
    window_end: Timestamp
    f1: int = 0
    f2: float = 0.0
    f3: float = 0.0
    f4: int = 0
    f5: int = 0
    f6: int = 0

    @property
    def window(self) -> FeatureWindow:
        return FeatureWindow(self.window_start, self.window_end)


def _check_minutes_mode(minutes_mode: str) -> None:
    if minutes_mode not in MINUTES_MODES:
        raise ValueError(f"Unknown minutes_mode: {minutes_mode}")


def _unique_minutes(intervals: List[Interval], timezone: str, minutes_mode: str) -> int:
    if minutes_mode == ABSOLUTE:
        return absolute_minute_count(intervals)
    return int(minute_of_day_coverage(local_intervals(intervals, timezone)).sum())


def partners_in_window(
    cooccurrences: Iterable[CoOccurrence], window: FeatureWindow
) -> Dict[UserId, Set[UserId]]:
    """Map every user to the set of users it co-occurred with inside ``window``."""
    partners: DefaultDict[UserId, Set[UserId]] = defaultdict(set)
    for c in cooccurrences:
        if window.clip(c.entry, c.departure) is not None:
            partners[c.user_i].add(c.user_j)
            partners[c.user_j].add(c.user_i)
    return dict(partners)


def user_features(
    user_id: UserId,
    sessions: Iterable[Session],
    cooccurrences: Iterable[CoOccurrence],
    window: FeatureWindow,
    timezone: str = "UTC",
    minutes_mode: str = MINUTE_OF_DAY,
) -> FeatureVector:
    """Compute the user-level feature vector of ``user_id`` over ``window``.

    Sessions and co-occurrences of other users are ignored. ``f3`` is the length
    of the union of the user's clipped sessions (the plain sum when they do not
    overlap); ``f2`` is always 0 at user level.

    Examples
    --------
    >>> s = Session("u1", "d1", "LIB-2", frozenset(["LIB-2-ap1"]), "library",
    ...             36000, 39600, "other", "floor")
    >>> v = user_features("u1", [s], [], FeatureWindow(0, 86400))
    >>> v.f1, v.f3, v.f4, v.f5, v.f6
    (1, 60.0, 60, 0, 0)
    """
    _check_minutes_mode(minutes_mode)
    keys = set()
    intervals: List[Interval] = []
    for session in sessions:
        if session.user_id != user_id:
            continue
        clipped = window.clip(session.entry, session.departure)
        if clipped is not None:
            keys.add(session.location_key)
            intervals.append(clipped)
    partners = set()
    n_interactions = 0
    for c in cooccurrences:
        if user_id not in c.pair or window.clip(c.entry, c.departure) is None:
            continue
        partners.add(c.user_j if c.user_i == user_id else c.user_i)
        n_interactions += 1
    return FeatureVector(
        level=USER,
        id_i=user_id,
        id_j="",
        window_start=window.start,
        window_end=window.end,
        f1=len(keys),
        f2=0.0,
        f3=total_length(intervals) / 60.0,
        f4=_unique_minutes(intervals, timezone, minutes_mode),
        f5=len(partners),
        f6=n_interactions,
    )


def pair_features(
    user_i: UserId,
    user_j: UserId,
    cooccurrences: Iterable[CoOccurrence],
    window: FeatureWindow,
    partners: Optional[Mapping[UserId, Set[UserId]]] = None,
    timezone: str = "UTC",
    minutes_mode: str = MINUTE_OF_DAY,
) -> FeatureVector:
    """Compute the pair-level feature vector of ``(user_i, user_j)`` over ``window``.

    ``f2 = f6 / f1`` and ``f5`` counts third users that co-occurred with both
    members; ``partners`` supplies everybody's partner sets for the window and
    defaults to those found in ``cooccurrences``. The result does not depend on
    the order of the two members.

    Examples
    --------
    >>> cs = [CoOccurrence("a", "b", 3600 * h, 3600 * h + 1800, "CAFE-1", "dining",
    ...                    "dining", frozenset(), frozenset()) for h in (10, 34, 58)]
    >>> v = pair_features("a", "b", cs, FeatureWindow(0, 7 * 86400))
    >>> v.f1, v.f2, v.f3, v.f6
    (1, 3.0, 90.0, 3)
    """
    _check_minutes_mode(minutes_mode)
    cooccurrences = list(cooccurrences)
    user_i, user_j = sorted((user_i, user_j))
    keys = set()
    intervals: List[Interval] = []
    for c in cooccurrences:
        if c.pair != (user_i, user_j):
            continue
        clipped = window.clip(c.entry, c.departure)
        if clipped is not None:
            keys.add(c.location_key)
            intervals.append(clipped)
    if partners is None:
        partners = partners_in_window(cooccurrences, window)
    mutual = (partners.get(user_i, set()) & partners.get(user_j, set())) - {
        user_i,
        user_j,
    }
    f1, f6 = len(keys), len(intervals)
    return FeatureVector(
        level=PAIR,
        id_i=user_i,
        id_j=user_j,
        window_start=window.start,
        window_end=window.end,
        f1=f1,
        f2=f6 / f1 if f1 > 0 else 0.0,
        f3=total_length(intervals) / 60.0,
        f4=_unique_minutes(intervals, timezone, minutes_mode),
        f5=len(mutual),
        f6=f6,
    )


class FeatureTable(NamedTuple):
    """All user- and pair-level vectors of one window."""

    window: FeatureWindow
    users: Dict[UserId, FeatureVector]
    pairs: Dict[Pair, FeatureVector]


def window_features(
    sessions: Sequence[Session],
    cooccurrences: Sequence[CoOccurrence],
    window: FeatureWindow,
    timezone: str = "UTC",
    minutes_mode: str = MINUTE_OF_DAY,
) -> FeatureTable:
    """Compute user vectors for every user and pair vectors for every pair seen in
    ``window``."""
    sessions_by_user: DefaultDict[UserId, List[Session]] = defaultdict(list)
    for session in sessions:
        if window.clip(session.entry, session.departure) is not None:
            sessions_by_user[session.user_id].append(session)
    by_user: DefaultDict[UserId, List[CoOccurrence]] = defaultdict(list)
    by_pair: DefaultDict[Pair, List[CoOccurrence]] = defaultdict(list)
    for c in cooccurrences:
        if window.clip(c.entry, c.departure) is not None:
            by_user[c.user_i].append(c)
            by_user[c.user_j].append(c)
            by_pair[c.pair].append(c)
    partners = partners_in_window(cooccurrences, window)

    users = {
        user_id: user_features(
            user_id,
            sessions_by_user.get(user_id, []),
            by_user.get(user_id, []),
            window,
            timezone,
            minutes_mode,
        )
        for user_id in sorted(set(sessions_by_user) | set(by_user))
    }
    pairs = {
        pair: pair_features(
            pair[0], pair[1], by_pair[pair], window, partners, timezone, minutes_mode
        )
        for pair in sorted(by_pair)
    }
    return FeatureTable(window, users, pairs)
