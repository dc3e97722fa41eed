from collections import defaultdict
from typing import DefaultDict, Dict, List, Mapping, Sequence, Tuple

from groupsense.sessions import Session
from groupsense.types import DeviceId, LocationKey, UserId
from groupsense.utils import modal_label

from .core import CoOccurrence

_MergeKey = Tuple[UserId, UserId, LocationKey]


def device_map_from_sessions(sessions: Sequence[Session]) -> Dict[DeviceId, UserId]:
    """Map every device seen in ``sessions`` to its owner."""
    return {session.device_id: session.user_id for session in sessions}


def _merge_run(run: List[CoOccurrence]) -> CoOccurrence:
    first = run[0]
    loc_i = frozenset().union(*(c.loc_i for c in run))
    loc_j = frozenset().union(*(c.loc_j for c in run))
    return first._replace(
        entry=min(c.entry for c in run),
        departure=max(c.departure for c in run),
        activity=modal_label(c.activity for c in run),
        loc_i=loc_i,
        loc_j=loc_j,
    )


def merge_devices(
    cooccurrences: Sequence[CoOccurrence], device_map: Mapping[DeviceId, UserId]
) -> List[CoOccurrence]:
    """Lift device-level co-occurrences to user pairs.

    Devices missing from ``device_map`` are their own users. Pairs of two devices
    of one user are dropped. For each user pair and location, overlapping or
    touching intervals are unioned into maximal intervals whose activity is the
    mode of the merged records (ties to the lexicographically smallest label).

    Parameters
    ----------
    cooccurrences
        Device-level co-occurrences
    device_map
        Mapping from device ID to user ID

    Returns
    -------
    List[CoOccurrence]
        User-level co-occurrences in canonical order
    """
    by_pair: DefaultDict[_MergeKey, List[CoOccurrence]] = defaultdict(list)
    for c in cooccurrences:
        user_i = device_map.get(c.user_i, c.user_i)
        user_j = device_map.get(c.user_j, c.user_j)
        if user_i == user_j:
            continue
        if user_i > user_j:
            user_i, user_j = user_j, user_i
            c = c._replace(loc_i=c.loc_j, loc_j=c.loc_i)
        c = c._replace(user_i=user_i, user_j=user_j)
        by_pair[(user_i, user_j, c.location_key)].append(c)

    merged: List[CoOccurrence] = []
    for records in by_pair.values():
        records.sort(key=lambda c: (c.entry, c.departure))
        run = [records[0]]
        run_end = records[0].departure
        for c in records[1:]:
            if c.entry <= run_end:
                run.append(c)
                run_end = max(run_end, c.departure)
            else:
                merged.append(_merge_run(run))
                run, run_end = [c], c.departure
        merged.append(_merge_run(run))
    merged.sort(key=lambda c: (c.location_key, c.entry, c.departure, c.user_i, c.user_j))
    return merged
