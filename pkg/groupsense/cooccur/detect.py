from collections import defaultdict
from itertools import combinations
from typing import DefaultDict, Dict, List, Sequence

import numpy as np
import pandas as pd

from groupsense.sessions import Session
from groupsense.types import LocationKey

from .core import CoOccurrence, cooccurrence_event, dedup_cooccurrences, make_cooccurrence


def detect_pairwise_fast(sessions: Sequence[Session]) -> List[CoOccurrence]:
    """Detect co-occurrences with an early-terminating sweep.

    Sessions are grouped by location key and groups with fewer than two distinct
    devices are dropped. Within a group sorted by entry time, session ``a`` is
    only compared with the following sessions whose entry is not after ``a``'s
    departure; every later session starts after ``a`` has left.

    Parameters
    ----------
    sessions
        Sessions of one processing window, any order

    Returns
    -------
    List[CoOccurrence]
        Deduplicated co-occurrences in canonical order
    """
    if not sessions:
        return []
    df = pd.DataFrame(
        {
            "location_key": [s.location_key for s in sessions],
            "device_id": [s.device_id for s in sessions],
            "entry": np.array([s.entry for s in sessions], dtype=np.int64),
            "departure": np.array([s.departure for s in sessions], dtype=np.int64),
        }
    )
    found: List[CoOccurrence] = []
    for _, group in df.groupby("location_key", sort=True):
        if group["device_id"].nunique() < 2:
            continue
        group = group.sort_values(["entry", "departure"], kind="mergesort")
        index = group.index.to_numpy()
        devices = group["device_id"].to_numpy()
        entries = group["entry"].to_numpy()
        departures = group["departure"].to_numpy()
        stops = np.searchsorted(entries, departures, side="right")
        for a in range(len(index)):
            for b in range(a + 1, stops[a]):
                if devices[a] != devices[b]:
                    found.append(make_cooccurrence(sessions[index[a]], sessions[index[b]]))
    return dedup_cooccurrences(found)


def detect_pairwise_bruteforce(sessions: Sequence[Session]) -> List[CoOccurrence]:
    """Compare every pair of sessions of distinct devices. Quadratic; a test oracle."""
    found = [
        make_cooccurrence(s_a, s_b)
        for s_a, s_b in combinations(sessions, 2)
        if s_a.device_id != s_b.device_id and cooccurrence_event(s_a, s_b)
    ]
    return dedup_cooccurrences(found)


def shard_by_location(sessions: Sequence[Session]) -> Dict[LocationKey, List[Session]]:
    """Split sessions into independent per-location shards."""
    shards: DefaultDict[LocationKey, List[Session]] = defaultdict(list)
    for session in sessions:
        shards[session.location_key].append(session)
    return {key: shards[key] for key in sorted(shards)}
