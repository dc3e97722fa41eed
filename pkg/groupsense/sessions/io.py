from typing import List, Sequence

import pandas as pd

from groupsense.utils import from_iso, join_set, split_set, to_iso

from .core import Session

SESSION_COLUMNS = [
    "user_id",
    "device_id",
    "location_key",
    "location_set",
    "loc_type",
    "entry",
    "departure",
    "activity",
    "granularity",
]


def write_sessions(sessions: Sequence[Session], path: str) -> None:
    """Write sessions as a tab-separated file."""
    rows = [
        (
            s.user_id,
            s.device_id,
            s.location_key,
            join_set(s.locations),
            s.loc_type,
            to_iso(s.entry),
            to_iso(s.departure),
            s.activity,
            s.granularity,
        )
        for s in sessions
    ]
    pd.DataFrame(rows, columns=SESSION_COLUMNS).to_csv(path, sep="\t", index=False)


def read_sessions(path: str) -> List[Session]:
    """Read a file written by ``write_sessions``."""
    df = pd.read_csv(path, sep="\t", dtype=str, keep_default_na=False)
    return [
        Session(
            user_id=row.user_id,
            device_id=row.device_id,
            location_key=row.location_key,
            locations=split_set(row.location_set),
            loc_type=row.loc_type,
            entry=from_iso(row.entry),
            departure=from_iso(row.departure),
            activity=row.activity,
            granularity=row.granularity,
        )
        for row in df.itertuples(index=False)
    ]
