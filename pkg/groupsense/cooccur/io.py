from typing import List, Sequence

import pandas as pd

from groupsense.utils import from_iso, join_set, split_set, to_iso

from .core import CoOccurrence

COOCCURRENCE_COLUMNS = [
    "user_i",
    "user_j",
    "entry",
    "departure",
    "location_key",
    "loc_type",
    "activity",
    "loc_i",
    "loc_j",
]


def write_cooccurrences(cooccurrences: Sequence[CoOccurrence], path: str) -> None:
    """Write co-occurrences as a tab-separated file."""
    rows = [
        (
            c.user_i,
            c.user_j,
            to_iso(c.entry),
            to_iso(c.departure),
            c.location_key,
            c.loc_type,
            c.activity,
            join_set(c.loc_i),
            join_set(c.loc_j),
        )
        for c in cooccurrences
    ]
    pd.DataFrame(rows, columns=COOCCURRENCE_COLUMNS).to_csv(path, sep="\t", index=False)


def read_cooccurrences(path: str) -> List[CoOccurrence]:
    """Read a file written by ``write_cooccurrences``."""
    df = pd.read_csv(path, sep="\t", dtype=str, keep_default_na=False)
    return [
        CoOccurrence(
            user_i=row.user_i,
            user_j=row.user_j,
            entry=from_iso(row.entry),
            departure=from_iso(row.departure),
            location_key=row.location_key,
            loc_type=row.loc_type,
            activity=row.activity,
            loc_i=split_set(row.loc_i),
            loc_j=split_set(row.loc_j),
        )
        for row in df.itertuples(index=False)
    ]
