from typing import Dict, Iterable, List, Sequence

import pandas as pd

from groupsense.utils import SECONDS_PER_DAY, from_iso, to_iso

from .core import FeatureTable, FeatureVector, FeatureWindow

FEATURE_COLUMNS = [
    "level",
    "id_i",
    "id_j",
    "window_start",
    "window_end",
    "f1",
    "f2",
    "f3",
    "f4",
    "f5",
    "f6",
]
WINDOW_COLUMNS = ["day", "window_start", "window_end"]


def write_features(tables: Iterable[FeatureTable], path: str) -> None:
    """Write the user and pair vectors of every window as a tab-separated file."""
    rows = []
    for table in tables:
        for vector in list(table.users.values()) + list(table.pairs.values()):
            row = vector._asdict()
            row["window_start"] = to_iso(vector.window_start)
            row["window_end"] = to_iso(vector.window_end)
            rows.append(row)
    pd.DataFrame(rows, columns=FEATURE_COLUMNS).to_csv(path, sep="\t", index=False)


def read_features(path: str) -> List[FeatureTable]:
    """Read a file written by ``write_features`` back into per-window tables."""
    df = pd.read_csv(
        path,
        sep="\t",
        dtype={"id_i": str, "id_j": str},
        keep_default_na=False,
        float_precision="round_trip",
    )
    tables: Dict[FeatureWindow, FeatureTable] = {}
    for row in df.itertuples(index=False):
        window = FeatureWindow(from_iso(row.window_start), from_iso(row.window_end))
        table = tables.setdefault(window, FeatureTable(window, {}, {}))
        vector = FeatureVector(
            level=row.level,
            id_i=row.id_i,
            id_j=row.id_j,
            window_start=window.start,
            window_end=window.end,
            f1=int(row.f1),
            f2=float(row.f2),
            f3=float(row.f3),
            f4=int(row.f4),
            f5=int(row.f5),
            f6=int(row.f6),
        )
        if vector.level == "user":
            table.users[vector.id_i] = vector
        else:
            table.pairs[(vector.id_i, vector.id_j)] = vector
    return list(tables.values())


def write_windows(windows: Dict[int, FeatureWindow], path: str) -> None:
    """Write the day-to-window assignment used to score groups."""
    rows = [
        (
            to_iso(day * SECONDS_PER_DAY)[:10],
            to_iso(window.start),
            to_iso(window.end),
        )
        for day, window in sorted(windows.items())
    ]
    pd.DataFrame(rows, columns=WINDOW_COLUMNS).to_csv(path, sep="\t", index=False)


def read_windows(path: str) -> Dict[int, FeatureWindow]:
    df = pd.read_csv(path, sep="\t", dtype=str)
    return {
        from_iso(f"{row.day}T00:00:00Z") // SECONDS_PER_DAY: FeatureWindow(
            from_iso(row.window_start), from_iso(row.window_end)
        )
        for row in df.itertuples(index=False)
    }


def unique_windows(windows: Sequence[FeatureWindow]) -> List[FeatureWindow]:
    """Distinct windows in first-seen order; identical bounds are computed once."""
    return list(dict.fromkeys(windows))
