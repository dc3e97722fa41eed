from typing import Dict, List, Tuple

import pandas as pd

from groupsense.features import FeatureWindow
from groupsense.utils import from_iso, to_iso

from .core import Pair, SimilarityScores

SIMILARITY_COLUMNS = [
    "user_i",
    "user_j",
    "window_start",
    "window_end",
    "spatial",
    "temporal",
    "social",
    "mobility",
]

SimilarityTables = Dict[FeatureWindow, Dict[Pair, SimilarityScores]]


def write_similarity(tables: SimilarityTables, path: str) -> None:
    """Write the pair scores of every window as a tab-separated file."""
    rows: List[Tuple] = [
        (pair[0], pair[1], to_iso(window.start), to_iso(window.end), *scores)
        for window, table in tables.items()
        for pair, scores in table.items()
    ]
    pd.DataFrame(rows, columns=SIMILARITY_COLUMNS).to_csv(path, sep="\t", index=False)


def read_similarity(path: str) -> SimilarityTables:
    """Read a file written by ``write_similarity``."""
    df = pd.read_csv(
        path,
        sep="\t",
        dtype={"user_i": str, "user_j": str},
        keep_default_na=False,
        float_precision="round_trip",
    )
    tables: SimilarityTables = {}
    for row in df.itertuples(index=False):
        window = FeatureWindow(from_iso(row.window_start), from_iso(row.window_end))
        tables.setdefault(window, {})[(row.user_i, row.user_j)] = SimilarityScores(
            float(row.spatial), float(row.temporal), float(row.social), float(row.mobility)
        )
    return tables
