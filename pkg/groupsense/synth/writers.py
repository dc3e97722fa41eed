import json
import os
from typing import Dict, Iterable, List

import pandas as pd

from groupsense.ingest import MobilityEvent, format_checkin, format_syslog_event
from groupsense.utils import from_iso, join_set, split_set, to_iso

from .generator import GroundTruthSession, PopulationSpec, SyntheticCorpus, spec_from_dict

TRUTH_COLUMNS = [
    "members",
    "entry",
    "departure",
    "location_key",
    "loc_type",
    "activity",
    "relation_tag",
]

TRACE_FILES = {"wifi": "syslog.log", "checkin": "checkins.txt"}


def format_traces(events: Iterable[MobilityEvent], source: str = "wifi") -> List[str]:
    """Render events as syslog or check-in lines, in input order."""
    if source == "checkin":
        return [format_checkin(e) for e in events]
    if source == "wifi":
        return [format_syslog_event(e) for e in events]
    raise ValueError(f"Unknown trace source: {source}")


def write_traces(events: Iterable[MobilityEvent], path: str, source: str = "wifi") -> int:
    lines = format_traces(events, source)
    with open(path, "w") as f:
        for line in lines:
            f.write(line + "\n")
    return len(lines)


def write_ground_truth(truth: Iterable[GroundTruthSession], path: str) -> None:
    df = pd.DataFrame(
        [
            (
                join_set(t.members),
                to_iso(t.entry),
                to_iso(t.departure),
                t.location_key,
                t.loc_type,
                t.activity,
                t.relation_tag,
            )
            for t in truth
        ],
        columns=TRUTH_COLUMNS,
    )
    df.to_csv(path, sep="\t", index=False)


def read_ground_truth(path: str) -> List[GroundTruthSession]:
    df = pd.read_csv(path, sep="\t", dtype=str, keep_default_na=False)
    return [
        GroundTruthSession(
            members=tuple(sorted(split_set(row.members))),
            entry=from_iso(row.entry),
            departure=from_iso(row.departure),
            location_key=row.location_key,
            loc_type=row.loc_type,
            activity=row.activity,
            relation_tag=row.relation_tag,
        )
        for row in df.itertuples(index=False)
    ]


def write_corpus(
    corpus: SyntheticCorpus, output_dir: str, source: str = "wifi"
) -> Dict[str, str]:
    """Write traces, ground truth and the location registry under ``output_dir``.

    Returns
    -------
    Dict[str, str]
        Paths of the written files, keyed by ``traces``, ``truth`` and ``registry``
    """
    os.makedirs(output_dir, exist_ok=True)
    paths = {
        "traces": os.path.join(output_dir, TRACE_FILES[source]),
        "truth": os.path.join(output_dir, "truth.tsv"),
        "registry": os.path.join(output_dir, "registry.tsv"),
    }
    write_traces(corpus.events, paths["traces"], source)
    write_ground_truth(corpus.truth, paths["truth"])
    corpus.registry.to_file(paths["registry"])
    return paths


def load_population_spec(path: str) -> PopulationSpec:
    """Read a ``PopulationSpec`` from a JSON file."""
    with open(path, "r") as f:
        return spec_from_dict(json.load(f))
