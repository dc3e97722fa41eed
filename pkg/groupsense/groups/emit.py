import json
from typing import Any, Dict, List, Sequence

import pandas as pd

from groupsense.utils import from_iso, join_set, split_set, to_iso

from .core import ACCEPTED, GroupSession

W4_COLUMNS = [
    "members",
    "activity",
    "entry",
    "departure",
    "location_key",
    "locations",
    "loc_type",
    "group_score",
    "rule_fired",
]


def _w4_record(g: GroupSession) -> Dict[str, Any]:
    return {
        "members": join_set(g.members),
        "activity": g.activity,
        "entry": to_iso(g.entry),
        "departure": to_iso(g.departure),
        "location_key": g.location_key,
        "locations": join_set(g.locations),
        "loc_type": g.loc_type,
        "group_score": g.group_score,
        "rule_fired": g.rule_fired,
    }


def emit_w4(groups: Sequence[GroupSession]) -> pd.DataFrame:
    """Project accepted groups onto who (members), what (activity), when and where.

    Groups with any other decision are left out.
    """
    records = [_w4_record(g) for g in groups if g.decision == ACCEPTED]
    return pd.DataFrame(records, columns=W4_COLUMNS)


def write_w4(groups: Sequence[GroupSession], tsv_path: str, jsonl_path: str) -> int:
    """Write the W4 records as tab-separated text and as JSON lines.

    Returns
    -------
    int
        Number of records written
    """
    w4 = emit_w4(groups)
    w4.to_csv(tsv_path, sep="\t", index=False)
    with open(jsonl_path, "w") as f:
        for record in w4.to_dict(orient="records"):
            f.write(json.dumps(record, sort_keys=True) + "\n")
    return len(w4)


def _audit_record(g: GroupSession) -> Dict[str, Any]:
    record = _w4_record(g)
    record["members"] = list(g.members)
    record["locations"] = sorted(g.locations)
    record["decision"] = g.decision
    record["member_intervals"] = [
        {"user_id": user, "entry": to_iso(entry), "departure": to_iso(departure)}
        for user, entry, departure in g.member_intervals
    ]
    return record


def write_audit_log(groups: Sequence[GroupSession], path: str) -> None:
    """Write every candidate group, rejected ones included, as JSON lines."""
    with open(path, "w") as f:
        for g in groups:
            f.write(json.dumps(_audit_record(g), sort_keys=True) + "\n")


def read_audit_log(path: str) -> List[GroupSession]:
    """Read a file written by ``write_audit_log``."""
    groups = []
    with open(path, "r") as f:
        for line in f:
            if not line.strip():
                continue
            record = json.loads(line)
            groups.append(
                GroupSession(
                    members=tuple(record["members"]),
                    entry=from_iso(record["entry"]),
                    departure=from_iso(record["departure"]),
                    location_key=record["location_key"],
                    locations=frozenset(record["locations"]),
                    loc_type=record["loc_type"],
                    activity=record["activity"],
                    group_score=float(record["group_score"]),
                    decision=record["decision"],
                    rule_fired=record["rule_fired"],
                    member_intervals=tuple(
                        (m["user_id"], from_iso(m["entry"]), from_iso(m["departure"]))
                        for m in record["member_intervals"]
                    ),
                )
            )
    return groups


def read_w4(path: str) -> List[GroupSession]:
    """Read a tab-separated W4 file back into accepted groups."""
    df = pd.read_csv(path, sep="\t", dtype=str, keep_default_na=False)
    return [
        GroupSession(
            members=tuple(sorted(split_set(row.members))),
            entry=from_iso(row.entry),
            departure=from_iso(row.departure),
            location_key=row.location_key,
            locations=split_set(row.locations),
            loc_type=row.loc_type,
            activity=row.activity,
            group_score=float(row.group_score),
            decision=ACCEPTED,
            rule_fired=row.rule_fired,
        )
        for row in df.itertuples(index=False)
    ]
