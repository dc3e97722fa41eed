import json
import os
import tempfile
import unittest

from groupsense.groups import (
    ACCEPTED,
    REJECTED,
    SUPPRESSED,
    GroupSession,
    emit_w4,
    read_audit_log,
    read_w4,
    write_audit_log,
    write_w4,
)
from groupsense.groups.emit import W4_COLUMNS
from groupsense.utils import from_iso

ENTRY = from_iso("2022-02-14T12:00:00Z")

GROUPS = [
    GroupSession(
        ("u0001", "u0002"), ENTRY, ENTRY + 2400, "DIN1-3", frozenset(["DIN1-3-ap1", "DIN1-3-ap2"]),
        "dining", "dining", 0.3125, ACCEPTED, "long_duration",
        (("u0001", ENTRY, ENTRY + 2400), ("u0002", ENTRY, ENTRY + 2400)),
    ),
    GroupSession(
        ("u0001", "u0003"), ENTRY, ENTRY + 300, "DIN1-3", frozenset(["DIN1-3-ap1"]),
        "dining", "transition", 0.01, REJECTED, "low_similarity",
        (("u0001", ENTRY, ENTRY + 300), ("u0003", ENTRY, ENTRY + 300)),
    ),
    GroupSession(
        ("u0001", "u0002", "u0004"), ENTRY + 3600, ENTRY + 7200, "LAB2-1", frozenset(["LAB2-1-ap1"]),
        "labs", "work", 0.25, ACCEPTED, "mid_duration_or_high_similarity",
    ),
    GroupSession(
        ("u0001", "u0002"), ENTRY + 3600, ENTRY + 4000, "LAB2-1", frozenset(["LAB2-1-ap1"]),
        "labs", "work", 0.5, SUPPRESSED, "subsumed",
    ),
]


class EmitTest(unittest.TestCase):
    def test_emit_w4(self):
        w4 = emit_w4(GROUPS)
        self.assertEqual(list(w4.columns), W4_COLUMNS)
        self.assertEqual(list(w4["members"]), ["u0001;u0002", "u0001;u0002;u0004"])
        self.assertEqual(w4["entry"].iloc[0], "2022-02-14T12:00:00Z")
        self.assertEqual(w4["locations"].iloc[0], "DIN1-3-ap1;DIN1-3-ap2")
        self.assertEqual(list(emit_w4([]).columns), W4_COLUMNS)

    def test_write_w4(self):
        with tempfile.TemporaryDirectory() as tmp:
            tsv_path = os.path.join(tmp, "w4.tsv")
            jsonl_path = os.path.join(tmp, "w4.jsonl")
            self.assertEqual(write_w4(GROUPS, tsv_path, jsonl_path), 2)
            expected = [
                g._replace(member_intervals=()) for g in GROUPS if g.decision == ACCEPTED
            ]
            self.assertEqual(read_w4(tsv_path), expected)
            with open(jsonl_path) as f:
                records = [json.loads(line) for line in f]
            self.assertEqual(len(records), 2)
            self.assertEqual(records[1]["activity"], "work")
            self.assertEqual(records[0]["group_score"], 0.3125)

    def test_audit_log(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "audit.jsonl")
            write_audit_log(GROUPS, path)
            self.assertEqual(read_audit_log(path), GROUPS)
            with open(path) as f:
                first = json.loads(f.readline())
            self.assertEqual(first["decision"], ACCEPTED)
            self.assertEqual(first["member_intervals"][0]["user_id"], "u0001")


if __name__ == "__main__":
    unittest.main()
