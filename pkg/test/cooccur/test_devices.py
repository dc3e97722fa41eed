import os
import tempfile
import unittest
from collections import defaultdict

import numpy as np

from groupsense.cooccur import (
    CoOccurrence,
    device_map_from_sessions,
    merge_devices,
    read_cooccurrences,
    write_cooccurrences,
)
from groupsense.sessions import Session


def cooc(d_i, d_j, entry, departure, activity="other", key="LIB-2", loc_i="i", loc_j="j"):
    return CoOccurrence(
        d_i, d_j, entry, departure, key, "library", activity,
        frozenset([loc_i]), frozenset([loc_j]),
    )


DEVICE_MAP = {"laptop-a": "alice", "phone-a": "alice", "phone-b": "bob"}


class MergeDevicesTest(unittest.TestCase):
    def test_overlapping_devices_merge(self):
        records = [
            cooc("laptop-a", "phone-b", 0, 600, "work", loc_i="ap1"),
            cooc("phone-a", "phone-b", 300, 900, "dining", loc_i="ap2"),
            cooc("phone-a", "phone-b", 900, 1000, "work", loc_i="ap2"),
            cooc("phone-a", "phone-b", 2000, 2100, "gym"),
        ]
        merged = merge_devices(records, DEVICE_MAP)
        self.assertEqual(
            [(c.user_i, c.user_j, c.entry, c.departure, c.activity) for c in merged],
            [("alice", "bob", 0, 1000, "work"), ("alice", "bob", 2000, 2100, "gym")],
        )
        self.assertEqual(merged[0].loc_i, frozenset(["ap1", "ap2"]))

    def test_own_devices_dropped(self):
        self.assertEqual(merge_devices([cooc("laptop-a", "phone-a", 0, 600)], DEVICE_MAP), [])

    def test_reordering_swaps_locations(self):
        device_map = {"d1": "zoe", "d2": "adam"}
        (merged,) = merge_devices([cooc("d1", "d2", 0, 60, loc_i="z", loc_j="a")], device_map)
        self.assertEqual(merged.pair, ("adam", "zoe"))
        self.assertEqual((merged.loc_i, merged.loc_j), (frozenset("a"), frozenset("z")))

    def test_locations_kept_apart(self):
        records = [cooc("phone-a", "phone-b", 0, 600), cooc("phone-a", "phone-b", 0, 600, key="LIB-3")]
        self.assertEqual(len(merge_devices(records, DEVICE_MAP)), 2)

    def test_unknown_devices_are_users(self):
        (merged,) = merge_devices([cooc("x", "y", 0, 60)], {})
        self.assertEqual(merged.pair, ("x", "y"))

    def test_device_map_from_sessions(self):
        s = Session("alice", "phone-a", "LIB-2", frozenset(), "library", 0, 60, "other", "floor")
        self.assertEqual(device_map_from_sessions([s]), {"phone-a": "alice"})

    def test_io_round_trip(self):
        records = merge_devices([cooc("phone-a", "phone-b", 0, 600, "work")], DEVICE_MAP)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "cooccurrences.tsv")
            write_cooccurrences(records, path)
            self.assertEqual(read_cooccurrences(path), records)


OWNERS = {"a1": "alice", "a2": "alice", "b1": "bob", "b2": "bob", "c1": "carol", "x": "x"}


def random_device_records(rng, n):
    devices = sorted(OWNERS)
    records = []
    for _ in range(n):
        d_i, d_j = rng.choice(len(devices), size=2, replace=False)
        entry = 60 * int(rng.integers(0, 120))
        departure = entry + 60 * int(rng.integers(0, 15))
        key = f"LIB-{int(rng.integers(2, 4))}"
        activity = ["work", "dining", "other"][int(rng.integers(3))]
        records.append(cooc(devices[d_i], devices[d_j], entry, departure, activity, key))
    return records


def closed_points(intervals):
    # Points every 30 seconds inside closed intervals, so zero-length records count
    return {t for entry, departure in intervals for t in range(entry, departure + 1, 30)}


class MergeCoverageTest(unittest.TestCase):
    def test_merged_cover_equals_device_union(self):
        for seed in range(300):
            rng = np.random.default_rng(seed)
            records = random_device_records(rng, int(rng.integers(0, 40)))
            expected = defaultdict(list)
            for c in records:
                pair = tuple(sorted((OWNERS[c.user_i], OWNERS[c.user_j])))
                if pair[0] != pair[1]:
                    expected[pair + (c.location_key,)].append((c.entry, c.departure))
            merged = merge_devices(records, OWNERS)
            got = defaultdict(list)
            for c in merged:
                got[c.pair + (c.location_key,)].append((c.entry, c.departure))

            self.assertEqual(set(got), set(expected), f"seed {seed}")
            for key, intervals in got.items():
                self.assertEqual(
                    closed_points(intervals), closed_points(expected[key]), f"seed {seed}"
                )
                # Maximal intervals neither overlap nor touch
                intervals.sort()
                for before, after in zip(intervals, intervals[1:]):
                    self.assertLess(before[1], after[0])
                # Every endpoint comes from a device-level record
                for entry, departure in intervals:
                    self.assertIn(entry, {e for e, _ in expected[key]})
                    self.assertIn(departure, {d for _, d in expected[key]})

    def test_merge_ignores_input_order(self):
        for seed in range(100):
            rng = np.random.default_rng(seed)
            records = random_device_records(rng, 30)
            shuffled = [records[k] for k in rng.permutation(len(records))]
            self.assertEqual(
                [c[:7] for c in merge_devices(shuffled, OWNERS)],
                [c[:7] for c in merge_devices(records, OWNERS)],
            )


if __name__ == "__main__":
    unittest.main()
