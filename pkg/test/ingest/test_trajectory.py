import unittest

import numpy as np

from groupsense.ingest import LocationRef, MobilityEvent, build_trajectory
from groupsense.ingest.core import (
    ASSOCIATE,
    CHECKIN,
    DISASSOCIATE,
    DRIFT,
    EVENT_KINDS,
    REASSOCIATE,
    UNKN,
)
from groupsense.ingest.trajectory import group_events_by_user

GAP = 30 * 60


def wifi(ts, ap, kind=ASSOCIATE, device="d1", user="alice", floor="2"):
    location = LocationRef("LIB", floor, ap, loc_type="library")
    return MobilityEvent(user, device, ts, location, kind)


def checkin(ts, location_id, user="bob"):
    location = LocationRef("", "", location_id, 30.2, -97.7, "food")
    return MobilityEvent(user, user, ts, location, CHECKIN)


def spans(trajectory):
    return [(e.location.identifier, e.start, e.end) for e in trajectory.entries]


class BuildTrajectoryTest(unittest.TestCase):
    def test_associate_disassociate(self):
        events = [
            wifi(0, "ap1"),
            wifi(300, "ap1", REASSOCIATE),
            wifi(600, "ap1", DISASSOCIATE),
        ]
        trajectory = build_trajectory(events)
        self.assertEqual(trajectory.user_id, "alice")
        self.assertEqual(spans(trajectory), [("LIB-2-ap1", 0, 600)])

    def test_events_out_of_order(self):
        events = [wifi(600, "ap1", DISASSOCIATE), wifi(0, "ap1")]
        self.assertEqual(spans(build_trajectory(events)), [("LIB-2-ap1", 0, 600)])

    def test_drift_switches_ap(self):
        events = [wifi(0, "ap1"), wifi(300, "ap2", DRIFT)]
        self.assertEqual(
            spans(build_trajectory(events)),
            [("LIB-2-ap1", 0, 300), ("LIB-2-ap2", 300, 300 + GAP)],
        )

    def test_gap_becomes_unknown(self):
        events = [wifi(0, "ap1"), wifi(4000, "ap1", REASSOCIATE)]
        trajectory, meta = build_trajectory(events, return_meta=True)
        self.assertEqual(
            spans(trajectory),
            [("LIB-2-ap1", 0, GAP), ("", GAP, 4000), ("LIB-2-ap1", 4000, 4000 + GAP)],
        )
        self.assertEqual(trajectory.entries[1].location.loc_type, UNKN)
        self.assertEqual(meta.unknown_gaps, 1)

    def test_silence_after_close(self):
        events = [wifi(0, "ap1"), wifi(600, "ap1", DISASSOCIATE), wifi(5000, "ap3")]
        trajectory = build_trajectory(events)
        self.assertEqual(
            spans(trajectory),
            [("LIB-2-ap1", 0, 600), ("", 600, 5000), ("LIB-2-ap3", 5000, 5000 + GAP)],
        )

        # Short silences are left as holes
        events = [wifi(0, "ap1"), wifi(600, "ap1", DISASSOCIATE), wifi(900, "ap3")]
        self.assertEqual(
            spans(build_trajectory(events)),
            [("LIB-2-ap1", 0, 600), ("LIB-2-ap3", 900, 900 + GAP)],
        )

    def test_unmatched_close_is_ignored(self):
        events = [wifi(0, "ap1"), wifi(100, "ap2", DISASSOCIATE)]
        trajectory, meta = build_trajectory(events, return_meta=True)
        self.assertEqual(spans(trajectory), [("LIB-2-ap1", 0, 100 + GAP)])
        self.assertEqual(meta.unmatched_closes, 1)

        trajectory, meta = build_trajectory(
            [wifi(100, "ap2", DISASSOCIATE)], return_meta=True
        )
        self.assertEqual(trajectory.entries, [])
        self.assertEqual(meta.unmatched_closes, 1)

    def test_zero_length_entry_dropped(self):
        events = [wifi(0, "ap1"), wifi(0, "ap1", DISASSOCIATE), wifi(0, "ap2")]
        self.assertEqual(spans(build_trajectory(events)), [("LIB-2-ap2", 0, GAP)])

    def test_devices_are_parallel_streams(self):
        events = [
            wifi(0, "ap1", device="laptop"),
            wifi(100, "ap2", device="phone"),
            wifi(600, "ap1", DISASSOCIATE, device="laptop"),
            wifi(700, "ap2", DISASSOCIATE, device="phone"),
        ]
        trajectory = build_trajectory(events)
        self.assertEqual(
            [(e.device_id, e.start, e.end) for e in trajectory.entries],
            [("laptop", 0, 600), ("phone", 100, 700)],
        )
        self.assertEqual(set(trajectory.device_streams()), {"laptop", "phone"})

    def test_checkins_held_until_next(self):
        events = [checkin(0, "100"), checkin(600, "200"), checkin(5000, "100")]
        trajectory = build_trajectory(events, gap_max_minutes=30)
        self.assertEqual(
            spans(trajectory),
            [("100", 0, 600), ("200", 600, 2400), ("100", 5000, 6800)],
        )

    def test_user_checks(self):
        with self.assertRaisesRegex(ValueError, "exactly one user, got 2"):
            build_trajectory([wifi(0, "ap1"), wifi(0, "ap1", user="bob")])
        with self.assertRaisesRegex(ValueError, "exactly one user, got 0"):
            build_trajectory([])
        self.assertEqual(build_trajectory([], user_id="carol").entries, [])

    def test_unknown_kind_rejected(self):
        with self.assertRaisesRegex(ValueError, r"Unknown event kinds: \['roam'\]"):
            build_trajectory([wifi(0, "ap1"), wifi(60, "ap2", "roam")])
        events = [wifi(0, "ap1", kind) for kind in sorted(EVENT_KINDS)]
        self.assertEqual(build_trajectory(events).user_id, "alice")

    def test_group_events_by_user(self):
        events = [wifi(0, "ap1"), checkin(10, "100"), wifi(20, "ap1")]
        by_user = group_events_by_user(events)
        self.assertEqual(sorted(by_user), ["alice", "bob"])
        self.assertEqual(len(by_user["alice"]), 2)


HORIZON_MINUTES = 300
KINDS = [ASSOCIATE, REASSOCIATE, DRIFT, DISASSOCIATE]


def random_wifi_events(rng):
    events = []
    for device in ["d1", "d2"][: int(rng.integers(1, 3))]:
        n = int(rng.integers(1, 25))
        for minute in rng.choice(HORIZON_MINUTES + 1, size=n, replace=False):
            ap = f"ap{int(rng.integers(1, 4))}"
            kind = KINDS[int(rng.integers(len(KINDS)))]
            events.append(wifi(60 * int(minute), ap, kind, device=device))
    return events


def replayed_coverage(events, gap):
    # Step minute by minute and ask which AP, if any, holds each device
    covered = set()
    by_device = {}
    for event in events:
        by_device.setdefault(event.device_id, []).append(event)
    for device, stream in by_device.items():
        stream = sorted(stream, key=lambda e: e.timestamp)
        open_ap, last_ts, k = None, None, 0
        for t in range(0, 60 * HORIZON_MINUTES + gap + 60, 60):
            while k < len(stream) and stream[k].timestamp <= t:
                event = stream[k]
                if open_ap is not None and event.timestamp - last_ts > gap:
                    open_ap = None
                identifier = event.location.identifier
                if event.event_kind == DISASSOCIATE:
                    if open_ap == identifier:
                        open_ap = None
                else:
                    open_ap = identifier
                last_ts = event.timestamp
                k += 1
            if open_ap is not None and t < last_ts + gap:
                covered.add((device, t, open_ap))
    return covered


def entry_coverage(trajectory):
    covered = set()
    for e in trajectory.entries:
        if e.location.loc_type != UNKN:
            for t in range(e.start, e.end, 60):
                covered.add((e.device_id, t, e.location.identifier))
    return covered


class ReplayCoverageTest(unittest.TestCase):
    def test_coverage_matches_stepwise_replay(self):
        for seed in range(300):
            rng = np.random.default_rng(seed)
            events = random_wifi_events(rng)
            shuffled = [events[k] for k in rng.permutation(len(events))]
            trajectory = build_trajectory(shuffled)
            self.assertEqual(
                entry_coverage(trajectory), replayed_coverage(events, GAP), f"seed {seed}"
            )

    def test_device_entries_tile(self):
        for seed in range(300):
            rng = np.random.default_rng(seed)
            trajectory = build_trajectory(random_wifi_events(rng))
            for device, entries in trajectory.device_streams().items():
                for before, after in zip(entries, entries[1:]):
                    self.assertLessEqual(before.end, after.start, f"seed {seed}")
                    # Unknown spans only ever sit between two presences
                    if after.location.loc_type == UNKN:
                        self.assertEqual(before.end, after.start)
                for entry in entries:
                    self.assertLess(entry.start, entry.end)
                if entries:
                    self.assertNotEqual(entries[0].location.loc_type, UNKN)
                    self.assertNotEqual(entries[-1].location.loc_type, UNKN)


if __name__ == "__main__":
    unittest.main()
