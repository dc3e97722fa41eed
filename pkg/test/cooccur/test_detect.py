import time
import unittest

import numpy as np
import pytest

from groupsense.cooccur import (
    cooccurrence_event,
    detect_pairwise_bruteforce,
    detect_pairwise_fast,
    make_cooccurrence,
    shard_by_location,
)
from groupsense.sessions import Session


def session(device, key, entry, departure, activity="other", user=None):
    return Session(
        user_id=user or device,
        device_id=device,
        location_key=key,
        locations=frozenset([f"{key}-ap1"]),
        loc_type="library",
        entry=entry,
        departure=departure,
        activity=activity,
        granularity="floor",
    )


def random_sessions(rng, n_sessions, n_devices, n_keys, horizon=1000, max_len=200):
    sessions = []
    for _ in range(n_sessions):
        entry = int(rng.integers(0, horizon))
        sessions.append(
            session(
                f"d{int(rng.integers(n_devices))}",
                f"B-{int(rng.integers(n_keys))}",
                entry,
                entry + int(rng.integers(0, max_len)),
            )
        )
    return sessions


class CoOccurrenceTest(unittest.TestCase):
    def test_make_cooccurrence(self):
        s_a = session("d2", "LIB-2", 100, 500, "dining")
        s_b = session("d1", "LIB-2", 0, 300, "work")
        self.assertTrue(cooccurrence_event(s_a, s_b))
        c = make_cooccurrence(s_a, s_b)
        self.assertEqual(c.pair, ("d1", "d2"))
        self.assertEqual((c.entry, c.departure, c.duration), (100, 300, 200))
        self.assertEqual(c.activity, "work")
        self.assertEqual(c.loc_i, s_b.locations)

    def test_touching_sessions_cooccur(self):
        s_a = session("d1", "LIB-2", 0, 300)
        s_b = session("d2", "LIB-2", 300, 600)
        self.assertTrue(cooccurrence_event(s_a, s_b))
        self.assertEqual(make_cooccurrence(s_a, s_b).duration, 0)
        self.assertFalse(cooccurrence_event(s_a, session("d2", "LIB-3", 0, 300)))
        self.assertFalse(cooccurrence_event(s_a, session("d2", "LIB-2", 301, 600)))

    def test_detect(self):
        sessions = [
            session("d1", "LIB-2", 0, 300),
            session("d2", "LIB-2", 100, 200),
            session("d3", "LIB-2", 250, 900),
            session("d1", "LIB-2", 400, 500),
            session("d4", "LIB-3", 0, 900),
        ]
        found = detect_pairwise_fast(sessions)
        self.assertEqual(
            [(c.user_i, c.user_j, c.entry, c.departure) for c in found],
            [("d1", "d2", 100, 200), ("d1", "d3", 250, 300), ("d1", "d3", 400, 500)],
        )
        self.assertEqual(found, detect_pairwise_bruteforce(sessions))

    def test_same_device_never_pairs(self):
        sessions = [session("d1", "LIB-2", 0, 300), session("d1", "LIB-2", 0, 300)]
        self.assertEqual(detect_pairwise_fast(sessions), [])
        self.assertEqual(detect_pairwise_fast([]), [])

    def test_duplicates_collapse(self):
        sessions = [session("d1", "LIB-2", 0, 300), session("d2", "LIB-2", 0, 300)] * 2
        self.assertEqual(len(detect_pairwise_fast(sessions)), 1)

    def test_fast_matches_bruteforce(self):
        for seed in range(200):
            rng = np.random.default_rng(seed)
            sessions = random_sessions(
                rng,
                n_sessions=int(rng.integers(0, 40)),
                n_devices=int(rng.integers(1, 8)),
                n_keys=int(rng.integers(1, 4)),
            )
            self.assertEqual(
                detect_pairwise_fast(sessions),
                detect_pairwise_bruteforce(sessions),
                f"seed {seed}",
            )

    def test_input_order_does_not_matter(self):
        for seed in range(200):
            rng = np.random.default_rng(seed)
            sessions = random_sessions(rng, 40, 6, 3)
            expected = detect_pairwise_fast(sessions)
            for _ in range(3):
                shuffled = [sessions[k] for k in rng.permutation(len(sessions))]
                self.assertEqual(detect_pairwise_fast(shuffled), expected, f"seed {seed}")
                self.assertEqual(detect_pairwise_bruteforce(shuffled), expected, f"seed {seed}")

    def test_shard_by_location(self):
        sessions = random_sessions(np.random.default_rng(0), 50, 10, 5)
        shards = shard_by_location(sessions)
        self.assertEqual(list(shards), sorted(shards))
        self.assertEqual(sum(len(v) for v in shards.values()), 50)
        sharded = sorted(
            (c for shard in shards.values() for c in detect_pairwise_fast(shard)),
            key=lambda c: (c.location_key, c.entry, c.departure, c.user_i, c.user_j),
        )
        self.assertEqual(sharded, detect_pairwise_fast(sessions))


@pytest.mark.complex
class DetectScalingTest(unittest.TestCase):
    def test_fast_outpaces_bruteforce(self):
        # 500 users, 10 sessions each, spread over 50 floors and a week
        sessions = random_sessions(
            np.random.default_rng(500),
            n_sessions=5000,
            n_devices=500,
            n_keys=50,
            horizon=7 * 86400,
            max_len=3 * 3600,
        )
        start = time.perf_counter()
        fast = detect_pairwise_fast(sessions)
        fast_seconds = time.perf_counter() - start
        start = time.perf_counter()
        brute = detect_pairwise_bruteforce(sessions)
        brute_seconds = time.perf_counter() - start
        self.assertEqual(fast, brute)
        self.assertLess(2 * fast_seconds, brute_seconds)


if __name__ == "__main__":
    unittest.main()
