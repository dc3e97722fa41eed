import os
import tempfile
import unittest

from groupsense.ingest import (
    UNKNOWN_LOCATION,
    LocationRef,
    Trajectory,
    TrajectoryEntry,
    load_events,
    read_trajectories,
    write_trajectories,
)
from groupsense.ingest.core import DINING, OTHER


class TrajectoryIOTest(unittest.TestCase):
    def test_round_trip(self):
        trajectories = [
            Trajectory(
                "alice",
                [
                    TrajectoryEntry(
                        "aa:bb", LocationRef("LIB", "2", "ap1", loc_type="library"), 0, 600
                    ),
                    TrajectoryEntry("aa:bb", UNKNOWN_LOCATION, 600, 4000),
                ],
            ),
            Trajectory(
                "bob",
                [
                    TrajectoryEntry(
                        "bob",
                        LocationRef("", "", "22847", 30.235, -97.795, "food"),
                        60,
                        660,
                        DINING,
                    )
                ],
            ),
        ]
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "trajectories.tsv")
            write_trajectories(trajectories, path)
            self.assertEqual(read_trajectories(path), trajectories)
        self.assertEqual(trajectories[0].entries[0].activity, OTHER)

    def test_load_events(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "checkins.txt")
            with open(path, "w") as f:
                f.write("u1 2010-10-19T23:55:27Z 30.235 -97.795 22847\n")
            events, meta = load_events(path, "checkin")
            self.assertEqual(len(events), 1)
            self.assertEqual(meta.source, path)
            with self.assertRaisesRegex(ValueError, "Unknown input format: gps"):
                load_events(path, "gps")


if __name__ == "__main__":
    unittest.main()
