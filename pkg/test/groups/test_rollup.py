import datetime
import unittest
from collections import defaultdict

import numpy as np

from groupsense.groups import ACCEPTED, REJECTED, GroupSession, rollup_reports
from groupsense.utils import from_iso

DAY = 86400


def group(members, entry, departure, activity="dining", decision=ACCEPTED):
    return GroupSession(
        tuple(members), entry, departure, "CAFE-1", frozenset(), "dining", activity,
        decision=decision,
    )


def iso_week(day):
    year, week, _ = (datetime.date(1970, 1, 1) + datetime.timedelta(days=day)).isocalendar()
    return f"{year}-W{week:02d}"


def as_dict(df, key="bucket"):
    return dict(zip(df[key], df["minutes"]))


class RollupTest(unittest.TestCase):
    def test_minute_recount(self):
        rng = np.random.default_rng(0)
        start = from_iso("2022-02-14T00:00:00Z")
        groups = []
        for _ in range(40):
            entry = start + 60 * int(rng.integers(0, 21 * 1440))
            departure = entry + 60 * int(rng.integers(1, 300))
            activity = str(rng.choice(["dining", "gym", "work"]))
            decision = ACCEPTED if rng.random() < 0.8 else REJECTED
            groups.append(group("ab", entry, departure, activity, decision))

        hours, weeks, activities = defaultdict(float), defaultdict(float), defaultdict(float)
        for g in groups:
            if g.decision != ACCEPTED:
                continue
            activities[g.activity] += (g.departure - g.entry) / 60
            for minute in range(g.entry // 60, g.departure // 60):
                hours[(minute // 60) % 24] += 1
                weeks[iso_week(minute // 1440)] += 1

        by_hour = rollup_reports(groups, "hour")
        self.assertEqual(list(by_hour.columns), ["bucket", "minutes"])
        self.assertEqual(list(by_hour["bucket"]), sorted(hours))
        for bucket, minutes in as_dict(by_hour).items():
            self.assertAlmostEqual(minutes, hours[bucket])
        for bucket, minutes in as_dict(rollup_reports(groups, "week")).items():
            self.assertAlmostEqual(minutes, weeks[bucket])
        for bucket, minutes in as_dict(rollup_reports(groups, "activity")).items():
            self.assertAlmostEqual(minutes, activities[bucket])

    def test_week_boundary(self):
        g = group("ab", from_iso("2022-02-20T23:00:00Z"), from_iso("2022-02-21T01:00:00Z"))
        self.assertEqual(as_dict(rollup_reports([g], "week")), {"2022-W07": 60.0, "2022-W08": 60.0})
        self.assertEqual(as_dict(rollup_reports([g], "hour")), {0: 60.0, 23: 60.0})

    def test_local_hours(self):
        g = group("ab", from_iso("2022-02-14T05:30:00Z"), from_iso("2022-02-14T06:30:00Z"))
        self.assertEqual(
            as_dict(rollup_reports([g], "hour", timezone="America/Chicago")), {0: 30.0, 23: 30.0}
        )

    def test_per_member(self):
        groups = [group("ab", 0, 3600), group("abc", 0, 1800, activity="gym")]
        df = rollup_reports(groups, "activity", per_member=True)
        self.assertEqual(list(df.columns), ["member", "bucket", "minutes"])
        totals = {(m, b): v for m, b, v in df.itertuples(index=False)}
        self.assertEqual(
            totals,
            {
                ("a", "dining"): 60.0,
                ("a", "gym"): 30.0,
                ("b", "dining"): 60.0,
                ("b", "gym"): 30.0,
                ("c", "gym"): 30.0,
            },
        )

    def test_edge_cases(self):
        self.assertTrue(rollup_reports([], "week").empty)
        self.assertTrue(rollup_reports([group("ab", 0, 60, decision=REJECTED)]).empty)
        with self.assertRaisesRegex(ValueError, "Unknown bucketing 'month'"):
            rollup_reports([], "month")


if __name__ == "__main__":
    unittest.main()
