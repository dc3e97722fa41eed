import unittest

from groupsense.ingest import (
    IngestError,
    LocationRegistry,
    format_syslog_event,
    parse_wifi_syslog,
)
from groupsense.ingest.core import ASSOCIATE, AUTHENTICATE, DRIFT
from groupsense.synth import PopulationSpec, format_traces, generate
from groupsense.utils import from_iso

ASSOC = (
    "2022-02-14 09:00:00 wlc-01 501100 <INFO> AP:LIB-2-ap14 "
    "MAC:AA:BB:CC:DD:EE:01 IP:10.0.0.5 Assoc success"
)
AUTH = (
    "2022-02-14 09:00:05 wlc-01 522008 <NOTI> AP:LIB-2-ap14 "
    "MAC:aa:bb:cc:dd:ee:01 IP:10.0.0.5 User authentication successful username=alice"
)
DRIFTED = (
    "2022-02-14 09:07:00 wlc-01 501106 <DBUG> AP:LIB-2-ap15 "
    "MAC:aa:bb:cc:dd:ee:01 IP:10.0.0.5 Client drifted to AP"
)
UNKNOWN_ID = (
    "2022-02-14 09:08:00 wlc-01 404040 <INFO> AP:LIB-2-ap15 "
    "MAC:aa:bb:cc:dd:ee:01 IP:10.0.0.5 Radar detected"
)
BAD_AP = (
    "2022-02-14 09:09:00 wlc-01 501100 <INFO> AP:ap15 "
    "MAC:aa:bb:cc:dd:ee:01 IP:10.0.0.5 Assoc success"
)
BAD_DATE = (
    "2022-13-45 09:09:00 wlc-01 501100 <INFO> AP:LIB-2-ap15 "
    "MAC:aa:bb:cc:dd:ee:01 IP:10.0.0.5 Assoc success"
)


class ParseWifiSyslogTest(unittest.TestCase):
    def test_parse_events(self):
        registry = LocationRegistry({"LIB": "library"})
        events, meta = parse_wifi_syslog(
            [ASSOC, AUTH, DRIFTED], registry=registry, return_meta=True
        )
        self.assertEqual(len(events), 3)
        self.assertEqual([e.event_kind for e in events], [ASSOCIATE, AUTHENTICATE, DRIFT])

        first = events[0]
        self.assertEqual(first.device_id, "aa:bb:cc:dd:ee:01")
        # The binding applies to events before the authentication too
        self.assertEqual(first.user_id, "alice")
        self.assertEqual(first.timestamp, from_iso("2022-02-14T09:00:00Z"))
        self.assertEqual(first.location.identifier, "LIB-2-ap14")
        self.assertEqual(first.location.loc_type, "library")
        self.assertEqual(events[2].location.unit, "ap15")

        self.assertEqual(meta.n_lines, 3)
        self.assertEqual(meta.n_rejected, 0)
        self.assertEqual(meta.device_map, {"aa:bb:cc:dd:ee:01": "alice"})

    def test_unbound_device_uses_mac(self):
        events = parse_wifi_syslog([ASSOC])
        self.assertEqual(events[0].user_id, "aa:bb:cc:dd:ee:01")
        self.assertEqual(events[0].location.loc_type, "other")

    def test_rejected_and_skipped_lines(self):
        lines = [ASSOC, AUTH, UNKNOWN_ID, BAD_AP, BAD_DATE, "garbage", ""]
        events, meta = parse_wifi_syslog(lines, max_reject_ratio=0.5, return_meta=True)
        self.assertEqual(len(events), 2)
        self.assertEqual(meta.n_lines, 6)
        self.assertEqual(meta.n_skipped, 1)
        self.assertEqual(meta.n_rejected, 3)

    def test_reject_ratio(self):
        with self.assertRaisesRegex(IngestError, "rejected 1 of 2 lines"):
            parse_wifi_syslog([ASSOC, "garbage"], source="wlc.log")
        # IngestError is a ValueError
        with self.assertRaises(ValueError):
            parse_wifi_syslog(["garbage"])
        self.assertEqual(parse_wifi_syslog([]), [])

    def test_window(self):
        window = (from_iso("2022-02-14T09:00:00Z"), from_iso("2022-02-14T09:00:05Z"))
        events, meta = parse_wifi_syslog(
            [ASSOC, AUTH], window=window, max_reject_ratio=0.5, return_meta=True
        )
        self.assertEqual([e.event_kind for e in events], [ASSOCIATE])
        self.assertEqual(meta.n_rejected, 1)
        self.assertEqual(meta.device_map, {})

    def test_format_round_trip(self):
        events = parse_wifi_syslog([ASSOC, AUTH, DRIFTED])
        lines = [format_syslog_event(e) for e in events]
        self.assertIn("username=alice", lines[1])
        self.assertEqual(parse_wifi_syslog(lines), events)

    def test_generated_traces_round_trip(self):
        spec = PopulationSpec(n_users=20, n_days=3, n_groups=3, rng_seed=7, dropout=0.1)
        corpus = generate(spec)
        lines = format_traces(corpus.events, "wifi")
        self.assertGreater(len(lines), 10000)
        events, meta = parse_wifi_syslog(lines, registry=corpus.registry, return_meta=True)
        self.assertEqual(meta.n_rejected, 0)
        self.assertEqual(meta.n_skipped, 0)
        self.assertEqual(events, corpus.events)


if __name__ == "__main__":
    unittest.main()
