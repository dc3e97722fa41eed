import hashlib
import logging
import re
import time
from typing import Dict, Iterable, List, Optional, Tuple, Union

import pandas as pd

from groupsense.types import Interval
from groupsense.utils import parse_timestamps

from .core import (
    ASSOCIATE,
    AUTHENTICATE,
    DEAUTHENTICATE,
    DISASSOCIATE,
    DRIFT,
    REASSOCIATE,
    IngestMetadata,
    LocationRef,
    MobilityEvent,
    check_reject_ratio,
)
from .registry import DEFAULT_LOCATION_TYPE, LocationRegistry

SYSLOG_TIME_FORMAT = "%Y-%m-%d %H:%M:%S"

# <date> <hh:mm:ss> <controller> <event_ID> <severity> <AP, MAC and IP> <message>
SYSLOG_PATTERN = re.compile(
    r"^(?P<date>\S+) (?P<time>\S+) (?P<controller>\S+) (?P<event_id>\S+) "
    r"<(?P<severity>[^>]*)> AP:(?P<ap>\S*) MAC:(?P<mac>\S*) IP:(?P<ip>\S*)"
    r"(?: (?P<message>.*))?$"
)
# AP identifiers encode <building>-<floor>-<unit>, e.g. LIB-2-ap14
AP_PATTERN = re.compile(r"^(?P<building>[^-\s]+)-(?P<floor>[^-\s]+)-(?P<unit>\S+)$")
USERNAME_PATTERN = re.compile(r"\busername=(?P<username>\S+)")

EVENT_IDS = {
    "501100": ASSOCIATE,
    "501101": REASSOCIATE,
    "501102": DISASSOCIATE,
    "501105": DEAUTHENTICATE,
    "501106": DRIFT,
    "522008": AUTHENTICATE,
}
EVENT_CODES = {kind: code for code, kind in EVENT_IDS.items()}
EVENT_MESSAGES = {
    ASSOCIATE: "Assoc success",
    REASSOCIATE: "Reassoc success",
    DISASSOCIATE: "Disassoc from sta",
    DEAUTHENTICATE: "Deauth to sta",
    DRIFT: "Client drifted to AP",
    AUTHENTICATE: "User authentication successful",
}
EVENT_SEVERITY = {
    ASSOCIATE: "INFO",
    REASSOCIATE: "INFO",
    DISASSOCIATE: "INFO",
    DEAUTHENTICATE: "WARN",
    DRIFT: "DBUG",
    AUTHENTICATE: "NOTI",
}

_RawRecord = Tuple[str, str, str, str, str, str, str]


def parse_ap_identifier(ap: str) -> Optional[Tuple[str, str, str]]:
    """Split an AP identifier into (building, floor, unit).

    Examples
    --------
    >>> parse_ap_identifier("LIB-2-ap14")
    ('LIB', '2', 'ap14')
    >>> parse_ap_identifier("ap14") is None
    True
    """
    match = AP_PATTERN.match(ap)
    if match is None:
        return None
    return match["building"], match["floor"], match["unit"]


def parse_wifi_syslog(
    lines: Iterable[str],
    registry: Optional[LocationRegistry] = None,
    window: Optional[Interval] = None,
    max_reject_ratio: float = 0.05,
    source: str = "<stream>",
    return_meta: bool = False,
) -> Union[List[MobilityEvent], Tuple[List[MobilityEvent], IngestMetadata]]:
    """Parse WiFi controller syslog lines into mobility events.

    Parameters
    ----------
    lines
        Syslog lines, one event per line
    registry
        Registry mapping building names to location types
    window
        Optional ``[start, end)`` processing window in epoch seconds; events
        outside of it count as rejected lines
    max_reject_ratio
        Largest tolerated share of rejected lines
    source
        Name of the input, used in diagnostics
    return_meta
        Also return an ``IngestMetadata`` with rejection counts and the
        username-to-device bindings

    Returns
    -------
    List[MobilityEvent]
        Recognized events, in input order
    IngestMetadata
        Only returned when ``return_meta=True``

    Raises
    ------
    IngestError
        If the share of rejected lines exceeds ``max_reject_ratio``
    """
    records: List[_RawRecord] = []
    n_lines = n_rejected = n_skipped = 0
    for line in lines:
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        n_lines += 1
        match = SYSLOG_PATTERN.match(line)
        if match is None:
            n_rejected += 1
            continue
        kind = EVENT_IDS.get(match["event_id"])
        if kind is None:
            n_skipped += 1
            continue
        ap = parse_ap_identifier(match["ap"])
        if ap is None or not match["mac"]:
            n_rejected += 1
            continue
        stamp = f"{match['date']} {match['time']}"
        records.append((stamp, kind, *ap, match["mac"].lower(), match["message"] or ""))

    events: List[MobilityEvent] = []
    device_map: Dict[str, str] = {}
    if records:
        df = pd.DataFrame(
            records,
            columns=["stamp", "kind", "building", "floor", "unit", "mac", "message"],
        )
        df["timestamp"] = parse_timestamps(df["stamp"], SYSLOG_TIME_FORMAT)
        valid = df["timestamp"].notna()
        if window is not None:
            valid &= (df["timestamp"] >= window[0]) & (df["timestamp"] < window[1])
        n_rejected += int((~valid).sum())
        df = df[valid]

        # Bindings apply to every event of the device, earlier ones included
        auth = df[df["kind"] == AUTHENTICATE]
        for mac, message in zip(auth["mac"], auth["message"]):
            username = USERNAME_PATTERN.search(message)
            if username is not None:
                device_map.setdefault(mac, username["username"])

        for ts, kind, building, floor, unit, mac in zip(
            df["timestamp"], df["kind"], df["building"], df["floor"], df["unit"], df["mac"]
        ):
            loc_type = (
                registry.lookup(building) if registry is not None else DEFAULT_LOCATION_TYPE
            )
            location = LocationRef(building, floor, unit, loc_type=loc_type)
            events.append(
                MobilityEvent(device_map.get(mac, mac), mac, int(ts), location, kind)
            )

    if n_rejected or n_skipped:
        logging.warning(
            f"{source}: rejected {n_rejected} and skipped {n_skipped} "
            f"of {n_lines} syslog lines"
        )
    check_reject_ratio(source, n_lines, n_rejected, max_reject_ratio)
    if return_meta:
        return events, IngestMetadata(source, n_lines, n_rejected, n_skipped, device_map)
    return events


def _bssid(identifier: str) -> str:
    digest = hashlib.md5(identifier.encode("utf-8")).hexdigest()
    return ":".join(digest[i : i + 2] for i in range(0, 12, 2))


def format_syslog_event(
    event: MobilityEvent,
    controller: str = "wlc-01",
    ip: str = "0.0.0.0",
    ssid: str = "campus",
) -> str:
    """Serialize an event in the layout ``parse_wifi_syslog`` reads.

    Authentication events carry ``username=<user_id>`` so the device binding
    survives a round trip.
    """
    kind = event.event_kind
    if kind not in EVENT_CODES:
        raise ValueError(f"Event kind {kind} has no syslog representation.")
    stamp = time.strftime(SYSLOG_TIME_FORMAT, time.gmtime(event.timestamp))
    identifier = event.location.identifier
    message = f"{EVENT_MESSAGES[kind]} bssid={_bssid(identifier)} ssid={ssid}"
    if kind == AUTHENTICATE:
        message = f"{message} username={event.user_id}"
    return (
        f"{stamp} {controller} {EVENT_CODES[kind]} <{EVENT_SEVERITY[kind]}> "
        f"AP:{identifier} MAC:{event.device_id} IP:{ip} {message}"
    )
