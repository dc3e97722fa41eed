import logging
import re
from typing import Iterable, List, Optional, Tuple, Union

import pandas as pd

from groupsense.types import Interval
from groupsense.utils import parse_timestamps, to_iso

from .core import CHECKIN, IngestMetadata, LocationRef, MobilityEvent, check_reject_ratio
from .registry import DEFAULT_LOCATION_TYPE, LocationRegistry

CHECKIN_TIME_FORMAT = "%Y-%m-%dT%H:%M:%SZ"
FIELD_SEPARATOR = re.compile(r"[,\s]+")


def _coordinate(value: str, bound: float) -> Optional[float]:
    try:
        coordinate = float(value)
    except ValueError:
        return None
    if not -bound <= coordinate <= bound:
        return None
    return coordinate


def parse_checkins(
    lines: Iterable[str],
    registry: Optional[LocationRegistry] = None,
    window: Optional[Interval] = None,
    max_reject_ratio: float = 0.05,
    source: str = "<stream>",
    return_meta: bool = False,
) -> Union[List[MobilityEvent], Tuple[List[MobilityEvent], IngestMetadata]]:
    """Parse LBSN check-in lines into check-in events.

    Each line holds ``<user_ID> <timestamp> <latitude> <longitude> <location_ID>``,
    separated by whitespace or commas. Every LBSN user has a single device whose
    ID equals the user ID.

    Parameters
    ----------
    lines
        Check-in lines
    registry
        Registry mapping location IDs to location types
    window
        Optional ``[start, end)`` processing window in epoch seconds
    max_reject_ratio
        Largest tolerated share of rejected lines
    source
        Name of the input, used in diagnostics
    return_meta
        Also return an ``IngestMetadata``

    Returns
    -------
    List[MobilityEvent]
        One check-in event per accepted line, in input order
    IngestMetadata
        Only returned when ``return_meta=True``

    Raises
    ------
    IngestError
        If the share of rejected lines exceeds ``max_reject_ratio``
    """
    records = []
    n_lines = n_rejected = 0
    for line in lines:
        line = line.strip()
        if not line:
            continue
        n_lines += 1
        fields = FIELD_SEPARATOR.split(line)
        if len(fields) != 5:
            n_rejected += 1
            continue
        user_id, stamp, lat, lon, location_id = fields
        latitude = _coordinate(lat, 90.0)
        longitude = _coordinate(lon, 180.0)
        if latitude is None or longitude is None:
            n_rejected += 1
            continue
        records.append((user_id, stamp, latitude, longitude, location_id))

    events: List[MobilityEvent] = []
    if records:
        df = pd.DataFrame(
            records, columns=["user_id", "stamp", "latitude", "longitude", "location_id"]
        )
        df["timestamp"] = parse_timestamps(df["stamp"], CHECKIN_TIME_FORMAT)
        valid = df["timestamp"].notna()
        if window is not None:
            valid &= (df["timestamp"] >= window[0]) & (df["timestamp"] < window[1])
        n_rejected += int((~valid).sum())
        df = df[valid]
        for user_id, ts, latitude, longitude, location_id in zip(
            df["user_id"], df["timestamp"], df["latitude"], df["longitude"], df["location_id"]
        ):
            loc_type = (
                registry.lookup(location_id)
                if registry is not None
                else DEFAULT_LOCATION_TYPE
            )
            location = LocationRef("", "", location_id, latitude, longitude, loc_type)
            events.append(MobilityEvent(user_id, user_id, int(ts), location, CHECKIN))

    if n_rejected:
        logging.warning(f"{source}: rejected {n_rejected} of {n_lines} check-in lines")
    check_reject_ratio(source, n_lines, n_rejected, max_reject_ratio)
    if return_meta:
        return events, IngestMetadata(source, n_lines, n_rejected, 0, {})
    return events


def format_checkin(event: MobilityEvent) -> str:
    """Serialize a check-in event in the layout ``parse_checkins`` reads.

    Examples
    --------
    >>> ref = LocationRef("", "", "22847", 30.235, -97.795, "food")
    >>> format_checkin(MobilityEvent("u1", "u1", 1287532527, ref, "checkin"))
    'u1 2010-10-19T23:55:27Z 30.235000 -97.795000 22847'
    """
    location = event.location
    if location.latitude is None or location.longitude is None:
        raise ValueError(f"Check-in at {location.unit} has no coordinates.")
    return (
        f"{event.user_id} {to_iso(event.timestamp)} "
        f"{location.latitude:.6f} {location.longitude:.6f} {location.unit}"
    )
