from typing import List, Optional, Sequence, Tuple

import pandas as pd

from groupsense.types import Interval
from groupsense.utils import from_iso, to_iso

from .checkin import parse_checkins
from .core import UNKN, IngestMetadata, LocationRef, MobilityEvent, Trajectory, TrajectoryEntry
from .registry import LocationRegistry
from .syslog import parse_wifi_syslog

TRAJECTORY_COLUMNS = [
    "user_id",
    "device_id",
    "building",
    "floor",
    "unit",
    "latitude",
    "longitude",
    "loc_type",
    "activity",
    "start",
    "end",
]

INPUT_FORMATS = ("wifi", "checkin")


def load_events(
    path: str,
    input_format: str = "wifi",
    registry: Optional[LocationRegistry] = None,
    window: Optional[Interval] = None,
    max_reject_ratio: float = 0.05,
) -> Tuple[List[MobilityEvent], IngestMetadata]:
    """Parse a syslog or check-in file from disk."""
    if input_format not in INPUT_FORMATS:
        raise ValueError(f"Unknown input format: {input_format}")
    parser = parse_wifi_syslog if input_format == "wifi" else parse_checkins
    with open(path, "r") as f:
        return parser(  # type: ignore
            f,
            registry=registry,
            window=window,
            max_reject_ratio=max_reject_ratio,
            source=path,
            return_meta=True,
        )


def _coordinate(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.6f}"


def trajectories_to_frame(trajectories: Sequence[Trajectory]) -> pd.DataFrame:
    rows = [
        (
            trajectory.user_id,
            entry.device_id,
            entry.location.building,
            entry.location.floor,
            entry.location.unit,
            _coordinate(entry.location.latitude),
            _coordinate(entry.location.longitude),
            entry.location.loc_type,
            entry.activity,
            to_iso(entry.start),
            to_iso(entry.end),
        )
        for trajectory in trajectories
        for entry in trajectory.entries
    ]
    return pd.DataFrame(rows, columns=TRAJECTORY_COLUMNS)


def write_trajectories(trajectories: Sequence[Trajectory], path: str) -> None:
    """Write trajectories as a tab-separated file, one row per entry."""
    trajectories_to_frame(trajectories).to_csv(path, sep="\t", index=False)


def read_trajectories(path: str) -> List[Trajectory]:
    """Read a file written by ``write_trajectories``."""
    df = pd.read_csv(path, sep="\t", dtype=str, keep_default_na=False)
    trajectories: List[Trajectory] = []
    for user_id, rows in df.groupby("user_id", sort=False):
        entries = []
        for row in rows.itertuples(index=False):
            location = LocationRef(
                row.building,
                row.floor,
                row.unit,
                float(row.latitude) if row.latitude else None,
                float(row.longitude) if row.longitude else None,
                row.loc_type if row.loc_type else UNKN,
            )
            entries.append(
                TrajectoryEntry(
                    row.device_id,
                    location,
                    from_iso(row.start),
                    from_iso(row.end),
                    row.activity,
                )
            )
        trajectories.append(Trajectory(str(user_id), entries))
    return trajectories
