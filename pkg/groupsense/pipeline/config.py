from typing import Optional

from groupsense.features.core import MINUTES_MODES
from groupsense.ingest.core import (
    ACCESS_POINT,
    BUILDING,
    CHECKIN_PERIOD,
    FLOOR,
)
from groupsense.ingest.io import INPUT_FORMATS
from groupsense.similarity import Weights, resolve_weights
from groupsense.types import Config

GRANULARITIES_BY_FORMAT = {
    "wifi": (FLOOR, BUILDING, ACCESS_POINT),
    "checkin": (CHECKIN_PERIOD, ACCESS_POINT),
}
SCHEDULERS = ("processes", "threads", "synchronous")


class DetectorConfig(Config):
    """Settings of one group-detection run.

    Parameters
    ----------
    input_format
        ``wifi`` (syslog) or ``checkin`` (LBSN check-ins)
    granularity
        Session vicinity: ``floor``, ``building`` or ``access_point`` for WiFi,
        ``checkin_period`` or ``access_point`` for check-ins
    period_minutes
        Check-in discretization period
    gap_max_minutes
        Silence after which a presence is cut and the gap marked unknown
    work_min_minutes
        Minimum office stay labeled ``work``
    timezone
        Time zone of calendar days, work hours and rollups
    weights
        Spatial/temporal/social similarity weights
    preset
        Named weight preset; overrides ``weights`` when set
    phi_l
        Lower similarity threshold; ``None`` takes ``percentile_l`` of the window
    phi_u
        Upper similarity threshold; ``None`` takes ``percentile_u`` of the window
    percentile_l
        Percentile used when ``phi_l`` is ``None``
    percentile_u
        Percentile used when ``phi_u`` is ``None``
    long_min
        Groups lasting at least this many minutes are always accepted
    short_min
        Minimum duration, in minutes, accepted on duration alone
    window_days
        Feature history window length, in days
    minutes_mode
        ``minute_of_day`` or ``absolute`` unique-minute counting
    cap_spatial
        Clamp spatial similarity at 1
    suppress_subsumed_pairs
        Drop accepted pairs contained in an accepted larger group
    bypass_filter
        Accept every candidate group
    overlap_frac
        Minimum temporal overlap used when scoring against ground truth
    max_reject_ratio
        Largest tolerated share of unparseable input lines
    output_dir
        Directory receiving every stage output
    n_parallel
        Number of parallel workers; 1 runs sequentially
    scheduler
        Dask scheduler used when ``n_parallel > 1``
    progress_bar
        Display per-stage progress bars?
    """

    input_format: str = "wifi"
    granularity: str = FLOOR
    period_minutes: int = 10
    gap_max_minutes: int = 30
    work_min_minutes: int = 60
    timezone: str = "UTC"
    weights: Weights = Weights()
    preset: Optional[str] = None
    phi_l: Optional[float] = 0.05
    phi_u: Optional[float] = 0.1
    percentile_l: float = 75.0
    percentile_u: float = 95.0
    long_min: float = 60
    short_min: float = 15
    window_days: int = 21
    minutes_mode: str = "minute_of_day"
    cap_spatial: bool = False
    suppress_subsumed_pairs: bool = False
    bypass_filter: bool = False
    overlap_frac: float = 0.5
    max_reject_ratio: float = 0.05
    output_dir: str = "output"
    n_parallel: int = 1
    scheduler: str = "processes"
    progress_bar: bool = False


def validate_config(config: DetectorConfig) -> DetectorConfig:
    """Check a ``DetectorConfig`` before any work is done.

    Returns
    -------
    DetectorConfig
        The config, with ``weights`` replaced by the preset's when one is named

    Raises
    ------
    ValueError
        Naming the first offending setting
    """
    if config.input_format not in INPUT_FORMATS:
        raise ValueError(f"Unknown input_format: {config.input_format}")
    allowed = GRANULARITIES_BY_FORMAT[config.input_format]
    if config.granularity not in allowed:
        raise ValueError(
            f"granularity {config.granularity} does not apply to "
            f"{config.input_format} input; use one of {', '.join(allowed)}"
        )
    for name in ["period_minutes", "gap_max_minutes"]:
        if getattr(config, name) <= 0:
            raise ValueError(f"{name} must be positive, got {getattr(config, name)}")
    if config.work_min_minutes < 0:
        raise ValueError(f"work_min_minutes must be >= 0, got {config.work_min_minutes}")
    if config.window_days < 1:
        raise ValueError(f"window_days must be >= 1, got {config.window_days}")
    weights = resolve_weights(config.weights, config.preset)
    if (
        config.phi_l is not None
        and config.phi_u is not None
        and config.phi_l > config.phi_u
    ):
        raise ValueError(
            f"phi_l must not exceed phi_u, got phi_l={config.phi_l}, phi_u={config.phi_u}"
        )
    if not 0 <= config.percentile_l <= config.percentile_u <= 100:
        raise ValueError(
            "Percentiles must satisfy 0 <= percentile_l <= percentile_u <= 100, got "
            f"{config.percentile_l} and {config.percentile_u}"
        )
    if not 0 <= config.short_min <= config.long_min:
        raise ValueError(
            f"short_min must be in [0, long_min], got {config.short_min} and "
            f"{config.long_min}"
        )
    if config.minutes_mode not in MINUTES_MODES:
        raise ValueError(f"Unknown minutes_mode: {config.minutes_mode}")
    if not 0 <= config.overlap_frac <= 1:
        raise ValueError(f"overlap_frac must be in [0, 1], got {config.overlap_frac}")
    if not 0 <= config.max_reject_ratio <= 1:
        raise ValueError(
            f"max_reject_ratio must be in [0, 1], got {config.max_reject_ratio}"
        )
    if config.n_parallel < 1:
        raise ValueError(f"n_parallel must be >= 1, got {config.n_parallel}")
    if config.scheduler not in SCHEDULERS:
        raise ValueError(f"Unknown scheduler: {config.scheduler}")
    return config._replace(weights=weights)
