"""Pairwise spatiotemporal co-occurrence detection."""

from .core import CoOccurrence, cooccurrence_event, make_cooccurrence  # noqa: F401
from .detect import (  # noqa: F401
    detect_pairwise_bruteforce,
    detect_pairwise_fast,
    shard_by_location,
)
from .devices import device_map_from_sessions, merge_devices  # noqa: F401
from .io import read_cooccurrences, write_cooccurrences  # noqa: F401
