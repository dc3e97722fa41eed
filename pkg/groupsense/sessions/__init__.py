"""Turn trajectories into vicinity sessions."""

from .core import (  # noqa: F401
    Session,
    discretize_checkins,
    entry_sessions,
    extract_sessions,
    extract_sessions_wifi,
)
from .io import read_sessions, write_sessions  # noqa: F401
