from .config import Config  # noqa: F401
from .data import DeviceId, Interval, LocationKey, Timestamp, UserId  # noqa: F401
