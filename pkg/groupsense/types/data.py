from typing import Tuple

# Seconds since the Unix epoch (UTC)
Timestamp = int
Interval = Tuple[Timestamp, Timestamp]

UserId = str
DeviceId = str
LocationKey = str
