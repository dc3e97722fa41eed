import logging
from typing import Dict, Iterator, Mapping, Optional, Tuple

import pandas as pd

from .core import LOCATION_TYPE_ALIASES, LOCATION_TYPES, UNKN

DEFAULT_LOCATION_TYPE = "other"


def normalize_location_type(loc_type: str) -> str:
    """Lower-case a location type and resolve known aliases.

    Raises
    ------
    ValueError
        If the type is not one of the campus or LBSN categories
    """
    value = loc_type.strip().lower().replace("-", "_")
    if value == UNKN.lower():
        raise ValueError("UNKN is reserved for interpolated gap entries.")
    value = LOCATION_TYPE_ALIASES.get(value, value)
    if value not in LOCATION_TYPES:
        raise ValueError(f"Unknown location type: {loc_type}")
    return value


class LocationRegistry:
    """Mapping from building name (WiFi) or location ID (check-ins) to location type.

    Keys missing from the registry resolve to ``"other"``.

    Parameters
    ----------
    types
        Mapping from key to location type
    """

    def __init__(self, types: Optional[Mapping[str, str]] = None) -> None:
        self._types: Dict[str, str] = {
            str(key): normalize_location_type(value)
            for key, value in (types or {}).items()
        }

    @classmethod
    def from_file(cls, path: str) -> "LocationRegistry":
        """Load a two-column (key, location type) tab- or comma-separated file."""
        df = pd.read_csv(
            path,
            sep=r"[\t,]",
            engine="python",
            header=None,
            names=["key", "loc_type"],
            dtype=str,
            comment="#",
            keep_default_na=False,
        )
        registry = cls(dict(zip(df["key"].str.strip(), df["loc_type"])))
        logging.info(f"Loaded {len(registry)} location types from {path}")
        return registry

    def to_file(self, path: str) -> None:
        df = pd.DataFrame(sorted(self._types.items()), columns=["key", "loc_type"])
        df.to_csv(path, sep="\t", header=False, index=False)

    def lookup(self, key: str) -> str:
        return self._types.get(key, DEFAULT_LOCATION_TYPE)

    def __len__(self) -> int:
        return len(self._types)

    def __iter__(self) -> Iterator[Tuple[str, str]]:
        return iter(sorted(self._types.items()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}, {len(self)} keys"
