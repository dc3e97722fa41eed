from typing import Dict, List, NamedTuple, Tuple

import numpy as np

from groupsense.ingest import LocationRef, LocationRegistry

VENUE_PREFIXES = {
    "residential": "RES",
    "labs": "LAB",
    "school": "SCH",
    "administration": "ADM",
    "library": "LIB",
    "dining": "DIN",
    "recreation": "REC",
}
CHECKIN_CATEGORIES = {
    "residential": "community",
    "dining": "food",
    "recreation": "outdoors",
    "library": "entertainment",
    "labs": "other",
    "school": "other",
    "administration": "other",
}
CAMPUS_CENTER = (30.2849, -97.7341)


class Venue(NamedTuple):
    """One floor of a campus building, also reachable as a check-in location."""

    building: str
    floor: str
    aps: Tuple[str, ...]
    loc_type: str
    location_id: str
    category: str
    latitude: float
    longitude: float

    @property
    def key(self) -> str:
        return f"{self.building}-{self.floor}"

    def location(self, source: str, ap: str = "") -> LocationRef:
        """Reference seen by the ingest module for a WiFi AP or a check-in."""
        if source == "checkin":
            return LocationRef(
                "", "", self.location_id, self.latitude, self.longitude, self.category
            )
        return LocationRef(self.building, self.floor, ap, loc_type=self.loc_type)

    def location_key(self, source: str) -> str:
        return self.location_id if source == "checkin" else self.key

    def location_type(self, source: str) -> str:
        return self.category if source == "checkin" else self.loc_type


class World:
    """Allocator of venues; every venue is a distinct building floor.

    Parameters
    ----------
    rng
        Random generator used for AP counts and coordinates
    floors_per_building
        Floors allocated per building before a new building of the type is opened
    aps_per_floor
        Inclusive range of APs per floor
    """

    def __init__(
        self,
        rng: np.random.Generator,
        floors_per_building: int = 10,
        aps_per_floor: Tuple[int, int] = (1, 4),
    ) -> None:
        self.rng = rng
        self.floors_per_building = floors_per_building
        self.aps_per_floor = aps_per_floor
        self.venues: List[Venue] = []
        self._allocated: Dict[str, int] = {}

    def add_venue(self, loc_type: str) -> Venue:
        if loc_type not in VENUE_PREFIXES:
            raise ValueError(f"No venues of type {loc_type} can be generated.")
        index = self._allocated.get(loc_type, 0)
        self._allocated[loc_type] = index + 1
        n_aps = int(self.rng.integers(self.aps_per_floor[0], self.aps_per_floor[1] + 1))
        lat, lon = self.rng.normal(loc=CAMPUS_CENTER, scale=0.005)
        venue = Venue(
            building=f"{VENUE_PREFIXES[loc_type]}{index // self.floors_per_building + 1}",
            floor=str(index % self.floors_per_building + 1),
            aps=tuple(f"ap{k + 1}" for k in range(n_aps)),
            loc_type=loc_type,
            location_id=str(10000 + len(self.venues)),
            category=CHECKIN_CATEGORIES[loc_type],
            latitude=round(float(lat), 6),
            longitude=round(float(lon), 6),
        )
        self.venues.append(venue)
        return venue

    def registry(self, source: str) -> LocationRegistry:
        """Location types keyed by building (WiFi) or location ID (check-ins)."""
        if source == "checkin":
            return LocationRegistry({v.location_id: v.category for v in self.venues})
        return LocationRegistry({v.building: v.loc_type for v in self.venues})
