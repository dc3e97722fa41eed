import json
import logging
import os
from collections import OrderedDict
from typing import Any, Dict, List, Mapping

from groupsense.types import Config
from groupsense.utils.config_utils import config_to_dict


class RunReport:
    """Counts, timings and statistics collected over one pipeline run.

    Attributes
    ----------
    counts
        Number of records produced by each stage, keyed by stage name
    seconds
        Wall-clock seconds spent in each stage, keyed by stage name
    stats
        Free-form statistics (rejections, device map size, thresholds, ...)
    """

    def __init__(self) -> None:
        self.counts: Dict[str, int] = OrderedDict()
        self.seconds: Dict[str, float] = OrderedDict()
        self.stats: Dict[str, Any] = OrderedDict()
        self.config: Dict[str, Any] = {}

    def add_stage(self, stage: str, seconds: float, count: int) -> None:
        """Record the output size and duration of a finished stage."""
        self.counts[stage] = count
        self.seconds[stage] = round(seconds, 6)
        logging.info(f"Stage {stage}: {count} records in {seconds:.2f}s")

    def add_stat(self, name: str, value: Any) -> None:
        self.stats[name] = value

    def add_stats(self, stats: Mapping[str, Any]) -> None:
        for name, value in stats.items():
            self.add_stat(name, value)

    def set_config(self, config: Config) -> None:
        self.config = config_to_dict(config)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config,
            "counts": dict(self.counts),
            "seconds": dict(self.seconds),
            "stats": dict(self.stats),
        }

    def write_json(self, path: str) -> None:
        """Dump the report to ``path`` as JSON."""
        if not path.endswith(".json"):  # pragma: no cover
            logging.warning(
                f"Writing a run report to a filename without a .json extension: {path}"
            )
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)

    @property
    def stages(self) -> List[str]:
        return list(self.counts)

    def __repr__(self) -> str:
        return f"{type(self).__name__}, stages: {', '.join(self.stages)}"
