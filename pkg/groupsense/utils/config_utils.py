import json
from typing import Any, Dict, Mapping

from groupsense.types import Config


def merge_config(config: Config, config_updates: Mapping[str, Any]) -> Config:
    """Merge a (potentially nested) dict of kwargs into a config (NamedTuple).

    Parameters
    ----------
    config
        An instantiated Config to update
    config_updates
        A potentially nested dict of settings to update in the Config

    Returns
    -------
    Config
        The updated Config

    Raises
    ------
    ValueError
        If an update names a field the Config does not have

    Example
    -------
    ```
    config_updates = {
        "window_days": 7,
        "weights": {
            "alpha": 0.5,
        }
    }
    detector_config = merge_config(DetectorConfig(), config_updates)
    ```
    """
    updates: Dict[str, Any] = {}
    for key, value in config_updates.items():
        if key not in config._fields:
            raise ValueError(
                f"Unknown setting '{key}' for {type(config).__name__}. "
                f"Valid settings: {', '.join(config._fields)}"
            )
        current = getattr(config, key)
        if isinstance(value, dict) and hasattr(current, "_replace"):
            value = merge_config(current, value)
        elif isinstance(value, list):
            value = tuple(value)
        updates[key] = value
    return config._replace(**updates)


def config_to_dict(config: Config) -> Dict[str, Any]:
    """Convert a (potentially nested) config into a JSON-compatible dict."""
    result: Dict[str, Any] = {}
    for key, value in config._asdict().items():
        if hasattr(value, "_asdict"):
            value = config_to_dict(value)
        elif isinstance(value, tuple):
            value = [
                config_to_dict(item) if hasattr(item, "_asdict") else item
                for item in value
            ]
        result[key] = value
    return result


def load_config(config: Config, path: str) -> Config:
    """Merge the settings stored in the JSON file at ``path`` into ``config``."""
    with open(path, "r") as f:
        config_updates = json.load(f)
    if not isinstance(config_updates, dict):
        raise ValueError(f"Config file {path} must hold a JSON object.")
    return merge_config(config, config_updates)
