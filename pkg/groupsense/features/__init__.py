"""Long-term repeatability and variability features."""

from .core import (  # noqa: F401
    FeatureTable,
    FeatureVector,
    FeatureWindow,
    pair_features,
    partners_in_window,
    user_features,
    window_features,
)
from .io import (  # noqa: F401
    read_features,
    read_windows,
    unique_windows,
    write_features,
    write_windows,
)
from .window import processing_days, window_for_day, windows_by_day  # noqa: F401
