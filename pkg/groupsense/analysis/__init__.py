"""Decision metrics shared by scoring and ablation reports."""

from .metrics import METRICS, metric_score  # noqa: F401
