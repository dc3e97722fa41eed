"""End-to-end orchestration of the group-detection stages."""

from .ablation import DEFAULT_SUITE, VARIANTS, run_ablation, variant_config  # noqa: F401
from .config import DetectorConfig, validate_config  # noqa: F401
from .report import RunReport  # noqa: F401
from .run import (  # noqa: F401
    OUTPUT_FILES,
    PipelineError,
    PipelineResult,
    cooccur_stage,
    detect_groups,
    features_stage,
    groups_stage,
    ingest_stage,
    run_pipeline,
    sessions_stage,
    similarity_stage,
)
