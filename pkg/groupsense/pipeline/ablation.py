import logging
from typing import Any, Dict, List, Mapping, Optional, Sequence

import pandas as pd

from groupsense.groups import ACCEPTED
from groupsense.ingest import LocationRegistry
from groupsense.ingest.core import ACCESS_POINT
from groupsense.synth import GroundTruthSession, score
from groupsense.types import Interval
from groupsense.utils.config_utils import merge_config
from groupsense.utils.data_operators import check_unique_names

from .config import DetectorConfig, validate_config
from .report import RunReport
from .run import PipelineError, _stage, detect_groups, ingest_stage

# Config overrides of each variant, applied on top of the base config
VARIANTS: Dict[str, Dict[str, Any]] = {
    "session-cooccurrence": {"bypass_filter": True},
    "trajectory-cooccurrence": {"granularity": ACCESS_POINT, "bypass_filter": True},
    "spatial-only": {"preset": "spatial-only"},
    "temporal-only": {"preset": "temporal-only"},
    "social-only": {"preset": "social-only"},
    "full": {},
}
DEFAULT_SUITE = (
    "session-cooccurrence",
    "spatial-only",
    "temporal-only",
    "social-only",
    "full",
)
ABLATION_COLUMNS = ["variant", "accuracy", "precision", "recall", "f1", "n_detected"]


def variant_config(config: DetectorConfig, variant: str) -> DetectorConfig:
    """Base config with the overrides of ``variant`` applied and validated."""
    if variant not in VARIANTS:
        raise ValueError(
            f"Unknown ablation variant '{variant}'. Valid variants: {', '.join(VARIANTS)}"
        )
    return validate_config(merge_config(config, VARIANTS[variant]))


def run_ablation(
    config: DetectorConfig,
    inputs: Sequence[str],
    truth: Sequence[GroundTruthSession],
    suite: Sequence[str] = DEFAULT_SUITE,
    registry_path: Optional[str] = None,
    match_rule: str = "overlap",
    window: Optional[Interval] = None,
    overrides: Optional[Mapping[str, Mapping[str, Any]]] = None,
) -> pd.DataFrame:
    """Run the detector under every variant of ``suite`` and score each run.

    Inputs are parsed once; every variant reuses the same trajectories.

    Parameters
    ----------
    config
        Base detector config
    inputs
        Syslog or check-in files
    truth
        Ground-truth group sessions
    suite
        Variant names, see ``VARIANTS``
    registry_path
        Optional location registry file
    match_rule
        Matching rule passed to ``score``
    window
        Optional scoring window, see ``score``
    overrides
        Additional config overrides per variant name

    Returns
    -------
    pd.DataFrame
        One row per variant with accuracy, precision, recall and F1

    Raises
    ------
    ValueError
        If the suite is empty, names a variant twice or names an unknown variant
    """
    suite = list(suite)
    if not suite:
        raise ValueError("Ablation suite is empty.")
    check_unique_names(suite)
    configs = {name: variant_config(config, name) for name in suite}
    for name, updates in (overrides or {}).items():
        if name in configs:
            configs[name] = validate_config(merge_config(configs[name], updates))
    base = validate_config(config)

    report = RunReport()
    with _stage("ingest", report):
        registry = LocationRegistry.from_file(registry_path) if registry_path else None
        trajectories = ingest_stage(base, inputs, registry, report)

    rows: List[Dict[str, Any]] = []
    for name in suite:
        try:
            groups = detect_groups(configs[name], trajectories)
        except PipelineError as e:
            logging.error(f"Ablation variant {name} failed at stage {e.stage}")
            raise
        accepted = [g for g in groups if g.decision == ACCEPTED]
        result = score(
            accepted,
            truth,
            match_rule=match_rule,
            overlap_frac=config.overlap_frac,
            candidates=groups,
            window=window,
        )
        logging.info(
            f"Variant {name}: precision={result.precision:.3f} "
            f"recall={result.recall:.3f} accuracy={result.accuracy:.3f}"
        )
        rows.append(
            {
                "variant": name,
                "accuracy": result.accuracy,
                "precision": result.precision,
                "recall": result.recall,
                "f1": result.f1,
                "n_detected": result.n_detected,
            }
        )
    return pd.DataFrame(rows, columns=ABLATION_COLUMNS)
