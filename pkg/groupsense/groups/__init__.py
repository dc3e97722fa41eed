"""Merge co-occurrences into group sessions, filter them and report W4 records."""

from .core import (  # noqa: F401
    ACCEPTED,
    PENDING,
    REJECTED,
    SUPPRESSED,
    GroupSession,
)
from .emit import (  # noqa: F401
    emit_w4,
    read_audit_log,
    read_w4,
    write_audit_log,
    write_w4,
)
from .filter import (  # noqa: F401
    FilterThresholds,
    apply_filter,
    compute_thresholds_from_percentiles,
    filter_group,
    resolve_thresholds,
    score_group,
    suppress_subsumed_pairs,
)
from .merge import cluster_cooccurrences, merge_into_groups  # noqa: F401
from .rollup import rollup_reports  # noqa: F401
