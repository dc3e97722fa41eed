"""Jaccard-based spatial, temporal, social and mobility similarity."""

from .core import (  # noqa: F401
    SimilarityScores,
    group_similarity,
    jaccard_from_counts,
    mobility_similarity,
    pair_similarity,
    similarity_table,
    social_similarity,
    spatial_similarity,
    temporal_similarity,
)
from .io import SimilarityTables, read_similarity, write_similarity  # noqa: F401
from .weights import PRESETS, Weights, resolve_weights, validate_weights  # noqa: F401
