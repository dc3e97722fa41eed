from itertools import combinations
from typing import Dict, Iterable, Mapping, NamedTuple, Optional, Tuple

import numpy as np

from groupsense.features import FeatureTable, FeatureVector
from groupsense.types import UserId

from .weights import Weights, validate_weights

COUNT_TOLERANCE = 1e-9

Pair = Tuple[UserId, UserId]


class SimilarityScores(NamedTuple):
    """Long-term similarity of a pair of users."""

    spatial: float
    temporal: float
    social: float
    mobility: float


def jaccard_from_counts(f_i: float, f_j: float, f_ij: float) -> float:
    """Jaccard index of two sets given their sizes and the size of their intersection.

    Parameters
    ----------
    f_i
        Size of the first set
    f_j
        Size of the second set
    f_ij
        Size of the intersection

    Returns
    -------
    float
        ``f_ij / (f_i + f_j - f_ij)``, or 0 when the union is empty

    Raises
    ------
    ValueError
        If a count is negative or ``f_ij`` exceeds ``min(f_i, f_j)``

    Examples
    --------
    >>> jaccard_from_counts(5, 4, 3)
    0.5
    >>> jaccard_from_counts(7, 3, 0)
    0.0
    """
    if min(f_i, f_j, f_ij) < 0:
        raise ValueError(f"Counts must be non-negative, got ({f_i}, {f_j}, {f_ij})")
    if f_ij > min(f_i, f_j) + COUNT_TOLERANCE:
        raise ValueError(
            f"Intersection size {f_ij} exceeds the smaller set size {min(f_i, f_j)}"
        )
    denominator = f_i + f_j - f_ij
    if denominator <= 0:
        return 0.0
    return min(float(f_ij / denominator), 1.0)


def _check_windows(
    user_feats_i: FeatureVector, user_feats_j: FeatureVector, pair_feats: FeatureVector
) -> None:
    windows = {user_feats_i.window, user_feats_j.window, pair_feats.window}
    if len(windows) != 1:
        raise ValueError(f"Feature vectors cover different windows: {sorted(windows)}")


def spatial_similarity(
    user_feats_i: FeatureVector,
    user_feats_j: FeatureVector,
    pair_feats: FeatureVector,
    cap: bool = False,
) -> float:
    """Jaccard of visited locations weighted by visits per shared location.

    Not bounded by 1 unless ``cap=True``.
    """
    _check_windows(user_feats_i, user_feats_j, pair_feats)
    score = jaccard_from_counts(user_feats_i.f1, user_feats_j.f1, pair_feats.f1)
    score *= pair_feats.f2
    return min(score, 1.0) if cap else score


def temporal_similarity(
    user_feats_i: FeatureVector, user_feats_j: FeatureVector, pair_feats: FeatureVector
) -> float:
    """Mean of the Jaccards of total time and of unique minutes."""
    _check_windows(user_feats_i, user_feats_j, pair_feats)
    total_time = jaccard_from_counts(user_feats_i.f3, user_feats_j.f3, pair_feats.f3)
    unique_minutes = jaccard_from_counts(
        user_feats_i.f4, user_feats_j.f4, pair_feats.f4
    )
    return (total_time + unique_minutes) / 2


def social_similarity(
    user_feats_i: FeatureVector, user_feats_j: FeatureVector, pair_feats: FeatureVector
) -> float:
    """Mean of the Jaccards of users met and of interactions."""
    _check_windows(user_feats_i, user_feats_j, pair_feats)
    users_met = jaccard_from_counts(user_feats_i.f5, user_feats_j.f5, pair_feats.f5)
    interactions = jaccard_from_counts(
        user_feats_i.f6, user_feats_j.f6, pair_feats.f6
    )
    return (users_met + interactions) / 2


def mobility_similarity(scores: SimilarityScores, weights: Weights) -> float:
    """Weighted combination of the spatial, temporal and social similarities.

    Examples
    --------
    >>> scores = SimilarityScores(0.3, 0.6, 0.0, 0.0)
    >>> round(mobility_similarity(scores, Weights()), 12)
    0.3
    """
    validate_weights(weights)
    return (
        weights.alpha * scores.spatial
        + weights.beta * scores.temporal
        + weights.gamma * scores.social
    )


def pair_similarity(
    user_feats_i: FeatureVector,
    user_feats_j: FeatureVector,
    pair_feats: FeatureVector,
    weights: Weights = Weights(),
    cap_spatial: bool = False,
) -> SimilarityScores:
    """All similarity scores of one pair."""
    partial = SimilarityScores(
        spatial=spatial_similarity(user_feats_i, user_feats_j, pair_feats, cap_spatial),
        temporal=temporal_similarity(user_feats_i, user_feats_j, pair_feats),
        social=social_similarity(user_feats_i, user_feats_j, pair_feats),
        mobility=0.0,
    )
    return partial._replace(mobility=mobility_similarity(partial, weights))


def similarity_table(
    features: FeatureTable, weights: Weights = Weights(), cap_spatial: bool = False
) -> Dict[Pair, SimilarityScores]:
    """Score every pair of a window's feature table."""
    validate_weights(weights)
    return {
        pair: pair_similarity(
            features.users[pair[0]],
            features.users[pair[1]],
            pair_feats,
            weights,
            cap_spatial,
        )
        for pair, pair_feats in features.pairs.items()
    }


def group_similarity(
    pair_scores: Mapping[Pair, float], members: Optional[Iterable[UserId]] = None
) -> float:
    """Median mobility similarity over all member pairs of a group.

    Parameters
    ----------
    pair_scores
        Mobility similarity per canonically ordered pair
    members
        Group members; when given, every unordered member pair is looked up and
        pairs without a score count as 0. When omitted, all values of
        ``pair_scores`` are used.

    Returns
    -------
    float
        The median; the mean of the two central values for an even count

    Raises
    ------
    ValueError
        If the group has fewer than two members

    Examples
    --------
    >>> group_similarity({("a", "b"): 0.1, ("a", "c"): 0.2, ("b", "c"): 0.6})
    0.2
    >>> group_similarity({("a", "b"): 0.2}, members=["a", "b", "c"])
    0.0
    """
    if members is None:
        values = list(pair_scores.values())
    else:
        ordered = sorted(set(members))
        if len(ordered) < 2:
            raise ValueError(f"A group needs at least 2 members, got {len(ordered)}")
        values = [pair_scores.get(pair, 0.0) for pair in combinations(ordered, 2)]
    if not values:
        raise ValueError("A group needs at least 2 members, got no member pairs")
    return float(np.median(values))
