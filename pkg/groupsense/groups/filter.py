import logging
from itertools import combinations
from typing import Callable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from groupsense.similarity import group_similarity
from groupsense.types import UserId

from .core import ACCEPTED, REJECTED, SUPPRESSED, GroupSession

LONG_DURATION = "long_duration"
LOW_SIMILARITY = "low_similarity"
MID_DURATION_OR_HIGH_SIMILARITY = "mid_duration_or_high_similarity"
FALLTHROUGH = "fallthrough"
BYPASS = "bypass"
SUBSUMED = "subsumed"


class FilterThresholds(NamedTuple):
    """Similarity bounds and duration cutoffs (minutes) of the group filter."""

    phi_l: float
    phi_u: float
    long_min: float = 60
    short_min: float = 15


def validate_thresholds(thresholds: FilterThresholds) -> FilterThresholds:
    if thresholds.phi_l > thresholds.phi_u:
        raise ValueError(
            f"phi_l ({thresholds.phi_l}) must not exceed phi_u ({thresholds.phi_u})"
        )
    return thresholds


def filter_group(g: GroupSession, thresholds: FilterThresholds) -> Tuple[str, str]:
    """Accept or reject a scored group.

    Rules are evaluated top-down and the first match wins:

    1. duration > ``long_min`` -> accept
    2. score < ``phi_l`` -> reject
    3. duration > ``short_min`` or score > ``phi_u`` -> accept
    4. otherwise -> reject

    Returns
    -------
    Tuple[str, str]
        The decision and the name of the rule that fired

    Examples
    --------
    >>> t = FilterThresholds(0.05, 0.1)
    >>> g = GroupSession(("a", "b"), 0, 90 * 60, "L", frozenset(), "dining", "dining")
    >>> filter_group(g._replace(group_score=0.01), t)
    ('accepted', 'long_duration')
    >>> short = g._replace(departure=10 * 60)
    >>> filter_group(short._replace(group_score=0.03), t)
    ('rejected', 'low_similarity')
    >>> filter_group(short._replace(group_score=0.12), t)
    ('accepted', 'mid_duration_or_high_similarity')
    >>> filter_group(short._replace(group_score=0.07), t)
    ('rejected', 'fallthrough')
    """
    duration = g.duration_minutes
    if duration > thresholds.long_min:
        return ACCEPTED, LONG_DURATION
    if g.group_score < thresholds.phi_l:
        return REJECTED, LOW_SIMILARITY
    if duration > thresholds.short_min or g.group_score > thresholds.phi_u:
        return ACCEPTED, MID_DURATION_OR_HIGH_SIMILARITY
    return REJECTED, FALLTHROUGH


def compute_thresholds_from_percentiles(
    scores: Sequence[float],
    p_l: float = 75.0,
    p_u: float = 95.0,
    long_min: float = 60,
    short_min: float = 15,
) -> FilterThresholds:
    """Derive the similarity bounds from percentiles of pairwise mobility scores.

    Percentiles use linear interpolation.

    Raises
    ------
    ValueError
        If ``scores`` is empty or ``p_l > p_u``

    Examples
    --------
    >>> compute_thresholds_from_percentiles([0.0, 0.05, 0.1, 0.2], 75, 95).phi_l
    0.125
    """
    if len(scores) == 0:
        raise ValueError("Cannot compute percentile thresholds without any scores.")
    if p_l > p_u:
        raise ValueError(f"Percentile p_l ({p_l}) must not exceed p_u ({p_u})")
    phi_l, phi_u = np.percentile(np.asarray(scores, dtype=float), [p_l, p_u])
    return FilterThresholds(float(phi_l), float(phi_u), long_min, short_min)


def resolve_thresholds(
    scores: Sequence[float],
    phi_l: Optional[float] = 0.05,
    phi_u: Optional[float] = 0.1,
    percentile_l: float = 75.0,
    percentile_u: float = 95.0,
    long_min: float = 60,
    short_min: float = 15,
) -> FilterThresholds:
    """Absolute bounds win; a bound left as ``None`` comes from the score percentiles.

    A window without any pair score falls back to zero for the missing bounds.
    """
    if phi_l is None or phi_u is None:
        if len(scores) > 0:
            derived = compute_thresholds_from_percentiles(
                scores, percentile_l, percentile_u, long_min, short_min
            )
        else:
            logging.warning("No pair scores in window; percentile bounds set to 0")
            derived = FilterThresholds(0.0, 0.0, long_min, short_min)
        phi_l = derived.phi_l if phi_l is None else phi_l
        phi_u = derived.phi_u if phi_u is None else phi_u
    return validate_thresholds(FilterThresholds(phi_l, phi_u, long_min, short_min))


def missing_pair_scores(
    g: GroupSession, pair_scores: Mapping[Tuple[UserId, UserId], float]
) -> List[Tuple[UserId, UserId]]:
    """Member pairs of ``g`` that have no similarity score."""
    pairs = combinations(sorted(set(g.members)), 2)
    return [pair for pair in pairs if pair not in pair_scores]


def score_group(
    g: GroupSession,
    pair_scores: Mapping[Tuple[UserId, UserId], float],
    return_missing: bool = False,
) -> Union[GroupSession, Tuple[GroupSession, int]]:
    """Attach the median pairwise mobility similarity of the group's members.

    Member pairs without a score count as 0 and are reported with a warning.
    With ``return_missing=True`` the number of such pairs is returned as well.
    """
    missing = missing_pair_scores(g, pair_scores)
    if missing:
        logging.warning(
            f"Group {g.members} at {g.location_key}: "
            f"{len(missing)} member pairs without a score, scored as 0"
        )
    scored = g._replace(group_score=group_similarity(pair_scores, g.members))
    if return_missing:
        return scored, len(missing)
    return scored


def apply_filter(
    groups: Sequence[GroupSession],
    thresholds_for: Callable[[GroupSession], FilterThresholds],
    bypass: bool = False,
) -> List[GroupSession]:
    """Decide every group; with ``bypass=True`` all groups are accepted."""
    decided = []
    for g in groups:
        if bypass:
            decision, rule = ACCEPTED, BYPASS
        else:
            decision, rule = filter_group(g, thresholds_for(g))
        decided.append(g._replace(decision=decision, rule_fired=rule))
    return decided


def suppress_subsumed_pairs(groups: Sequence[GroupSession]) -> List[GroupSession]:
    """Mark accepted pair groups that lie inside an accepted larger group.

    A pair is subsumed when both members belong to a larger accepted group at the
    same location key whose span contains the pair's interval.
    """
    large = [g for g in groups if g.decision == ACCEPTED and g.size > 2]
    result = []
    for g in groups:
        if g.decision == ACCEPTED and g.size == 2 and any(
            other.location_key == g.location_key
            and set(g.members) <= set(other.members)
            and other.entry <= g.entry
            and g.departure <= other.departure
            for other in large
        ):
            g = g._replace(decision=SUPPRESSED, rule_fired=SUBSUMED)
        result.append(g)
    return result
