from typing import Dict, Optional

from groupsense.types import Config

WEIGHT_TOLERANCE = 1e-9


class Weights(Config):
    """Weights of the spatial, temporal and social similarities.

    Parameters
    ----------
    alpha
        Weight of spatial similarity
    beta
        Weight of temporal similarity
    gamma
        Weight of social similarity
    """

    alpha: float = 1 / 3
    beta: float = 1 / 3
    gamma: float = 1 / 3


# Equal weights stand in for the rounded 0.33-0.33-0.33 operating point
PRESETS: Dict[str, Weights] = {
    "equal": Weights(1 / 3, 1 / 3, 1 / 3),
    "spatial-temporal": Weights(0.5, 0.5, 0.0),
    "spatial-social": Weights(0.5, 0.0, 0.5),
    "temporal-social": Weights(0.0, 0.5, 0.5),
    "spatial-only": Weights(1.0, 0.0, 0.0),
    "temporal-only": Weights(0.0, 1.0, 0.0),
    "social-only": Weights(0.0, 0.0, 1.0),
}


def validate_weights(weights: Weights) -> Weights:
    """Check weights are non-negative and sum to 1.

    Raises
    ------
    ValueError
        If a weight is negative or the sum differs from 1 by more than 1e-9
    """
    if min(weights) < 0:
        raise ValueError(f"Similarity weights must be non-negative, got {tuple(weights)}")
    total = sum(weights)
    if abs(total - 1.0) > WEIGHT_TOLERANCE:
        raise ValueError(
            f"Similarity weights must sum to 1, got alpha+beta+gamma={total:.6g}"
        )
    return weights


def resolve_weights(weights: Weights, preset: Optional[str] = None) -> Weights:
    """Return the preset's weights when ``preset`` is set, else ``weights``."""
    if preset is None:
        return validate_weights(weights)
    if preset not in PRESETS:
        raise ValueError(
            f"Unknown weight preset '{preset}'. Valid presets: {', '.join(PRESETS)}"
        )
    return PRESETS[preset]
