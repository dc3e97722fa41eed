from typing import Any, Callable, NamedTuple

import numpy as np
import sklearn.metrics as skmetrics


class Metric(NamedTuple):
    """A scikit-learn metric over binary gold/predicted decisions."""

    func: Callable[..., float]
    zero_division_kwarg: bool = False


def _to_binary_array(values: Any, name: str) -> np.ndarray:
    array = np.asarray(values)
    if array.ndim != 1:
        raise ValueError(f"{name} must be a 1D array, got shape {array.shape}")
    if array.size and not np.isin(array, [0, 1]).all():
        raise ValueError(f"{name} must only contain 0/1 decisions")
    return array.astype(int)


def metric_score(
    golds: Any, preds: Any, metric: str = "accuracy", **kwargs: Any
) -> float:
    """Evaluate a standard metric on accept/reject decisions.

    Parameters
    ----------
    golds
        1 where a candidate group matches the ground truth, else 0
    preds
        1 where the candidate group was accepted, else 0
    metric
        The name of the metric to calculate

    Returns
    -------
    float
        The value of the requested metric; 0 when there is nothing to score

    Raises
    ------
    ValueError
        The requested metric is not currently supported, or the inputs are not
        aligned binary arrays

    Examples
    --------
    >>> metric_score([1, 0, 1, 1], [1, 0, 0, 1], metric="accuracy")
    0.75
    """
    if metric not in METRICS:
        msg = f"The metric you provided ({metric}) is not currently implemented."
        raise ValueError(msg)
    golds = _to_binary_array(golds, "golds")
    preds = _to_binary_array(preds, "preds")
    if len(golds) != len(preds):
        raise ValueError(
            f"golds and preds differ in length: {len(golds)} vs. {len(preds)}"
        )
    if len(golds) == 0:
        return 0.0
    func, zero_division_kwarg = METRICS[metric]
    if zero_division_kwarg:
        kwargs.setdefault("zero_division", 0)
    return float(func(golds, preds, **kwargs))


# See https://scikit-learn.org/stable/modules/classes.html#module-sklearn.metrics
# for details on the definitions and available kwargs for all metrics from scikit-learn
METRICS = {
    "accuracy": Metric(skmetrics.accuracy_score),
    "precision": Metric(skmetrics.precision_score, True),
    "recall": Metric(skmetrics.recall_score, True),
    "f1": Metric(skmetrics.f1_score, True),
    "matthews_corrcoef": Metric(skmetrics.matthews_corrcoef),
}
