import json
from collections import defaultdict
from typing import DefaultDict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from munkres import Munkres  # type: ignore

from groupsense.analysis import metric_score
from groupsense.groups import ACCEPTED, GroupSession
from groupsense.types import Interval

from .generator import GroundTruthSession

OVERLAP = "overlap"
ASSIGNMENT = "assignment"
MATCH_RULES = (OVERLAP, ASSIGNMENT)


class EvalReport(NamedTuple):
    """Detection quality against planted ground truth.

    ``precision_undefined`` is set when nothing was detected, in which case
    precision is reported as 0.
    """

    accuracy: float
    precision: float
    recall: float
    f1: float
    n_detected: int
    n_truth: int
    n_matched_detected: int
    n_matched_truth: int
    precision_undefined: bool = False


def overlap_seconds(g: GroupSession, t: GroundTruthSession) -> int:
    return min(g.departure, t.departure) - max(g.entry, t.entry)


def is_match(g: GroupSession, t: GroundTruthSession, overlap_frac: float = 0.5) -> bool:
    """Whether a detected group reproduces a ground-truth session.

    Member sets must be equal, location types must agree and the two intervals
    must overlap by at least ``overlap_frac`` of the truth duration.
    """
    if tuple(sorted(g.members)) != tuple(sorted(t.members)) or g.loc_type != t.loc_type:
        return False
    overlap = overlap_seconds(g, t)
    return overlap >= 0 and overlap >= overlap_frac * (t.departure - t.entry)


def _in_window(entry: int, window: Optional[Interval]) -> bool:
    return window is None or window[0] <= entry < window[1]


def _match_pairs(
    detected: Sequence[GroupSession],
    truth: Sequence[GroundTruthSession],
    overlap_frac: float,
) -> List[Tuple[int, int]]:
    by_members: DefaultDict[Tuple[str, ...], List[int]] = defaultdict(list)
    for j, t in enumerate(truth):
        by_members[tuple(sorted(t.members))].append(j)
    pairs = []
    for i, g in enumerate(detected):
        for j in by_members.get(tuple(sorted(g.members)), []):
            if is_match(g, truth[j], overlap_frac):
                pairs.append((i, j))
    return pairs


def _assign(
    pairs: List[Tuple[int, int]],
    detected: Sequence[GroupSession],
    truth: Sequence[GroundTruthSession],
) -> List[Tuple[int, int]]:
    """One-to-one matching maximizing total overlap, solved per member set."""
    blocks: DefaultDict[Tuple[str, ...], List[Tuple[int, int]]] = defaultdict(list)
    for i, j in pairs:
        blocks[tuple(sorted(truth[j].members))].append((i, j))
    munkres_solver = Munkres()
    assigned = []
    for block in blocks.values():
        rows = sorted({i for i, _ in block})
        cols = sorted({j for _, j in block})
        profit = np.zeros([len(rows), len(cols)])
        for i, j in block:
            profit[rows.index(i), cols.index(j)] = 1 + overlap_seconds(
                detected[i], truth[j]
            )
        # Minus because Munkres minimizes cost
        for r, c in munkres_solver.compute((-profit).tolist()):
            if profit[r, c] > 0:
                assigned.append((rows[r], cols[c]))
    return assigned


def score(
    detected: Sequence[GroupSession],
    truth: Sequence[GroundTruthSession],
    match_rule: str = OVERLAP,
    overlap_frac: float = 0.5,
    candidates: Optional[Sequence[GroupSession]] = None,
    window: Optional[Interval] = None,
) -> EvalReport:
    """Score detected groups against ground-truth sessions.

    Parameters
    ----------
    detected
        Accepted group sessions, e.g. read back from a W4 file
    truth
        Planted ground-truth sessions
    match_rule
        ``overlap``: every detection that matches some truth session counts;
        ``assignment``: detections and truth sessions are matched one-to-one
    overlap_frac
        Minimum overlap, as a fraction of the truth duration
    candidates
        Every candidate group with its decision (the audit log); accuracy counts
        correct accept/reject decisions over these plus one missed entry per
        unmatched truth session. Defaults to ``detected``
    window
        Only sessions entering within ``[start, end)`` are scored

    Returns
    -------
    EvalReport
        Accuracy, precision, recall and F1 with the underlying counts

    Raises
    ------
    ValueError
        If ``match_rule`` is unknown or ``overlap_frac`` is outside ``[0, 1]``
    """
    if match_rule not in MATCH_RULES:
        raise ValueError(f"Unknown match rule: {match_rule}")
    if not 0 <= overlap_frac <= 1:
        raise ValueError(f"overlap_frac must be in [0, 1], got {overlap_frac}")
    detected = [g for g in detected if _in_window(g.entry, window)]
    truth = [t for t in truth if _in_window(t.entry, window)]

    pairs = _match_pairs(detected, truth, overlap_frac)
    if match_rule == ASSIGNMENT:
        pairs = _assign(pairs, detected, truth)
    matched_detected = len({i for i, _ in pairs})
    matched_truth = len({j for _, j in pairs})

    precision_undefined = not detected
    precision = 0.0 if precision_undefined else matched_detected / len(detected)
    recall = matched_truth / len(truth) if truth else 0.0
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)

    if candidates is None:
        candidates = detected
    else:
        candidates = [g for g in candidates if _in_window(g.entry, window)]
    candidate_pairs = _match_pairs(candidates, truth, overlap_frac)
    matched_candidates = {i for i, _ in candidate_pairs}
    golds = [int(i in matched_candidates) for i in range(len(candidates))]
    preds = [int(g.decision == ACCEPTED) for g in candidates]
    n_missed = len(truth) - len({j for _, j in candidate_pairs})
    golds += [1] * n_missed
    preds += [0] * n_missed
    accuracy = metric_score(golds, preds, metric="accuracy")

    return EvalReport(
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        f1=f1,
        n_detected=len(detected),
        n_truth=len(truth),
        n_matched_detected=matched_detected,
        n_matched_truth=matched_truth,
        precision_undefined=precision_undefined,
    )


def write_eval_report(report: EvalReport, path: str) -> None:
    with open(path, "w") as f:
        json.dump(report._asdict(), f, indent=2, sort_keys=True)
