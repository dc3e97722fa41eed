import logging
import os
import time
from contextlib import contextmanager
from functools import partial
from typing import Callable, Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from groupsense.apply import apply_to_shards
from groupsense.cooccur import (
    CoOccurrence,
    detect_pairwise_fast,
    device_map_from_sessions,
    merge_devices,
    shard_by_location,
    write_cooccurrences,
)
from groupsense.features import (
    FeatureTable,
    FeatureWindow,
    processing_days,
    unique_windows,
    window_features,
    windows_by_day,
    write_features,
    write_windows,
)
from groupsense.groups import (
    ACCEPTED,
    FilterThresholds,
    GroupSession,
    apply_filter,
    merge_into_groups,
    resolve_thresholds,
    score_group,
    suppress_subsumed_pairs,
    write_audit_log,
    write_w4,
)
from groupsense.ingest import (
    LocationRegistry,
    MobilityEvent,
    Trajectory,
    TrajectoryMetadata,
    annotate_activity,
    build_trajectory,
    group_events_by_user,
    load_events,
    write_trajectories,
)
from groupsense.sessions import Session, extract_sessions, write_sessions
from groupsense.similarity import SimilarityTables, similarity_table, write_similarity
from groupsense.types import DeviceId, UserId
from groupsense.utils import local_day

from .config import DetectorConfig, validate_config
from .report import RunReport

OUTPUT_FILES = {
    "trajectories": "trajectories.tsv",
    "sessions": "sessions.tsv",
    "cooccurrences": "cooccurrences.tsv",
    "features": "features.tsv",
    "windows": "windows.tsv",
    "similarity": "similarity.tsv",
    "w4": "w4.tsv",
    "w4_jsonl": "w4.jsonl",
    "audit": "audit.jsonl",
    "report": "run_report.json",
}


class PipelineError(RuntimeError):
    """A module error raised inside a pipeline stage.

    Parameters
    ----------
    stage
        Name of the failing stage
    cause
        The original exception
    """

    def __init__(self, stage: str, cause: Exception) -> None:
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")


class PipelineResult(NamedTuple):
    """Groups, report and written file paths of a pipeline run."""

    groups: List[GroupSession]
    report: RunReport
    paths: Dict[str, str]


class _Outputs:
    """Stage outputs written under one directory, removable as a unit."""

    def __init__(self, output_dir: Optional[str]) -> None:
        self.output_dir = output_dir
        self.paths: Dict[str, str] = {}

    def reserve(self, name: str) -> str:
        """Create the output directory and register the path of output ``name``."""
        assert self.output_dir is not None
        os.makedirs(self.output_dir, exist_ok=True)
        path = os.path.join(self.output_dir, OUTPUT_FILES[name])
        self.paths[name] = path
        return path

    def write(self, name: str, writer: Callable[..., object], *args: object) -> None:
        if self.output_dir is not None:
            writer(*args, self.reserve(name))

    def remove(self) -> None:
        for path in self.paths.values():
            if os.path.exists(path):
                os.remove(path)
        self.paths = {}


@contextmanager
def _stage(name: str, report: RunReport) -> Iterator[Dict[str, int]]:
    counter = {"count": 0}
    start = time.perf_counter()
    try:
        yield counter
    except PipelineError:
        raise
    except Exception as e:
        logging.error(f"Stage {name} failed: {e}")
        raise PipelineError(name, e) from e
    report.add_stage(name, time.perf_counter() - start, counter["count"])


def _trajectory_shard(
    shard: Tuple[UserId, List[MobilityEvent]],
    gap_max_minutes: int,
    timezone: str,
    work_min_minutes: int,
) -> Tuple[Trajectory, TrajectoryMetadata]:
    user_id, events = shard
    trajectory, meta = build_trajectory(  # type: ignore
        events, gap_max_minutes, user_id=user_id, return_meta=True
    )
    return annotate_activity(trajectory, timezone, work_min_minutes), meta


def build_trajectories(
    config: DetectorConfig, events: Sequence[MobilityEvent], report: Optional[RunReport] = None
) -> List[Trajectory]:
    """Replay and annotate every user's events, one shard per user."""
    by_user = group_events_by_user(events)
    shards = [(user_id, by_user[user_id]) for user_id in sorted(by_user)]
    f = partial(
        _trajectory_shard,
        gap_max_minutes=config.gap_max_minutes,
        timezone=config.timezone,
        work_min_minutes=config.work_min_minutes,
    )
    results = apply_to_shards(
        f,
        shards,
        name="trajectories",
        n_parallel=config.n_parallel,
        scheduler=config.scheduler,
        progress_bar=config.progress_bar,
    )
    if report is not None:
        report.add_stats(
            {
                "unmatched_closes": sum(meta.unmatched_closes for _, meta in results),
                "unknown_gaps": sum(meta.unknown_gaps for _, meta in results),
            }
        )
    return [trajectory for trajectory, _ in results]


def ingest_stage(
    config: DetectorConfig,
    inputs: Sequence[str],
    registry: Optional[LocationRegistry] = None,
    report: Optional[RunReport] = None,
) -> List[Trajectory]:
    """Parse every input file and build per-user annotated trajectories.

    Device bindings learned from any file apply to the events of every file.
    """
    if not inputs:
        raise ValueError("No input files given.")
    events: List[MobilityEvent] = []
    device_map: Dict[DeviceId, UserId] = {}
    files = []
    for path in inputs:
        file_events, meta = load_events(
            path, config.input_format, registry, None, config.max_reject_ratio
        )
        events.extend(file_events)
        for device_id, user_id in meta.device_map.items():
            device_map.setdefault(device_id, user_id)
        files.append(
            {k: v for k, v in meta._asdict().items() if k != "device_map"}
        )
    if device_map:
        events = [
            e._replace(user_id=device_map[e.device_id])
            if e.user_id == e.device_id and e.device_id in device_map
            else e
            for e in events
        ]
    if report is not None:
        report.add_stats(
            {
                "input_files": files,
                "lines": sum(m["n_lines"] for m in files),
                "rejected_lines": sum(m["n_rejected"] for m in files),
                "skipped_lines": sum(m["n_skipped"] for m in files),
                "events": len(events),
                "device_map_size": len(device_map),
            }
        )
    return build_trajectories(config, events, report)


def sessions_stage(config: DetectorConfig, trajectories: Sequence[Trajectory]) -> List[Session]:
    f = partial(
        extract_sessions,
        granularity=config.granularity,
        period_minutes=config.period_minutes,
    )
    per_user = apply_to_shards(
        f,
        list(trajectories),
        name="sessions",
        n_parallel=config.n_parallel,
        scheduler=config.scheduler,
        progress_bar=config.progress_bar,
    )
    return [session for sessions in per_user for session in sessions]


def cooccur_stage(config: DetectorConfig, sessions: Sequence[Session]) -> List[CoOccurrence]:
    """Detect device co-occurrences per location key and lift them to users."""
    shards = shard_by_location(sessions)
    per_location = apply_to_shards(
        detect_pairwise_fast,
        [shards[key] for key in sorted(shards)],
        name="cooccur",
        n_parallel=config.n_parallel,
        scheduler=config.scheduler,
        progress_bar=config.progress_bar,
    )
    device_level = [c for cooccurrences in per_location for c in cooccurrences]
    return merge_devices(device_level, device_map_from_sessions(sessions))


def features_stage(
    config: DetectorConfig,
    sessions: Sequence[Session],
    cooccurrences: Sequence[CoOccurrence],
) -> Tuple[Dict[int, FeatureWindow], List[FeatureTable]]:
    """Assign a window to every processing day and compute each distinct window once."""
    days = processing_days(sessions, config.timezone)
    windows = windows_by_day(days, config.window_days, config.timezone)
    f = partial(
        window_features,
        list(sessions),
        list(cooccurrences),
        timezone=config.timezone,
        minutes_mode=config.minutes_mode,
    )
    tables = apply_to_shards(
        f,
        unique_windows(list(windows.values())),
        name="features",
        n_parallel=config.n_parallel,
        scheduler=config.scheduler,
        progress_bar=config.progress_bar,
    )
    return windows, tables


def similarity_stage(
    config: DetectorConfig, tables: Sequence[FeatureTable]
) -> SimilarityTables:
    return {
        table.window: similarity_table(table, config.weights, config.cap_spatial)
        for table in tables
    }


def thresholds_by_window(
    config: DetectorConfig,
    windows: Dict[int, FeatureWindow],
    similarity: SimilarityTables,
) -> Dict[FeatureWindow, FilterThresholds]:
    """Filter thresholds of every window, from config or from the window's scores."""
    return {
        window: resolve_thresholds(
            [s.mobility for s in similarity.get(window, {}).values()],
            config.phi_l,
            config.phi_u,
            config.percentile_l,
            config.percentile_u,
            config.long_min,
            config.short_min,
        )
        for window in unique_windows(list(windows.values()))
    }


def groups_stage(
    config: DetectorConfig,
    cooccurrences: Sequence[CoOccurrence],
    windows: Dict[int, FeatureWindow],
    similarity: SimilarityTables,
    report: Optional[RunReport] = None,
) -> List[GroupSession]:
    """Merge, score and filter candidate groups.

    Each group is scored with the window of the local day it starts on.
    """
    thresholds = thresholds_by_window(config, windows, similarity)

    def window_of(g: GroupSession) -> FeatureWindow:
        day = local_day(g.entry, config.timezone)
        if day not in windows:
            raise ValueError(f"No feature window covers the group starting at {g.entry}")
        return windows[day]

    mobility = {
        window: {pair: s.mobility for pair, s in table.items()}
        for window, table in similarity.items()
    }
    candidates: List[GroupSession] = []
    n_missing = 0
    for g in merge_into_groups(cooccurrences, config.timezone):
        scored, missing = score_group(  # type: ignore
            g, mobility.get(window_of(g), {}), return_missing=True
        )
        candidates.append(scored)
        n_missing += missing
    groups = apply_filter(
        candidates, lambda g: thresholds[window_of(g)], bypass=config.bypass_filter
    )
    if config.suppress_subsumed_pairs:
        groups = suppress_subsumed_pairs(groups)
    if report is not None:
        report.add_stat(
            "thresholds",
            [
                {"window_start": w.start, "window_end": w.end, **t._asdict()}
                for w, t in sorted(thresholds.items())
            ],
        )
        report.add_stat("missing_pair_scores", n_missing)
        report.add_stat(
            "decisions",
            {d: sum(g.decision == d for g in groups) for d in sorted({g.decision for g in groups})},
        )
    return groups


def detect_groups(
    config: DetectorConfig,
    trajectories: Sequence[Trajectory],
    report: Optional[RunReport] = None,
    outputs: Optional[_Outputs] = None,
) -> List[GroupSession]:
    """Run every stage after ingest on already built trajectories."""
    report = report if report is not None else RunReport()
    outputs = outputs if outputs is not None else _Outputs(None)
    with _stage("sessions", report) as counter:
        sessions = sessions_stage(config, trajectories)
        outputs.write("sessions", write_sessions, sessions)
        counter["count"] = len(sessions)
    with _stage("cooccur", report) as counter:
        cooccurrences = cooccur_stage(config, sessions)
        outputs.write("cooccurrences", write_cooccurrences, cooccurrences)
        counter["count"] = len(cooccurrences)
    with _stage("features", report) as counter:
        windows, tables = features_stage(config, sessions, cooccurrences)
        outputs.write("windows", write_windows, windows)
        outputs.write("features", write_features, tables)
        counter["count"] = sum(len(t.users) + len(t.pairs) for t in tables)
    with _stage("similarity", report) as counter:
        similarity = similarity_stage(config, tables)
        outputs.write("similarity", write_similarity, similarity)
        counter["count"] = sum(len(table) for table in similarity.values())
    with _stage("groups", report) as counter:
        groups = groups_stage(config, cooccurrences, windows, similarity, report)
        outputs.write("audit", write_audit_log, groups)
        counter["count"] = len(groups)
    return groups


def run_pipeline(
    config: DetectorConfig,
    inputs: Sequence[str],
    registry_path: Optional[str] = None,
    write_outputs: bool = True,
) -> PipelineResult:
    """Run ingest, sessions, cooccur, features, similarity, groups and emit.

    Parameters
    ----------
    config
        Detector settings; validated before any work is done
    inputs
        Syslog or check-in files
    registry_path
        Optional location registry file
    write_outputs
        Write every stage output, the W4 files, the audit log and the run report
        under ``config.output_dir``

    Returns
    -------
    PipelineResult
        All decided candidate groups, the run report and the written paths

    Raises
    ------
    ValueError
        If the config is invalid
    PipelineError
        If any stage fails; files written by the run are removed first
    """
    config = validate_config(config)
    report = RunReport()
    report.set_config(config)
    outputs = _Outputs(config.output_dir if write_outputs else None)
    try:
        with _stage("ingest", report) as counter:
            registry = (
                LocationRegistry.from_file(registry_path) if registry_path else None
            )
            trajectories = ingest_stage(config, inputs, registry, report)
            outputs.write("trajectories", write_trajectories, trajectories)
            counter["count"] = sum(len(t.entries) for t in trajectories)
        groups = detect_groups(config, trajectories, report, outputs)
        with _stage("emit", report) as counter:
            counter["count"] = sum(g.decision == ACCEPTED for g in groups)
            if write_outputs:
                write_w4(groups, outputs.reserve("w4"), outputs.reserve("w4_jsonl"))
        outputs.write("report", RunReport.write_json, report)
    except PipelineError:
        outputs.remove()
        raise
    return PipelineResult(groups, report, dict(outputs.paths))
