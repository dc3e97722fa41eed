"""Command-line entry point: one subcommand per stage plus end-to-end runs."""

import argparse
import logging
import os
import sys
from typing import Any, Callable, Dict, Optional, Sequence, Union

from groupsense.cooccur import read_cooccurrences, write_cooccurrences
from groupsense.features import read_features, read_windows, write_features, write_windows
from groupsense.groups import read_audit_log, read_w4, rollup_reports, write_audit_log, write_w4
from groupsense.ingest import LocationRegistry, read_trajectories, write_trajectories
from groupsense.pipeline import (
    DEFAULT_SUITE,
    OUTPUT_FILES,
    DetectorConfig,
    PipelineError,
    cooccur_stage,
    features_stage,
    groups_stage,
    ingest_stage,
    run_ablation,
    run_pipeline,
    sessions_stage,
    similarity_stage,
    validate_config,
)
from groupsense.sessions import read_sessions, write_sessions
from groupsense.similarity import read_similarity, write_similarity
from groupsense.synth import (
    PopulationSpec,
    generate,
    load_population_spec,
    read_ground_truth,
    score,
    write_corpus,
    write_eval_report,
)
from groupsense.utils import from_iso
from groupsense.utils.config_utils import load_config, merge_config
from groupsense.version import VERSION

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2

# Threshold flags take this value to fall back to window percentiles
NONE_VALUE = "none"


def _float_or_none(value: str) -> Union[float, str]:
    if value.strip().lower() == NONE_VALUE:
        return NONE_VALUE
    return float(value)


# Command-line flags mapped onto DetectorConfig fields
_CONFIG_FLAGS = [
    ("--input-format", "input_format", str),
    ("--granularity", "granularity", str),
    ("--period-minutes", "period_minutes", int),
    ("--gap-max-minutes", "gap_max_minutes", int),
    ("--work-min-minutes", "work_min_minutes", int),
    ("--timezone", "timezone", str),
    ("--preset", "preset", str),
    ("--phi-l", "phi_l", _float_or_none),
    ("--phi-u", "phi_u", _float_or_none),
    ("--percentile-l", "percentile_l", float),
    ("--percentile-u", "percentile_u", float),
    ("--long-min", "long_min", float),
    ("--short-min", "short_min", float),
    ("--window-days", "window_days", int),
    ("--minutes-mode", "minutes_mode", str),
    ("--overlap-frac", "overlap_frac", float),
    ("--max-reject-ratio", "max_reject_ratio", float),
    ("--output-dir", "output_dir", str),
    ("--n-parallel", "n_parallel", int),
    ("--scheduler", "scheduler", str),
]
_CONFIG_SWITCHES = [
    ("--cap-spatial", "cap_spatial"),
    ("--suppress-subsumed-pairs", "suppress_subsumed_pairs"),
    ("--bypass-filter", "bypass_filter"),
    ("--progress-bar", "progress_bar"),
]


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file of DetectorConfig settings")
    for flag, dest, kind in _CONFIG_FLAGS:
        parser.add_argument(flag, dest=dest, type=kind, default=None)
    for flag, dest in _CONFIG_SWITCHES:
        parser.add_argument(flag, dest=dest, action="store_const", const=True, default=None)
    parser.add_argument(
        "--weights",
        nargs=3,
        type=float,
        metavar=("ALPHA", "BETA", "GAMMA"),
        default=None,
    )


def config_from_args(args: argparse.Namespace) -> DetectorConfig:
    """Defaults, then the ``--config`` file, then command-line flags."""
    config = DetectorConfig()
    if getattr(args, "config", None):
        config = load_config(config, args.config)  # type: ignore
    updates: Dict[str, Any] = {}
    for _, dest, kind in _CONFIG_FLAGS:
        value = getattr(args, dest, None)
        if kind is _float_or_none and value == NONE_VALUE:
            updates[dest] = None
        elif value is not None:
            updates[dest] = value
    for _, dest in _CONFIG_SWITCHES:
        if getattr(args, dest, None) is not None:
            updates[dest] = True
    if getattr(args, "weights", None) is not None:
        alpha, beta, gamma = args.weights
        updates["weights"] = {"alpha": alpha, "beta": beta, "gamma": gamma}
    return validate_config(merge_config(config, updates))  # type: ignore


def _out(config: DetectorConfig, path: Optional[str], name: str) -> str:
    if path:
        return path
    os.makedirs(config.output_dir, exist_ok=True)
    return os.path.join(config.output_dir, OUTPUT_FILES[name])


def _window(args: argparse.Namespace) -> Optional[Any]:
    if args.since is None and args.until is None:
        return None
    start = from_iso(args.since) if args.since else -sys.maxsize
    end = from_iso(args.until) if args.until else sys.maxsize
    return start, end


def _registry(args: argparse.Namespace) -> Optional[LocationRegistry]:
    return LocationRegistry.from_file(args.registry) if args.registry else None


def cmd_ingest(args: argparse.Namespace) -> None:
    config = config_from_args(args)
    trajectories = ingest_stage(config, args.inputs, _registry(args))
    write_trajectories(trajectories, _out(config, args.out, "trajectories"))


def cmd_sessions(args: argparse.Namespace) -> None:
    config = config_from_args(args)
    sessions = sessions_stage(config, read_trajectories(args.trajectories))
    write_sessions(sessions, _out(config, args.out, "sessions"))


def cmd_cooccur(args: argparse.Namespace) -> None:
    config = config_from_args(args)
    cooccurrences = cooccur_stage(config, read_sessions(args.sessions))
    write_cooccurrences(cooccurrences, _out(config, args.out, "cooccurrences"))


def cmd_features(args: argparse.Namespace) -> None:
    config = config_from_args(args)
    windows, tables = features_stage(
        config, read_sessions(args.sessions), read_cooccurrences(args.cooccurrences)
    )
    write_features(tables, _out(config, args.out, "features"))
    write_windows(windows, _out(config, args.windows_out, "windows"))


def cmd_similarity(args: argparse.Namespace) -> None:
    config = config_from_args(args)
    similarity = similarity_stage(config, read_features(args.features))
    write_similarity(similarity, _out(config, args.out, "similarity"))


def cmd_groups(args: argparse.Namespace) -> None:
    config = config_from_args(args)
    groups = groups_stage(
        config,
        read_cooccurrences(args.cooccurrences),
        read_windows(args.windows),
        read_similarity(args.similarity),
    )
    n_records = write_w4(
        groups, _out(config, None, "w4"), _out(config, None, "w4_jsonl")
    )
    write_audit_log(groups, _out(config, None, "audit"))
    logging.info(f"Wrote {n_records} W4 records of {len(groups)} candidate groups")


def cmd_run(args: argparse.Namespace) -> None:
    config = config_from_args(args)
    result = run_pipeline(config, args.inputs, registry_path=args.registry)
    logging.info(f"Outputs written to {config.output_dir}: {', '.join(sorted(result.paths))}")


def cmd_synth(args: argparse.Namespace) -> None:
    spec = load_population_spec(args.spec) if args.spec else PopulationSpec()
    updates = {
        key: getattr(args, key)
        for key in ["n_users", "n_days", "n_groups", "rng_seed", "source"]
        if getattr(args, key) is not None
    }
    spec = merge_config(spec, updates)  # type: ignore
    paths = write_corpus(generate(spec), args.out_dir, spec.source)  # type: ignore
    for name, path in sorted(paths.items()):
        print(f"{name}\t{path}")


def cmd_score(args: argparse.Namespace) -> None:
    detected = read_w4(args.w4)
    candidates = read_audit_log(args.audit) if args.audit else None
    report = score(
        detected,
        read_ground_truth(args.truth),
        match_rule=args.match_rule,
        overlap_frac=args.overlap_frac,
        candidates=candidates,
        window=_window(args),
    )
    if args.out:
        write_eval_report(report, args.out)
    for name, value in report._asdict().items():
        print(f"{name}\t{value}")


def cmd_ablate(args: argparse.Namespace) -> None:
    config = config_from_args(args)
    suite = args.suite.split(",") if args.suite else list(DEFAULT_SUITE)
    table = run_ablation(
        config,
        args.inputs,
        read_ground_truth(args.truth),
        suite=suite,
        registry_path=args.registry,
        match_rule=args.match_rule,
        window=_window(args),
    )
    if args.out:
        table.to_csv(args.out, sep="\t", index=False)
    print(table.to_string(index=False))


def cmd_rollup(args: argparse.Namespace) -> None:
    config = config_from_args(args)
    groups = read_audit_log(args.audit) if args.audit else read_w4(args.w4)
    table = rollup_reports(groups, args.by, config.timezone, args.per_member)
    if args.out:
        table.to_csv(args.out, sep="\t", index=False)
    print(table.to_string(index=False))


def _scoring_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--truth", required=True, help="Ground-truth TSV file")
    parser.add_argument("--match-rule", choices=["overlap", "assignment"], default="overlap")
    parser.add_argument("--since", help="Score sessions entering at or after this time")
    parser.add_argument("--until", help="Score sessions entering before this time")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupsense", description="Detect small groups from mobility traces."
    )
    parser.add_argument("--version", action="version", version=VERSION)
    parser.add_argument("--log-level", default="INFO")
    subparsers = parser.add_subparsers(dest="command")

    def add(
        name: str, func: Callable[[argparse.Namespace], None], description: str
    ) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=description)
        sub.set_defaults(func=func, stage=name)
        return sub

    sub = add("ingest", cmd_ingest, "Parse traces into trajectories")
    sub.add_argument("inputs", nargs="+")
    sub.add_argument("--registry")
    sub.add_argument("--out")
    _add_config_flags(sub)

    sub = add("sessions", cmd_sessions, "Turn trajectories into sessions")
    sub.add_argument("--trajectories", required=True)
    sub.add_argument("--out")
    _add_config_flags(sub)

    sub = add("cooccur", cmd_cooccur, "Detect pairwise co-occurrences")
    sub.add_argument("--sessions", required=True)
    sub.add_argument("--out")
    _add_config_flags(sub)

    sub = add("features", cmd_features, "Compute windowed user and pair features")
    sub.add_argument("--sessions", required=True)
    sub.add_argument("--cooccurrences", required=True)
    sub.add_argument("--out")
    sub.add_argument("--windows-out")
    _add_config_flags(sub)

    sub = add("similarity", cmd_similarity, "Score pair similarity per window")
    sub.add_argument("--features", required=True)
    sub.add_argument("--out")
    _add_config_flags(sub)

    sub = add("groups", cmd_groups, "Merge, filter and emit group sessions")
    sub.add_argument("--cooccurrences", required=True)
    sub.add_argument("--windows", required=True)
    sub.add_argument("--similarity", required=True)
    _add_config_flags(sub)

    sub = add("run", cmd_run, "Run every stage end to end")
    sub.add_argument("inputs", nargs="+")
    sub.add_argument("--registry")
    _add_config_flags(sub)

    sub = add("synth", cmd_synth, "Generate a synthetic corpus with ground truth")
    sub.add_argument("--spec", help="JSON file of PopulationSpec settings")
    sub.add_argument("--out-dir", required=True)
    sub.add_argument("--n-users", type=int)
    sub.add_argument("--n-days", type=int)
    sub.add_argument("--n-groups", type=int)
    sub.add_argument("--rng-seed", type=int)
    sub.add_argument("--source", choices=["wifi", "checkin"])

    sub = add("score", cmd_score, "Score W4 output against ground truth")
    sub.add_argument("--w4", required=True)
    sub.add_argument("--audit", help="Audit log, used for accuracy over all candidates")
    sub.add_argument("--overlap-frac", type=float, default=0.5)
    sub.add_argument("--out")
    _scoring_flags(sub)

    sub = add("ablate", cmd_ablate, "Compare detector variants against ground truth")
    sub.add_argument("inputs", nargs="+")
    sub.add_argument("--registry")
    sub.add_argument("--suite", help="Comma-separated variant names")
    sub.add_argument("--out")
    _scoring_flags(sub)
    _add_config_flags(sub)

    sub = add("rollup", cmd_rollup, "Total group minutes per week, hour or activity")
    source = sub.add_mutually_exclusive_group(required=True)
    source.add_argument("--w4")
    source.add_argument("--audit")
    sub.add_argument("--by", choices=["week", "hour", "activity"], default="week")
    sub.add_argument("--per-member", action="store_true")
    sub.add_argument("--out")
    _add_config_flags(sub)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    logging.basicConfig(
        level=args.log_level.upper(), format="%(asctime)s %(levelname)s %(message)s"
    )
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        args.func(args)
    except PipelineError as e:
        print(f"groupsense: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, OSError) as e:
        print(f"groupsense: [{args.stage}] {e}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK

