import io
import json
import os
import shutil
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from typing import List

import pandas as pd

from groupsense.cli import EXIT_ERROR, EXIT_OK, EXIT_USAGE, config_from_args, build_parser, main
from groupsense.groups import read_w4

CORPUS_FLAGS = ["--n-users", "10", "--n-days", "4", "--n-groups", "2", "--rng-seed", "5"]


def run_main(argv: List[str]):
    stdout, stderr = io.StringIO(), io.StringIO()
    with redirect_stdout(stdout), redirect_stderr(stderr):
        code = main(argv)
    return code, stdout.getvalue(), stderr.getvalue()


class CliTest(unittest.TestCase):
    def setUp(self) -> None:
        self.test_dir = tempfile.mkdtemp()
        self.corpus_dir = os.path.join(self.test_dir, "corpus")
        code, out, _ = run_main(["synth", "--out-dir", self.corpus_dir, *CORPUS_FLAGS])
        self.assertEqual(code, EXIT_OK)
        self.paths = dict(line.split("\t") for line in out.splitlines())

    def tearDown(self) -> None:
        shutil.rmtree(self.test_dir)

    def out(self, *names: str) -> str:
        return os.path.join(self.test_dir, *names)

    def test_synth(self) -> None:
        self.assertEqual(set(self.paths), {"traces", "truth", "registry"})
        self.assertTrue(all(os.path.exists(p) for p in self.paths.values()))

    def test_usage_errors(self) -> None:
        self.assertEqual(run_main([])[0], EXIT_USAGE)
        self.assertEqual(run_main(["detect"])[0], EXIT_USAGE)
        self.assertEqual(run_main(["run"])[0], EXIT_USAGE)
        self.assertEqual(run_main(["rollup", "--by", "month", "--w4", "x"])[0], EXIT_USAGE)
        self.assertEqual(run_main(["--version"])[0], EXIT_OK)

    def test_invalid_config(self) -> None:
        code, _, err = run_main(
            ["run", self.paths["traces"], "--weights", "0.3", "0.3", "0.3",
             "--output-dir", self.out("run")]
        )
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("[run]", err)
        self.assertIn("sum to 1", err)

    def test_stage_error(self) -> None:
        code, _, err = run_main(
            ["run", self.out("missing.log"), "--output-dir", self.out("run")]
        )
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("[ingest]", err)

    def test_config_precedence(self) -> None:
        config_path = self.out("config.json")
        with open(config_path, "w") as f:
            json.dump({"window_days": 7, "phi_l": 0.02, "weights": {"alpha": 0.5, "beta": 0.5, "gamma": 0.0}}, f)
        args = build_parser().parse_args(
            ["run", "x.log", "--config", config_path, "--window-days", "3", "--bypass-filter"]
        )
        config = config_from_args(args)
        self.assertEqual(config.window_days, 3)
        self.assertEqual(config.phi_l, 0.02)
        self.assertEqual(tuple(config.weights), (0.5, 0.5, 0.0))
        self.assertTrue(config.bypass_filter)
        self.assertFalse(config.cap_spatial)

    def test_percentile_thresholds_from_flags(self) -> None:
        config_path = self.out("config.json")
        with open(config_path, "w") as f:
            json.dump({"phi_l": 0.02, "phi_u": 0.2}, f)
        args = build_parser().parse_args(
            ["run", "x.log", "--config", config_path, "--phi-l", "none", "--phi-u", "None"]
        )
        config = config_from_args(args)
        self.assertIsNone(config.phi_l)
        self.assertIsNone(config.phi_u)

        args = build_parser().parse_args(["run", "x.log", "--phi-l", "NONE", "--phi-u", "0.3"])
        config = config_from_args(args)
        self.assertIsNone(config.phi_l)
        self.assertEqual(config.phi_u, 0.3)
        self.assertEqual(config_from_args(build_parser().parse_args(["run", "x.log"])).phi_l, 0.05)

        code, _, _ = run_main(
            ["run", self.paths["traces"], "--registry", self.paths["registry"],
             "--phi-l", "none", "--phi-u", "none", "--output-dir", self.out("percentiles")]
        )
        self.assertEqual(code, EXIT_OK)
        with open(self.out("percentiles", "run_report.json")) as f:
            report = json.load(f)
        self.assertIsNone(report["config"]["phi_l"])
        self.assertIsNone(report["config"]["phi_u"])
        self.assertGreater(len(report["stats"]["thresholds"]), 0)

    def test_stages_match_run(self) -> None:
        registry = ["--registry", self.paths["registry"]]
        code, _, _ = run_main(
            ["run", self.paths["traces"], *registry, "--output-dir", self.out("run")]
        )
        self.assertEqual(code, EXIT_OK)

        staged = ["--output-dir", self.out("staged")]
        commands = [
            ["ingest", self.paths["traces"], *registry],
            ["sessions", "--trajectories", self.out("staged", "trajectories.tsv")],
            ["cooccur", "--sessions", self.out("staged", "sessions.tsv")],
            [
                "features",
                "--sessions", self.out("staged", "sessions.tsv"),
                "--cooccurrences", self.out("staged", "cooccurrences.tsv"),
            ],
            ["similarity", "--features", self.out("staged", "features.tsv")],
            [
                "groups",
                "--cooccurrences", self.out("staged", "cooccurrences.tsv"),
                "--windows", self.out("staged", "windows.tsv"),
                "--similarity", self.out("staged", "similarity.tsv"),
            ],
        ]
        for command in commands:
            with self.subTest(stage=command[0]):
                self.assertEqual(run_main([*command, *staged])[0], EXIT_OK)
        for name in ["sessions.tsv", "cooccurrences.tsv", "w4.tsv"]:
            with open(self.out("run", name)) as f, open(self.out("staged", name)) as g:
                self.assertEqual(f.read(), g.read(), name)

    def test_score_and_rollup(self) -> None:
        run_main(
            ["run", self.paths["traces"], "--registry", self.paths["registry"],
             "--output-dir", self.out("run")]
        )
        w4 = self.out("run", "w4.tsv")
        code, out, _ = run_main(
            ["score", "--w4", w4, "--truth", self.paths["truth"],
             "--audit", self.out("run", "audit.jsonl"), "--out", self.out("eval.json")]
        )
        self.assertEqual(code, EXIT_OK)
        values = dict(line.split("\t") for line in out.splitlines())
        self.assertTrue(0 <= float(values["recall"]) <= 1)
        self.assertTrue(os.path.exists(self.out("eval.json")))

        code, _, _ = run_main(
            ["score", "--w4", w4, "--truth", self.paths["truth"], "--match-rule", "nearest"]
        )
        self.assertEqual(code, EXIT_USAGE)

        code, _, _ = run_main(["rollup", "--w4", w4, "--by", "hour", "--out", self.out("hours.tsv")])
        self.assertEqual(code, EXIT_OK)
        hours = pd.read_csv(self.out("hours.tsv"), sep="\t")
        self.assertEqual(list(hours.columns), ["bucket", "minutes"])
        total = sum((g.departure - g.entry) / 60 for g in read_w4(w4))
        self.assertAlmostEqual(hours.minutes.sum(), total)

    def test_ablate(self) -> None:
        code, out, _ = run_main(
            ["ablate", self.paths["traces"], "--registry", self.paths["registry"],
             "--truth", self.paths["truth"], "--suite", "session-cooccurrence,full",
             "--out", self.out("ablation.tsv")]
        )
        self.assertEqual(code, EXIT_OK)
        table = pd.read_csv(self.out("ablation.tsv"), sep="\t")
        self.assertEqual(list(table.variant), ["session-cooccurrence", "full"])
        self.assertIn("session-cooccurrence", out)

        code, _, err = run_main(
            ["ablate", self.paths["traces"], "--truth", self.paths["truth"], "--suite", "full,oops"]
        )
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("Unknown ablation variant", err)


if __name__ == "__main__":
    unittest.main()
