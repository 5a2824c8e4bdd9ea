#!/usr/bin/env python3

"""
Runs acceptance sweeps on the synthetic corpus. Benchmarks are assembled from
YAML components that are layered over the default config, e.g.:

    benchmarks/benchmark.py /tmp/bench corpus.default durations.all \
        algorithms.all
"""
import logging
import os
import sys
from typing import (Dict, List)

from SUMusic.cli import (MANIFEST_NAME, cmd_gen_corpus, cmd_sweep)
from SUMusic.config import load_config
from SUMusic.log import (log_yaml, setup_logger)
from SUMusic.models.experiment import ExperimentConfig
from SUMusic.models.report import (EvaluationReport, RunReport)

logger = setup_logger("SUMusic", logging.INFO)

COMPONENTS = os.path.abspath(
    os.path.join(
        os.path.dirname(os.path.realpath(__file__)),
        "benchmarks",
        "components",
    )
)


def setup_env(components: List[str]) -> ExperimentConfig:
    """
    :param components: Names of YAML files in the components folder, without
            extension; later components take precedence.
    :return: Experiment config with all components merged.
    """
    logger.info(f"Running benchmark: {' '.join(components)}")
    paths = [
        os.path.join(COMPONENTS, f"{component}.yaml")
        for component in components
    ]
    return ExperimentConfig(load_config(paths))


def check_acceptance(report: RunReport) -> Dict[str, bool]:
    """
    Checks the qualitative ordering of conditions: summaries are at least as
    good as the best contiguous excerpt and indistinguishable from full
    songs, a contiguous excerpt is not, and accuracy does not drop from 5 s
    to 30 s summaries. Each algorithm is judged by its best swept setting.
    """
    sweep = report.experiment.sweep
    chance = 1.0 / len(report.conditions[0].matrix.classes)
    checks: Dict[str, bool] = {}
    longest = max(sweep["durations"])
    best_table = report.best_table()

    def best(algorithm: str, duration: float) -> EvaluationReport:
        return report[best_table[algorithm][duration]["condition"]]

    baselines = [
        report[f"{b}-{longest:g}s"] for b in sweep["baselines"]
    ]
    if baselines:
        top = max(c.overall for c in baselines)
        checks["baseline_significant"] = any(
            c.significance.p_value < 0.05 for c in baselines
        )
    for algorithm in sweep["algorithms"]:
        condition = best(algorithm, longest)
        if baselines:
            checks[f"{algorithm}_beats_baselines"] = condition.overall >= top
        checks[f"{algorithm}_matches_full"] = \
            condition.significance.p_value > 0.05
        shortest = min(sweep["durations"])
        if shortest != longest:
            short = best(algorithm, shortest)
            checks[f"{algorithm}_longer_is_better"] = \
                condition.overall >= short.overall
            checks[f"{algorithm}_above_twice_chance"] = \
                short.overall >= 2 * chance
    return checks


def run_benchmark(out_dir: str, components: List[str]) -> bool:
    experiment = setup_env(components)
    corpus_dir = os.path.join(out_dir, "corpus")
    manifest = os.path.join(corpus_dir, MANIFEST_NAME)
    if not os.path.isfile(manifest):
        cmd_gen_corpus(experiment, corpus_dir, force=True)
    report, failed = cmd_sweep(
        experiment,
        manifest,
        os.path.join(out_dir, "sweep"),
        force=True,
    )
    checks = check_acceptance(report)
    log_yaml(
        header="=== ACCEPTANCE ===",
        level=logging.INFO,
        logger=logger,
        accuracy={c.name: c.overall for c in report.conditions},
        checks=checks,
        failed=failed,
        timing=report.timing,
    )
    return all(checks.values()) and not failed


if __name__ == "__main__":
    if len(sys.argv) < 3:
        sys.stderr.write(
            "usage: benchmark.py OUT_DIR COMPONENT [COMPONENT ...]\n"
        )
        sys.exit(2)
    sys.exit(0 if run_benchmark(sys.argv[1], sys.argv[2:]) else 1)
