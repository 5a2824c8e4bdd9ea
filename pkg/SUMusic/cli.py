"""
CLI entry point for SUMusic.
"""
import argparse
import logging
import os
import sys
import time
from typing import (Dict, List, Mapping, Optional, Sequence, Tuple)

from SUMusic.config import load_config
from SUMusic.corpus import (
    default_profiles,
    generate_corpus,
    load_manifest,
    save_manifest,
    validate_files,
)
from SUMusic.decorators import timed
from SUMusic.errors import (
    EXIT_PARTIAL_FAILURE,
    EXIT_SUCCESS,
    OutputExistsError,
    ValidationError,
    handle_error,
)
from SUMusic.log import log_yaml
from SUMusic.models import (Algorithm, DatasetManifest)
from SUMusic.models.experiment import ExperimentConfig
from SUMusic.models.report import RunReport
from SUMusic.utils.pipeline import (extract_dataset, summarize_manifest)

logger = logging.getLogger("SUMusic")

MANIFEST_NAME = "manifest.tsv"


def prepare_out_dir(
    out_dir: str,
    force: bool = False,
) -> None:
    """
    :raises SUMusic.errors.OutputExistsError: `out_dir` exists, is not empty
            and `force` is not set.
    """
    if os.path.isdir(out_dir) and os.listdir(out_dir) and not force:
        raise OutputExistsError(
            f"Output directory '{out_dir}' exists and is not empty; use "
            "--force to write into it anyway."
        )
    os.makedirs(out_dir, exist_ok=True)


@timed(logger=logger)
def cmd_gen_corpus(
    experiment: ExperimentConfig,
    out_dir: str,
    force: bool = False,
    songs_per_class: Optional[int] = None,
) -> DatasetManifest:
    """Synthesizes the corpus and writes `manifest.tsv` next to the WAVs."""
    prepare_out_dir(out_dir, force)
    conf = experiment.corpus
    manifest = generate_corpus(
        profiles=default_profiles(experiment.config),
        songs_per_class=songs_per_class or conf["songs_per_class"],
        song_seconds=conf["song_seconds"],
        seed=conf["seed"],
        out_dir=out_dir,
        sample_rate=conf["sample_rate"],
        jitter=conf["jitter"],
        workers=experiment.workers,
    )
    save_manifest(manifest, os.path.join(out_dir, MANIFEST_NAME))
    logger.info(f"Wrote {len(manifest)} songs to '{out_dir}'.")
    return manifest


@timed(logger=logger)
def cmd_summarize(
    experiment: ExperimentConfig,
    manifest_path: str,
    algorithm: str,
    out_dir: str,
    duration: Optional[float] = None,
    force: bool = False,
    overrides: Optional[Mapping] = None,
) -> Tuple[DatasetManifest, List[str]]:
    """
    Summarizes every song of a manifest; writes one summary WAV and one
    selection record per song plus `manifest.tsv`.

    :param overrides: Summarizer parameters replacing configured ones.

    :return: Summary manifest and the songs that failed.
    """
    parsed = Algorithm.parse(algorithm)
    duration = experiment.duration if duration is None else duration
    if duration <= 0:
        raise ValidationError(f"Duration must be positive, got {duration}.")
    parameters = experiment.algorithm_parameters(parsed, overrides) \
        if parsed.is_ranker or parsed is Algorithm.avgsim else None
    manifest = load_manifest(manifest_path)
    validate_files(manifest)
    prepare_out_dir(out_dir, force)
    log_yaml(
        header="=== SUMMARIZE ===",
        level=logging.INFO,
        logger=logger,
        manifest=manifest_path,
        algorithm=parsed.value,
        duration=duration,
        parameters=parameters,
    )
    summaries, failed = summarize_manifest(
        manifest,
        parsed,
        duration,
        parameters,
        out_dir,
        working_rate=experiment.working_rate,
        workers=experiment.workers,
    )
    save_manifest(summaries, os.path.join(out_dir, MANIFEST_NAME))
    if failed:
        logger.error(f"{len(failed)} song(s) failed: {', '.join(failed)}")
    return summaries, failed


def cmd_evaluate(
    experiment: ExperimentConfig,
    conditions: Mapping[str, str],
    out_dir: str,
    force: bool = False,
    reference: Optional[str] = None,
    metadata: Optional[Mapping[str, Mapping]] = None,
) -> Tuple[RunReport, List[str]]:
    """
    Cross-validates every condition, compares each with the reference
    condition and writes `report.yaml` and `accuracy.tsv`.

    :param conditions: Manifest path per condition name.

    :return: Report and the songs whose features could not be extracted.
    :raises SUMusic.errors.ValidationError: Manifests differ in classes.
    """
    prepare_out_dir(out_dir, force)
    manifests = {
        name: load_manifest(path) for name, path in conditions.items()
    }
    class_sets = {name: sorted(m.classes) for name, m in manifests.items()}
    first = next(iter(class_sets.values()))
    for name, classes in class_sets.items():
        if classes != first:
            raise ValidationError(
                f"Condition '{name}' has classes {classes}, expected "
                f"{first}."
            )

    start = time.perf_counter()
    datasets = {}
    failed: List[str] = []
    for name, manifest in manifests.items():
        validate_files(manifest)
        logger.info(f"Extracting features of condition '{name}'.")
        datasets[name], missing = extract_dataset(
            manifest,
            experiment.features,
            working_rate=experiment.working_rate,
            workers=experiment.workers,
        )
        failed += [f"{name}:{path}" for path in missing]
    extraction = time.perf_counter() - start

    report = RunReport(
        experiment,
        datasets,
        reference=reference,
        metadata=metadata,
    )
    report.timing = {
        "feature_extraction_seconds": extraction,
        "classification_seconds": time.perf_counter() - start - extraction,
    }
    report.warnings = [f"feature extraction failed: {p}" for p in failed]
    paths = report.write(out_dir)
    log_yaml(
        header="=== ACCURACY ===",
        level=logging.INFO,
        logger=logger,
        accuracy={c.name: c.overall for c in report.conditions},
        p_values=report.to_dict()["significance"],
        timing=report.timing,
        files=paths,
    )
    return report, failed


@timed(logger=logger)
def cmd_sweep(
    experiment: ExperimentConfig,
    manifest_path: str,
    out_dir: str,
    force: bool = False,
) -> Tuple[RunReport, List[str]]:
    """
    Summarizes the corpus with every configured algorithm at every
    configured duration and swept parameter setting, adds the contiguous
    baselines, Average Similarity and full songs, and evaluates all
    conditions against full songs.
    """
    prepare_out_dir(out_dir, force)
    sweep = experiment.sweep
    jobs: List[Tuple[str, float, Dict]] = []
    for duration in sweep["durations"]:
        jobs += [(baseline, duration, {}) for baseline in sweep["baselines"]]
        for algorithm in sweep["algorithms"]:
            jobs += [
                (algorithm, duration, setting)
                for setting in experiment.parameter_settings(algorithm)
            ]
    if sweep.get("average_similarity"):
        jobs += [
            (Algorithm.avgsim.value, duration, {})
            for duration in experiment.avgsim_durations()
        ]
    logger.info(f"Sweeping {len(jobs)} summary conditions.")

    conditions: Dict[str, str] = {Algorithm.full.value: manifest_path}
    metadata: Dict[str, Dict] = {
        Algorithm.full.value: {"algorithm": Algorithm.full.value},
    }
    failed: List[str] = []
    for algorithm, duration, setting in jobs:
        name = experiment.condition_name(algorithm, duration, setting)
        condition_dir = os.path.join(out_dir, "summaries", name)
        _, missing = cmd_summarize(
            experiment,
            manifest_path,
            algorithm,
            condition_dir,
            duration=duration,
            force=force,
            overrides=setting,
        )
        failed += [f"{name}:{path}" for path in missing]
        conditions[name] = os.path.join(condition_dir, MANIFEST_NAME)
        metadata[name] = {
            "algorithm": algorithm,
            "duration": duration,
            "parameters": setting,
        }

    report, missing = cmd_evaluate(
        experiment,
        conditions,
        os.path.join(out_dir, "report"),
        force=force,
        reference=Algorithm.full.value,
        metadata=metadata,
    )
    return report, failed + missing


def parse_conditions(values: Sequence[str]) -> Dict[str, str]:
    """Parses `NAME=MANIFEST` arguments."""
    conditions: Dict[str, str] = {}
    for value in values:
        name, sep, path = value.partition("=")
        if not sep or not name or not path:
            raise ValidationError(
                f"Condition '{value}' is not of the form NAME=MANIFEST."
            )
        if name in conditions:
            raise ValidationError(f"Duplicate condition '{name}'.")
        conditions[name] = path
    return conditions


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one sub-parser per command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        action="append",
        help=(
            "YAML file with settings overriding the defaults. Argument can "
            "be specified multiple times; later files take precedence."
        ),
        default=[],
        metavar="FILE",
    )
    common.add_argument(
        "--seed",
        help="seed replacing all configured seeds",
        type=int,
        default=None,
        metavar="INT",
    )
    common.add_argument(
        "--workers",
        help="number of songs processed in parallel",
        type=int,
        default=None,
        metavar="INT",
    )
    common.add_argument(
        "--force",
        help="write into a non-empty output directory",
        action="store_true",
    )
    common.add_argument(
        "--out",
        help="output directory",
        required=True,
        metavar="DIR",
    )
    common.add_argument(
        "-v", "--verbose",
        help="log debug messages",
        action="store_true",
    )

    parser = argparse.ArgumentParser(
        prog="sumusic",
        description="""Generic summarization of music.

        Songs are split into musical sentences that are ranked by text
        summarization algorithms; summaries are evaluated by how well they
        preserve the genre of the songs they summarize."""
    )
    parser.add_argument(
        "--version",
        action="version",
        version="%(prog)s 0.1.0",
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    gen = commands.add_parser(
        "gen-corpus",
        parents=[common],
        help="synthesize a labeled multi-genre corpus",
    )
    gen.add_argument(
        "--songs-per-class",
        type=int,
        default=None,
        metavar="INT",
    )

    summ = commands.add_parser(
        "summarize",
        parents=[common],
        help="summarize every song of a manifest",
    )
    summ.add_argument("manifest", metavar="MANIFEST")
    summ.add_argument(
        "-a", "--algorithm",
        help=(
            "one of: " + ", ".join(a.value for a in Algorithm)
        ),
        required=True,
        metavar="NAME",
    )
    summ.add_argument(
        "-d", "--duration",
        help="summary duration in seconds",
        type=float,
        default=None,
        metavar="SECONDS",
    )

    ev = commands.add_parser(
        "evaluate",
        parents=[common],
        help="cross-validate genre classification of conditions",
    )
    ev.add_argument(
        "conditions",
        nargs="+",
        metavar="NAME=MANIFEST",
    )
    ev.add_argument(
        "--reference",
        help="condition all others are compared with",
        default=None,
        metavar="NAME",
    )

    sw = commands.add_parser(
        "sweep",
        parents=[common],
        help="summarize and evaluate the full configured grid",
    )
    sw.add_argument("manifest", metavar="MANIFEST")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parses CLI arguments and runs a command.

    :return: Exit code.
    """
    args = build_parser().parse_args(argv)
    logger.setLevel(logging.DEBUG if args.verbose else logging.INFO)
    try:
        experiment = ExperimentConfig(
            load_config(args.config),
            seed=args.seed,
            workers=args.workers,
        )
        failed: List[str] = []
        if args.command == "gen-corpus":
            cmd_gen_corpus(
                experiment,
                args.out,
                force=args.force,
                songs_per_class=args.songs_per_class,
            )
        elif args.command == "summarize":
            _, failed = cmd_summarize(
                experiment,
                args.manifest,
                args.algorithm,
                args.out,
                duration=args.duration,
                force=args.force,
            )
        elif args.command == "evaluate":
            conditions = parse_conditions(args.conditions)
            reference = args.reference or experiment.evaluation["reference"]
            if reference not in conditions and args.reference is None:
                reference = next(iter(conditions))
            _, failed = cmd_evaluate(
                experiment,
                conditions,
                args.out,
                force=args.force,
                reference=reference,
            )
        else:
            _, failed = cmd_sweep(
                experiment,
                args.manifest,
                args.out,
                force=args.force,
            )
    except Exception as e:
        return handle_error(e)
    return EXIT_PARTIAL_FAILURE if failed else EXIT_SUCCESS


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
