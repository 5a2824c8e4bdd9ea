"""
Per-song batch work over dataset manifests: summarization and feature
extraction with a bounded worker pool. A failing song is logged and skipped.
"""
import logging
import os
from typing import (Dict, List, Optional, Tuple)

from joblib import (Parallel, delayed)
import yaml

from SUMusic import summarize_song
from SUMusic.audio import (load_audio, write_audio)
from SUMusic.corpus.manifest import resolve_path
from SUMusic.decorators import log_exception
from SUMusic.features import song_feature_vector
from SUMusic.log import to_plain
from SUMusic.models import (
    Algorithm,
    DatasetManifest,
    FeatureSet,
    LabeledDataset,
    LabeledItem,
    ManifestRow,
)

logger = logging.getLogger("SUMusic")


@log_exception(logger=logger, level=logging.ERROR, reraise=False)
def summarize_row(
    manifest: DatasetManifest,
    row: ManifestRow,
    algorithm: Algorithm,
    duration: float,
    parameters: Optional[Dict],
    out_dir: str,
    working_rate: int,
) -> ManifestRow:
    """
    Summarizes one song; writes `<song>.wav` and `<song>.selection.yaml`
    below `out_dir`, keeping the song's relative directory.
    """
    selection, summary = summarize_song(
        resolve_path(manifest, row),
        algorithm=algorithm,
        duration=duration,
        parameters=parameters,
        working_rate=working_rate,
    )
    stem = os.path.splitext(row.path)[0]
    relative = f"{stem}.wav"
    write_audio(summary, os.path.join(out_dir, relative))
    record = {
        "song": row.path,
        "label": row.label,
        "summary": relative,
        "summary_seconds": summary.duration_seconds,
        **selection.to_dict(),
    }
    with open(os.path.join(out_dir, f"{stem}.selection.yaml"), "w") as f:
        yaml.safe_dump(to_plain(record), f, default_flow_style=False)
    for warning in selection.warnings:
        logger.warning(f"'{row.path}': {warning}")
    return ManifestRow(
        path=relative,
        label=row.label,
        duration_seconds=summary.duration_seconds,
        seed=row.seed,
    )


def summarize_manifest(
    manifest: DatasetManifest,
    algorithm: Algorithm,
    duration: float,
    parameters: Optional[Dict],
    out_dir: str,
    working_rate: int = 22050,
    workers: int = 1,
) -> Tuple[DatasetManifest, List[str]]:
    """
    Summarizes every song of a manifest.

    :return: Manifest of the written summaries and the paths of the songs
            that failed.
    """
    results = Parallel(n_jobs=workers)(
        delayed(summarize_row)(
            manifest,
            row,
            algorithm,
            duration,
            parameters,
            out_dir,
            working_rate,
        )
        for row in manifest.rows
    )
    failed = [
        row.path for row, result in zip(manifest.rows, results)
        if result is None
    ]
    summaries = DatasetManifest(
        rows=[r for r in results if r is not None],
        root=os.path.abspath(out_dir),
        declared_classes=manifest.classes,
    )
    return summaries, failed


@log_exception(logger=logger, level=logging.ERROR, reraise=False)
def extract_row(
    manifest: DatasetManifest,
    row: ManifestRow,
    feature_set: FeatureSet,
    features: Dict,
    working_rate: int,
) -> LabeledItem:
    """Song-level classification features of one song."""
    clip = load_audio(resolve_path(manifest, row), target_rate=working_rate)
    vector = song_feature_vector(
        clip,
        feature_set=feature_set,
        frame_seconds=features["classification"]["frame_seconds"],
        n_mels=features["n_mels"],
        log_floor=features["log_floor"],
        rolloff_fraction=features["rolloff_fraction"],
        brightness_cutoff_hz=features["brightness_cutoff_hz"],
    )
    return LabeledItem(vector.values, row.label, row.song_id)


def extract_dataset(
    manifest: DatasetManifest,
    features: Dict,
    working_rate: int = 22050,
    workers: int = 1,
) -> Tuple[LabeledDataset, List[str]]:
    """
    Song-level features of every song of a manifest. Classes are ordered
    alphabetically so that conditions share one class order.

    :return: Dataset and the paths of the songs that failed.
    """
    feature_set = FeatureSet(features["classification"]["feature_set"])
    results = Parallel(n_jobs=workers)(
        delayed(extract_row)(
            manifest,
            row,
            feature_set,
            features,
            working_rate,
        )
        for row in manifest.rows
    )
    failed = [
        row.path for row, result in zip(manifest.rows, results)
        if result is None
    ]
    dataset = LabeledDataset(
        items=[r for r in results if r is not None],
        classes=sorted(manifest.classes),
    )
    return dataset, failed
