"""
Reading and writing of dataset manifests.

A manifest is a tab-separated text file:

    # sumusic-manifest v1
    # classes	bass	fado
    path	label	duration_seconds	seed
    bass/bass_000.wav	bass	151.2	1234

The classes line is optional; without it, the class set is the set of labels
in order of first appearance. Paths are relative to the manifest's directory.
"""
import logging
import os
from typing import (List, Optional)

from SUMusic.errors import (ManifestError, ValidationError)
from SUMusic.models import (DatasetManifest, ManifestRow)

logger = logging.getLogger("SUMusic")

MAGIC = "# sumusic-manifest v"
CLASSES_PREFIX = "# classes"
COLUMNS = ["path", "label", "duration_seconds", "seed"]
NO_SEED = "-"


def save_manifest(
    manifest: DatasetManifest,
    path: str,
    declare_classes: bool = True,
) -> None:
    """Writes a manifest; floats are written with full precision."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    lines = [f"{MAGIC}{manifest.version}"]
    if declare_classes:
        lines.append("\t".join([CLASSES_PREFIX] + manifest.classes))
    lines.append("\t".join(COLUMNS))
    for row in manifest.rows:
        seed = NO_SEED if row.seed is None else str(row.seed)
        lines.append("\t".join([
            row.path,
            row.label,
            repr(row.duration_seconds),
            seed,
        ]))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
    logger.debug(f"Wrote manifest with {len(manifest)} rows to '{path}'.")


def load_manifest(path: str) -> DatasetManifest:
    """
    Parses a manifest file. An empty file is an empty manifest.

    :raises SUMusic.errors.ManifestError: File missing or unreadable, header
            malformed, row malformed or label undeclared; the error names the
            file and line.
    """
    try:
        with open(path) as f:
            lines = f.read().splitlines()
    except (FileNotFoundError, PermissionError, IsADirectoryError) as e:
        raise ManifestError(f"Cannot read manifest: {e}", path=path) from e
    root = os.path.dirname(os.path.abspath(path))
    if not any(line.strip() for line in lines):
        return DatasetManifest(rows=[], root=root)

    if not lines[0].startswith(MAGIC):
        raise ManifestError(
            f"Missing header '{MAGIC}<version>'.",
            path=path,
            line=1,
        )
    try:
        version = int(lines[0][len(MAGIC):])
    except ValueError:
        raise ManifestError("Malformed version in header.", path=path, line=1)
    if version != DatasetManifest.VERSION:
        raise ManifestError(
            f"Unsupported manifest version {version}.",
            path=path,
            line=1,
        )

    declared: Optional[List[str]] = None
    rows: List[ManifestRow] = []
    seen_columns = False
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split("\t")
        if fields[0] == CLASSES_PREFIX:
            declared = [c for c in fields[1:] if c]
            continue
        if not seen_columns:
            if fields != COLUMNS:
                raise ManifestError(
                    f"Expected column header '{' '.join(COLUMNS)}'.",
                    path=path,
                    line=number,
                )
            seen_columns = True
            continue
        rows.append(_parse_row(fields, declared, path, number))

    try:
        return DatasetManifest(
            rows=rows,
            version=version,
            root=root,
            declared_classes=declared,
        )
    except ValidationError as e:
        raise ManifestError(e.description, path=path) from e


def _parse_row(
    fields: List[str],
    declared: Optional[List[str]],
    path: str,
    number: int,
) -> ManifestRow:
    if len(fields) != len(COLUMNS):
        raise ManifestError(
            f"Expected {len(COLUMNS)} tab-separated fields, got "
            f"{len(fields)}.",
            path=path,
            line=number,
        )
    file_path, label, duration, seed = fields
    if not file_path or not label:
        raise ManifestError("Empty path or label.", path=path, line=number)
    if declared is not None and label not in declared:
        raise ManifestError(
            f"Unknown label '{label}'.",
            path=path,
            line=number,
        )
    try:
        duration_seconds = float(duration)
        seed_value = None if seed == NO_SEED else int(seed)
    except ValueError:
        raise ManifestError(
            f"Malformed duration '{duration}' or seed '{seed}'.",
            path=path,
            line=number,
        )
    if duration_seconds < 0:
        raise ManifestError(
            f"Negative duration {duration_seconds}.",
            path=path,
            line=number,
        )
    return ManifestRow(
        path=file_path,
        label=label,
        duration_seconds=duration_seconds,
        seed=seed_value,
    )


def resolve_path(manifest: DatasetManifest, row: ManifestRow) -> str:
    """Absolute path of a row's audio file."""
    if os.path.isabs(row.path):
        return row.path
    return os.path.join(manifest.root, row.path)


def validate_files(manifest: DatasetManifest) -> None:
    """
    :raises SUMusic.errors.ManifestError: A listed audio file does not exist;
            the error names its path.
    """
    for row in manifest.rows:
        audio_path = resolve_path(manifest, row)
        if not os.path.isfile(audio_path):
            raise ManifestError(
                f"Audio file '{audio_path}' listed in manifest does not "
                "exist."
            )
