"""Unit tests for `SUMusic.corpus`"""
import os

import numpy as np
import pytest

from SUMusic.audio import (frame_signal, load_audio)
from SUMusic.config import load_config
from SUMusic.corpus import (
    default_profiles,
    generate_corpus,
    load_manifest,
    resolve_path,
    save_manifest,
    synthesize_song,
    validate_files,
)
from SUMusic.errors import (ManifestError, ValidationError)
from SUMusic.features import (bin_frequencies, power_spectra)
from SUMusic.models import (
    DatasetManifest,
    FramingSpec,
    GenreProfile,
    ManifestRow,
    SectionRecipe,
)

# Test parameters
RATE = 8000
SONG_SECONDS = [4.0, 6.0]
HEADER = "# sumusic-manifest v1\n"
COLUMNS = "path\tlabel\tduration_seconds\tseed\n"


def _profile(name, band, tones=()):
    return GenreProfile(name, [
        SectionRecipe(
            name="a",
            seconds=[1.0, 2.0],
            tones=tones,
            tone_level=0.3 if tones else 0.0,
            band=band,
            noise_level=0.5,
        ),
        SectionRecipe(
            name="b",
            seconds=[1.0, 2.0],
            band=band,
            noise_level=0.5,
            pulse_hz=2.0,
            pulse_depth=0.5,
        ),
    ])


PROFILES = [
    _profile("low", [100.0, 300.0], tones=[110.0]),
    _profile("high", [2000.0, 3000.0], tones=[2500.0]),
]


def _centroid(clip):
    frames = frame_signal(clip, FramingSpec(0.1, 0.1))
    spectrum = power_spectra(frames).mean(axis=0)
    freqs = bin_frequencies(frames.shape[1], clip.sample_rate)
    return np.sum(spectrum * freqs) / np.sum(spectrum)


def _write(path, text):
    path.write_text(text)
    return str(path)


def test_default_profiles():
    profiles = default_profiles(load_config())
    assert [p.name for p in profiles] == [
        "bass", "fado", "hiphop", "indie", "trance",
    ]
    assert all(len(p.sections) >= 5 for p in profiles)


def test_synthesize_song():
    clip, sections = synthesize_song(PROFILES[0], SONG_SECONDS, seed=1,
                                     sample_rate=RATE)
    assert clip.sample_rate == RATE
    assert SONG_SECONDS[0] - 0.01 <= clip.duration_seconds <= \
        SONG_SECONDS[1] + 0.01
    assert np.max(np.abs(clip.samples)) <= 0.99 + 1e-12
    assert [s["name"] for s in sections] == ["a", "b"]
    assert sections[0]["end_seconds"] == sections[1]["start_seconds"]
    assert sections[-1]["end_seconds"] == pytest.approx(clip.duration_seconds)


def test_synthesize_song_deterministic():
    first, _ = synthesize_song(PROFILES[1], SONG_SECONDS, 7, sample_rate=RATE)
    second, _ = synthesize_song(PROFILES[1], SONG_SECONDS, 7, sample_rate=RATE)
    third, _ = synthesize_song(PROFILES[1], SONG_SECONDS, 8, sample_rate=RATE)
    assert np.array_equal(first.samples, second.samples)
    assert not np.array_equal(first.samples[:100], third.samples[:100])


def test_synthesize_song_band_ordering():
    for seed in range(3):
        low, _ = synthesize_song(PROFILES[0], SONG_SECONDS, seed, RATE)
        high, _ = synthesize_song(PROFILES[1], SONG_SECONDS, seed, RATE)
        assert _centroid(low) < 500.0 < 1500.0 < _centroid(high)


def test_generate_corpus(tmp_path):
    manifest = generate_corpus(
        PROFILES,
        songs_per_class=3,
        song_seconds=SONG_SECONDS,
        seed=11,
        out_dir=str(tmp_path),
        sample_rate=RATE,
    )
    assert len(manifest) == 6
    assert manifest.classes == ["low", "high"]
    assert [row.label for row in manifest.rows] == ["low"] * 3 + ["high"] * 3
    assert manifest.rows[0].path == os.path.join("low", "low_000.wav")
    assert len({row.seed for row in manifest.rows}) == 6
    validate_files(manifest)
    for row in manifest.rows:
        clip = load_audio(resolve_path(manifest, row), target_rate=RATE)
        assert clip.duration_seconds == pytest.approx(
            row.duration_seconds,
            abs=1e-3,
        )


def test_generate_corpus_deterministic(tmp_path):
    kwargs = dict(
        profiles=PROFILES,
        songs_per_class=2,
        song_seconds=SONG_SECONDS,
        seed=5,
        sample_rate=RATE,
    )
    first = generate_corpus(out_dir=str(tmp_path / "a"), **kwargs)
    second = generate_corpus(out_dir=str(tmp_path / "b"), workers=2, **kwargs)
    assert first == second
    for row in first.rows:
        with open(resolve_path(first, row), "rb") as a, \
                open(resolve_path(second, row), "rb") as b:
            assert a.read() == b.read()


@pytest.mark.parametrize("kwargs", [
    dict(profiles=PROFILES[:1]),
    dict(profiles=[PROFILES[0], PROFILES[0]]),
    dict(songs_per_class=0),
    dict(song_seconds=[6.0, 4.0]),
    dict(jitter=1.0),
])
def test_generate_corpus_invalid(tmp_path, kwargs):
    arguments = dict(
        profiles=PROFILES,
        songs_per_class=1,
        song_seconds=SONG_SECONDS,
        seed=1,
        out_dir=str(tmp_path),
        sample_rate=RATE,
    )
    arguments.update(kwargs)
    with pytest.raises(ValidationError):
        generate_corpus(**arguments)


def test_section_recipe_invalid():
    with pytest.raises(ValidationError):
        SectionRecipe(name="x", seconds=[2.0, 1.0])
    with pytest.raises(ValidationError):
        SectionRecipe(name="x", seconds=[1.0, 2.0], band=[500.0, 100.0])
    with pytest.raises(ValidationError):
        GenreProfile("g", [SectionRecipe(name="x", seconds=[1.0, 2.0])])


def test_manifest_round_trip(tmp_path):
    manifest = DatasetManifest(
        rows=[
            ManifestRow("fado/a.wav", "fado", 151.25, seed=3),
            ManifestRow("bass/b.wav", "bass", 1 / 3, seed=None),
        ],
        declared_classes=["bass", "fado", "trance"],
    )
    path = str(tmp_path / "manifest.tsv")
    save_manifest(manifest, path)
    loaded = load_manifest(path)
    assert loaded == manifest
    assert loaded.classes == ["bass", "fado", "trance"]
    assert loaded.rows[1].duration_seconds == 1 / 3
    assert loaded.root == str(tmp_path)


def test_manifest_without_classes(tmp_path):
    path = _write(
        tmp_path / "manifest.tsv",
        HEADER + COLUMNS + "x.wav\tfado\t1.0\t-\ny.wav\tbass\t2.0\t4\n",
    )
    manifest = load_manifest(path)
    assert manifest.classes == ["fado", "bass"]
    assert manifest.rows[0].seed is None
    assert manifest.rows[1].seed == 4


def test_manifest_empty_file(tmp_path):
    manifest = load_manifest(_write(tmp_path / "manifest.tsv", ""))
    assert len(manifest) == 0


def test_manifest_missing_file(tmp_path):
    with pytest.raises(ManifestError):
        load_manifest(str(tmp_path / "missing.tsv"))


def test_manifest_bad_header(tmp_path):
    path = _write(tmp_path / "manifest.tsv", "path\tlabel\n")
    with pytest.raises(ManifestError) as e:
        load_manifest(path)
    assert e.value.line == 1


def test_manifest_unsupported_version(tmp_path):
    path = _write(tmp_path / "manifest.tsv", "# sumusic-manifest v2\n")
    with pytest.raises(ManifestError):
        load_manifest(path)


def test_manifest_malformed_line(tmp_path):
    path = _write(
        tmp_path / "manifest.tsv",
        HEADER + COLUMNS + "x.wav\tfado\t1.0\t-\ny.wav\tfado\t2.0\n",
    )
    with pytest.raises(ManifestError) as e:
        load_manifest(path)
    assert e.value.line == 4
    assert e.value.path == path
    assert f"{path}:4" in str(e.value)


def test_manifest_malformed_values(tmp_path):
    for row in ["x.wav\tfado\tlong\t-\n", "x.wav\tfado\t-1.0\t-\n",
                "x.wav\tfado\t1.0\tseed\n"]:
        path = _write(tmp_path / "manifest.tsv", HEADER + COLUMNS + row)
        with pytest.raises(ManifestError) as e:
            load_manifest(path)
        assert e.value.line == 3


def test_manifest_unknown_label(tmp_path):
    path = _write(
        tmp_path / "manifest.tsv",
        HEADER + "# classes\tbass\tfado\n" + COLUMNS +
        "x.wav\ttrance\t1.0\t-\n",
    )
    with pytest.raises(ManifestError) as e:
        load_manifest(path)
    assert e.value.line == 4


def test_manifest_duplicate_paths(tmp_path):
    path = _write(
        tmp_path / "manifest.tsv",
        HEADER + COLUMNS + "x.wav\tfado\t1.0\t-\nx.wav\tfado\t1.0\t-\n",
    )
    with pytest.raises(ManifestError):
        load_manifest(path)


def test_validate_files_missing_wav(tmp_path):
    manifest = DatasetManifest(
        rows=[ManifestRow("fado/a.wav", "fado", 1.0)],
        root=str(tmp_path),
    )
    with pytest.raises(ManifestError) as e:
        validate_files(manifest)
    assert os.path.join(str(tmp_path), "fado", "a.wav") in str(e.value)
