"""
Deterministic synthetic multi-genre corpus. Every song is a sequence of
sections drawn from its genre's grammar; a section mixes detuned tones with
band-limited noise under an amplitude pulse.
"""
import logging
import os
from typing import (Dict, List, Sequence, Tuple)

from joblib import (Parallel, delayed)
import numpy as np
from scipy.signal import (butter, sosfilt)

from SUMusic.audio import write_audio
from SUMusic.corpus.manifest import (
    load_manifest,
    resolve_path,
    save_manifest,
    validate_files,
)
from SUMusic.errors import ValidationError
from SUMusic.models import (
    AudioClip,
    DatasetManifest,
    GenreProfile,
    ManifestRow,
    SectionRecipe,
)

logger = logging.getLogger("SUMusic")

__all__ = [
    "default_profiles",
    "generate_corpus",
    "load_manifest",
    "resolve_path",
    "save_manifest",
    "synthesize_song",
    "validate_files",
]

FADE_SECONDS = 0.01
PEAK = 0.99
FILTER_ORDER = 4


def default_profiles(config: Dict) -> List[GenreProfile]:
    """Genre profiles declared in the `corpus.profiles` config section."""
    return [
        GenreProfile.from_dict(name, conf)
        for name, conf in config["corpus"]["profiles"].items()
    ]


def _render_section(
    recipe: SectionRecipe,
    n: int,
    offset: int,
    sample_rate: int,
    rng: np.random.Generator,
    jitter: float,
) -> np.ndarray:
    t = (offset + np.arange(n)) / sample_rate
    signal = np.zeros(n)

    if recipe.tones and recipe.tone_level > 0:
        tones = np.zeros(n)
        for frequency in recipe.tones:
            frequency *= 1.0 + jitter * rng.uniform(-1.0, 1.0)
            phase = rng.uniform(0.0, 2 * np.pi)
            tones += np.sin(2 * np.pi * frequency * t + phase)
        signal += recipe.tone_level * tones / len(recipe.tones)

    if recipe.noise_level > 0:
        nyquist = sample_rate / 2.0
        low = recipe.band[0] * (1.0 + jitter * rng.uniform(-1.0, 1.0))
        high = recipe.band[1] * (1.0 + jitter * rng.uniform(-1.0, 1.0))
        high = min(high, 0.95 * nyquist)
        low = min(max(low, 1.0), 0.9 * high)
        sos = butter(
            FILTER_ORDER,
            [low, high],
            btype="bandpass",
            fs=sample_rate,
            output="sos",
        )
        noise = sosfilt(sos, rng.standard_normal(n))
        rms = np.sqrt(np.mean(noise ** 2))
        if rms > 0:
            signal += recipe.noise_level * noise / rms

    if recipe.pulse_hz > 0 and recipe.pulse_depth > 0:
        rate = recipe.pulse_hz * (1.0 + jitter * rng.uniform(-1.0, 1.0))
        pulse = 0.5 - 0.5 * np.cos(2 * np.pi * rate * t)
        signal *= 1.0 - recipe.pulse_depth * pulse

    # Fade in and out against clicks at section boundaries
    fade = min(int(FADE_SECONDS * sample_rate), n // 2)
    if fade:
        ramp = np.linspace(0.0, 1.0, fade)
        signal[:fade] *= ramp
        signal[-fade:] *= ramp[::-1]
    return recipe.gain * signal


def synthesize_song(
    profile: GenreProfile,
    song_seconds: Sequence[float],
    seed: int,
    sample_rate: int = 22050,
    jitter: float = 0.05,
) -> Tuple[AudioClip, List[Dict]]:
    """
    Renders one song of a genre. Section durations are drawn from the
    profile's ranges and then scaled to a song length drawn from
    `song_seconds`.

    :return: Clip and the list of rendered sections (name, start, end).
    """
    rng = np.random.default_rng(seed)
    drawn = np.array([rng.uniform(*s.seconds) for s in profile.sections])
    length = rng.uniform(*song_seconds)
    durations = drawn * (length / drawn.sum())

    pieces = []
    sections = []
    offset = 0
    for recipe, duration in zip(profile.sections, durations):
        n = int(round(duration * sample_rate))
        pieces.append(_render_section(
            recipe, n, offset, sample_rate, rng, jitter,
        ))
        sections.append({
            "name": recipe.name,
            "start_seconds": offset / sample_rate,
            "end_seconds": (offset + n) / sample_rate,
        })
        offset += n
    samples = np.concatenate(pieces)
    peak = np.max(np.abs(samples))
    if peak > PEAK:
        samples *= PEAK / peak
    return AudioClip(samples, sample_rate), sections


def _song_seeds(seed: int, count: int) -> List[int]:
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(child.generate_state(1)[0]) for child in children]


def _write_song(
    profile: GenreProfile,
    index: int,
    song_seed: int,
    out_dir: str,
    song_seconds: Sequence[float],
    sample_rate: int,
    jitter: float,
) -> ManifestRow:
    clip, _ = synthesize_song(
        profile,
        song_seconds,
        song_seed,
        sample_rate=sample_rate,
        jitter=jitter,
    )
    relative = os.path.join(profile.name, f"{profile.name}_{index:03d}.wav")
    write_audio(clip, os.path.join(out_dir, relative))
    return ManifestRow(
        path=relative,
        label=profile.name,
        duration_seconds=clip.duration_seconds,
        seed=song_seed,
    )


def generate_corpus(
    profiles: Sequence[GenreProfile],
    songs_per_class: int,
    song_seconds: Sequence[float],
    seed: int,
    out_dir: str,
    sample_rate: int = 22050,
    jitter: float = 0.05,
    workers: int = 1,
) -> DatasetManifest:
    """
    Writes `songs_per_class` songs per genre to `out_dir/<genre>/` and returns
    their manifest. Song seeds are spawned from `seed` in (genre, index)
    order, so the corpus does not depend on `workers`.

    :raises SUMusic.errors.ValidationError: Fewer than 2 profiles, no songs
            or an invalid song length range.
    """
    if len(profiles) < 2:
        raise ValidationError("A corpus needs at least 2 genre profiles.")
    if len({p.name for p in profiles}) != len(profiles):
        raise ValidationError("Genre profile names must be unique.")
    if songs_per_class < 1:
        raise ValidationError(
            f"Songs per class must be >= 1, got {songs_per_class}."
        )
    if len(song_seconds) != 2 or not 0 < song_seconds[0] <= song_seconds[1]:
        raise ValidationError(
            f"Invalid song length range {list(song_seconds)}."
        )
    if not 0 <= jitter < 1:
        raise ValidationError(f"Jitter must lie in [0, 1), got {jitter}.")

    jobs = [
        (profile, index)
        for profile in profiles
        for index in range(songs_per_class)
    ]
    seeds = _song_seeds(seed, len(jobs))
    logger.info(
        f"Synthesizing {len(jobs)} songs of {len(profiles)} genres into "
        f"'{out_dir}'."
    )
    rows = Parallel(n_jobs=workers)(
        delayed(_write_song)(
            profile,
            index,
            song_seed,
            out_dir,
            song_seconds,
            sample_rate,
            jitter,
        )
        for (profile, index), song_seed in zip(jobs, seeds)
    )
    return DatasetManifest(
        rows=rows,
        root=os.path.abspath(out_dir),
        declared_classes=[p.name for p in profiles],
    )
