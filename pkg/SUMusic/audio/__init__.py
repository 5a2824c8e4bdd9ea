"""
Decoding and encoding of PCM WAV audio, resampling, framing and rendering of
summary audio from selected time spans.
"""
from fractions import Fraction
import logging
import os
from typing import Sequence

import numpy as np
from scipy.signal import resample_poly
import soundfile as sf

from SUMusic.errors import (
    DecodeError,
    EmptyInputError,
    InvalidSelectionError,
    TooShortError,
)
from SUMusic.models import (AudioClip, FramingSpec, TimeSpan)

logger = logging.getLogger("SUMusic")

# Sample encodings accepted on load
SUPPORTED_SUBTYPES = frozenset([
    "PCM_U8",
    "PCM_16",
    "PCM_24",
    "PCM_32",
    "FLOAT",
])
MAX_CHANNELS = 2
PCM16_SCALE = 32768


def load_audio(
    path: str,
    target_rate: int = 22050,
) -> AudioClip:
    """
    Decodes a PCM or 32-bit float WAV file into a mono clip at the requested
    sample rate.

    :param path: Path to WAV file.
    :param target_rate: Sample rate of the returned clip, in Hz.

    :return: Clip with samples clamped to [-1, 1].

    :raises SUMusic.errors.EmptyInputError: File or signal is empty.
    :raises SUMusic.errors.DecodeError: File is not a supported WAV file.
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"Audio file '{path}' not found.")
    if os.path.getsize(path) == 0:
        raise EmptyInputError(f"Audio file '{path}' is empty.")
    try:
        info = sf.info(path)
    except RuntimeError as e:
        raise DecodeError(f"Cannot decode '{path}': {e}") from e
    if info.format != "WAV":
        raise DecodeError(
            f"Cannot decode '{path}': container '{info.format}' is not WAV."
        )
    if info.subtype not in SUPPORTED_SUBTYPES:
        raise DecodeError(
            f"Cannot decode '{path}': unsupported sample encoding "
            f"'{info.subtype}' ({info.subtype_info})."
        )
    if not 1 <= info.channels <= MAX_CHANNELS:
        raise DecodeError(
            f"Cannot decode '{path}': {info.channels} channels, at most "
            f"{MAX_CHANNELS} supported."
        )
    try:
        data, source_rate = sf.read(path, dtype="float64", always_2d=True)
    except RuntimeError as e:
        raise DecodeError(f"Cannot decode '{path}': {e}") from e
    if data.shape[0] == 0:
        raise EmptyInputError(f"Audio file '{path}' contains no samples.")

    # Downmix, resample, clamp
    samples = data.mean(axis=1)
    samples = resample(samples, source_rate, target_rate)
    np.clip(samples, -1.0, 1.0, out=samples)
    logger.debug(
        f"Loaded '{path}': {info.subtype}, {info.channels} channel(s), "
        f"{source_rate} Hz -> {target_rate} Hz, {len(samples)} samples."
    )
    return AudioClip(
        samples=samples,
        sample_rate=target_rate,
        source_path=path,
    )


def resample(
    samples: np.ndarray,
    source_rate: int,
    target_rate: int,
) -> np.ndarray:
    """
    Band-limited polyphase resampling. The output holds
    `ceil(len(samples) * target_rate / source_rate)` samples.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if source_rate == target_rate:
        return samples.copy()
    ratio = Fraction(int(target_rate), int(source_rate))
    return resample_poly(
        samples,
        up=ratio.numerator,
        down=ratio.denominator,
    ).astype(np.float64)


def write_audio(
    clip: AudioClip,
    path: str,
) -> None:
    """
    Writes a clip as 16-bit PCM little-endian mono WAV. Samples are rounded to
    the nearest quantization step, so that a reload differs by at most half a
    step.
    """
    quantized = np.clip(
        np.round(clip.samples * PCM16_SCALE),
        -PCM16_SCALE,
        PCM16_SCALE - 1,
    ).astype(np.int16)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    sf.write(
        path,
        quantized,
        clip.sample_rate,
        subtype="PCM_16",
        format="WAV",
        endian="LITTLE",
    )


def frame_signal(
    clip: AudioClip,
    spec: FramingSpec,
) -> np.ndarray:
    """
    Cuts a clip into fixed-length windows; frame `i` covers samples
    `[i * hop, i * hop + frame)`. A trailing partial window is dropped.

    :return: Array of shape (n_frames, frame_length).

    :raises SUMusic.errors.TooShortError: Clip shorter than one frame.
    """
    frame_length = spec.frame_length(clip.sample_rate)
    hop_length = spec.hop_length(clip.sample_rate)
    if frame_length < 1 or hop_length < 1:
        raise TooShortError(
            f"Framing {spec.to_dict()} is below one sample at "
            f"{clip.sample_rate} Hz."
        )
    if len(clip.samples) < frame_length:
        raise TooShortError(
            f"Clip of {clip.duration_seconds:.3f}s is shorter than one frame "
            f"of {spec.frame_seconds}s."
        )
    windows = np.lib.stride_tricks.sliding_window_view(
        clip.samples,
        frame_length,
    )
    return windows[::hop_length]


def frame_start_times(
    n_frames: int,
    spec: FramingSpec,
    sample_rate: int,
) -> np.ndarray:
    """Start time, in seconds, of each frame produced by `frame_signal()`."""
    return np.arange(n_frames) * spec.hop_length(sample_rate) / sample_rate


def render_summary(
    clip: AudioClip,
    spans: Sequence[TimeSpan],
) -> AudioClip:
    """
    Concatenates the sample ranges of the given spans, in order, without
    crossfading.

    :raises SUMusic.errors.InvalidSelectionError: Spans are unsorted,
            overlapping or outside of the clip.
    """
    tolerance = 0.5 / clip.sample_rate
    previous_end = 0.0
    pieces = []
    for span in spans:
        if span.start_seconds < previous_end - 1e-9:
            raise InvalidSelectionError(
                f"Span {span} overlaps or precedes the previous span ending "
                f"at {previous_end}s."
            )
        if span.end_seconds > clip.duration_seconds + tolerance:
            raise InvalidSelectionError(
                f"Span {span} exceeds clip duration of "
                f"{clip.duration_seconds}s."
            )
        start = int(round(span.start_seconds * clip.sample_rate))
        end = min(
            int(round(span.end_seconds * clip.sample_rate)),
            len(clip.samples),
        )
        pieces.append(clip.samples[start:end])
        previous_end = span.end_seconds
    samples = np.concatenate(pieces) if pieces else np.zeros(0)
    return AudioClip(
        samples=samples,
        sample_rate=clip.sample_rate,
        source_path=clip.source_path,
    )
