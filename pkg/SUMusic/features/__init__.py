"""
Per-frame spectra, MFCCs and spectral descriptors; song-level classification
vectors.
"""
from functools import lru_cache
import logging
from typing import (List, Optional, Union)

import librosa
import numpy as np
from scipy.fft import (dct, rfft, rfftfreq)
from scipy.signal import get_window

from SUMusic.audio import (frame_signal, frame_start_times)
from SUMusic.errors import (TooShortError, ValidationError)
from SUMusic.models import (
    AudioClip,
    FeatureSet,
    FrameMatrix,
    FramingSpec,
    SongFeatureVector,
    SpectralDescriptors,
)

logger = logging.getLogger("SUMusic")

N_MELS = 40
LOG_FLOOR = 1e-10
ROLLOFF_FRACTION = 0.85
BRIGHTNESS_CUTOFF_HZ = 1500.0
CLASSIFICATION_FRAME_SECONDS = 0.05
CLASSIFICATION_N_MFCC = 20


@lru_cache(maxsize=32)
def _hann(n: int) -> np.ndarray:
    return get_window("hann", n, fftbins=True).astype(np.float64)


@lru_cache(maxsize=32)
def mel_filterbank(
    sample_rate: int,
    n_fft: int,
    n_mels: int = N_MELS,
) -> np.ndarray:
    """Triangular HTK-mel filters between 0 Hz and Nyquist, peak height 1."""
    return librosa.filters.mel(
        sr=sample_rate,
        n_fft=n_fft,
        n_mels=n_mels,
        fmin=0.0,
        fmax=sample_rate / 2.0,
        htk=True,
        norm=None,
        dtype=np.float64,
    )


def bin_frequencies(n_fft: int, sample_rate: int) -> np.ndarray:
    """Center frequency, in Hz, of every bin returned by `power_spectrum()`."""
    return rfftfreq(n_fft, d=1.0 / sample_rate)


def power_spectrum(frame: np.ndarray) -> np.ndarray:
    """
    Squared magnitude of the Hann-windowed discrete Fourier transform, bins
    0 to N/2.
    """
    frame = np.asarray(frame, dtype=np.float64)
    if frame.ndim != 1 or len(frame) == 0:
        raise ValidationError("Frame must be a non-empty 1-D array.")
    return power_spectra(frame[np.newaxis, :])[0]


def power_spectra(frames: np.ndarray) -> np.ndarray:
    """Row-wise `power_spectrum()` of a (n_frames, frame_length) array."""
    frames = np.asarray(frames, dtype=np.float64)
    spectrum = rfft(frames * _hann(frames.shape[1]), axis=1)
    return spectrum.real ** 2 + spectrum.imag ** 2


def mfcc(
    frame: np.ndarray,
    n_coeffs: int,
    sample_rate: int,
    n_mels: int = N_MELS,
    log_floor: float = LOG_FLOOR,
) -> np.ndarray:
    """
    Mel-frequency cepstral coefficients of a single frame: log mel-filterbank
    energies followed by an orthonormal DCT-II; coefficient 0 is included.

    :raises SUMusic.errors.ValidationError: `n_coeffs` exceeds `n_mels` or
            the frame holds fewer than 2 samples.
    """
    frame = np.asarray(frame, dtype=np.float64)
    if len(frame) < 2:
        raise ValidationError("MFCCs require frames of at least 2 samples.")
    return mfcc_from_spectra(
        power_spectra(frame[np.newaxis, :]),
        n_fft=len(frame),
        n_coeffs=n_coeffs,
        sample_rate=sample_rate,
        n_mels=n_mels,
        log_floor=log_floor,
    )[0]


def mfcc_from_spectra(
    spectra: np.ndarray,
    n_fft: int,
    n_coeffs: int,
    sample_rate: int,
    n_mels: int = N_MELS,
    log_floor: float = LOG_FLOOR,
) -> np.ndarray:
    """Row-wise MFCCs of power spectra computed with an `n_fft` frame."""
    if n_coeffs > n_mels:
        raise ValidationError(
            f"Cannot compute {n_coeffs} MFCCs from {n_mels} mel filters."
        )
    filters = mel_filterbank(sample_rate, n_fft, n_mels)
    energies = np.maximum(spectra @ filters.T, log_floor)
    return dct(np.log(energies), type=2, norm="ortho", axis=1)[:, :n_coeffs]


def descriptor_matrix(
    spectra: np.ndarray,
    frequencies: np.ndarray,
    previous: Optional[np.ndarray] = None,
    rolloff_fraction: float = ROLLOFF_FRACTION,
    brightness_cutoff_hz: float = BRIGHTNESS_CUTOFF_HZ,
) -> np.ndarray:
    """
    The nine spectral descriptors of each row of `spectra`, as an array of
    shape (n_frames, 9) ordered like `SpectralDescriptors.NAMES`.

    Flux of row t is measured against row t - 1; the first row is compared
    with `previous` if given and otherwise gets a flux of 0.
    """
    spectra = np.atleast_2d(np.asarray(spectra, dtype=np.float64))
    frequencies = np.asarray(frequencies, dtype=np.float64)
    n_frames, n_bins = spectra.shape
    out = np.zeros((n_frames, len(SpectralDescriptors.NAMES)))

    total = spectra.sum(axis=1)
    silent = total <= 0
    safe_total = np.where(silent, 1.0, total)
    weights = spectra / safe_total[:, np.newaxis]

    # Moments of the spectrum taken as a distribution over bin frequencies
    centroid = weights @ frequencies
    deviation = frequencies[np.newaxis, :] - centroid[:, np.newaxis]
    variance = np.maximum((weights * deviation ** 2).sum(axis=1), 0.0)
    spread = np.sqrt(variance)
    peaked = spread > 0
    safe_spread = np.where(peaked, spread, 1.0)
    skewness = np.where(
        peaked,
        (weights * deviation ** 3).sum(axis=1) / safe_spread ** 3,
        0.0,
    )
    kurtosis = np.where(
        peaked,
        (weights * deviation ** 4).sum(axis=1) / safe_spread ** 4,
        0.0,
    )

    # Rolloff and brightness
    cumulative = np.cumsum(weights, axis=1)
    rolloff_bin = np.argmax(cumulative >= rolloff_fraction, axis=1)
    rolloff = np.where(silent, 0.0, frequencies[rolloff_bin])
    brightness = weights[:, frequencies > brightness_cutoff_hz].sum(axis=1)

    # Normalized entropy
    with np.errstate(divide="ignore", invalid="ignore"):
        log_weights = np.where(weights > 0, np.log(weights), 0.0)
    entropy = -(weights * log_weights).sum(axis=1)
    entropy = entropy / np.log(n_bins) if n_bins > 1 else entropy * 0.0

    # Flatness; a single empty bin makes the geometric mean vanish
    with np.errstate(divide="ignore"):
        log_spectra = np.log(spectra)
    geometric = np.where(
        np.all(spectra > 0, axis=1),
        np.exp(np.mean(np.where(spectra > 0, log_spectra, 0.0), axis=1)),
        0.0,
    )
    flatness = np.where(
        silent,
        1.0,
        np.minimum(geometric / (safe_total / n_bins), 1.0),
    )

    # Flux between L1-normalized magnitude spectra
    magnitudes = np.sqrt(spectra)
    mag_total = magnitudes.sum(axis=1, keepdims=True)
    normalized = np.divide(
        magnitudes,
        mag_total,
        out=np.zeros_like(magnitudes),
        where=mag_total > 0,
    )
    flux = np.zeros(n_frames)
    if n_frames > 1:
        flux[1:] = np.linalg.norm(normalized[1:] - normalized[:-1], axis=1)
    if previous is not None:
        previous = np.sqrt(np.asarray(previous, dtype=np.float64))
        prev_total = previous.sum()
        if prev_total > 0:
            previous = previous / prev_total
        flux[0] = np.linalg.norm(normalized[0] - previous)

    centroid = np.where(silent, 0.0, centroid)
    spread = np.where(silent, 0.0, spread)
    for column, values in enumerate([
        centroid,
        spread,
        skewness,
        kurtosis,
        flux,
        rolloff,
        brightness,
        entropy,
        flatness,
    ]):
        out[:, column] = values
    return out


def spectral_descriptors(
    prev_spectrum: Optional[np.ndarray],
    spectrum: np.ndarray,
    frequencies: np.ndarray,
    rolloff_fraction: float = ROLLOFF_FRACTION,
    brightness_cutoff_hz: float = BRIGHTNESS_CUTOFF_HZ,
) -> SpectralDescriptors:
    """
    Spectral descriptors of one power spectrum.

    :param prev_spectrum: Power spectrum of the preceding frame or `None` for
            the first frame of a signal (flux 0).
    :param spectrum: Power spectrum as returned by `power_spectrum()`.
    :param frequencies: Bin frequencies in Hz, see `bin_frequencies()`.
    """
    spectrum = np.asarray(spectrum, dtype=np.float64)
    if prev_spectrum is not None and len(prev_spectrum) != len(spectrum):
        raise ValidationError("Spectra differ in their number of bins.")
    values = descriptor_matrix(
        spectrum[np.newaxis, :],
        frequencies,
        previous=prev_spectrum,
        rolloff_fraction=rolloff_fraction,
        brightness_cutoff_hz=brightness_cutoff_hz,
    )[0]
    return SpectralDescriptors(*values.tolist())


def song_feature_layout(
    feature_set: FeatureSet = FeatureSet.full,
) -> List[str]:
    layout = [f"mfcc_{i}_mean" for i in range(CLASSIFICATION_N_MFCC)]
    if feature_set is FeatureSet.full:
        for name in SpectralDescriptors.NAMES:
            layout += [f"{name}_mean", f"{name}_var"]
    return layout


def song_feature_vector(
    clip: AudioClip,
    feature_set: Union[FeatureSet, str] = FeatureSet.full,
    frame_seconds: float = CLASSIFICATION_FRAME_SECONDS,
    n_mels: int = N_MELS,
    log_floor: float = LOG_FLOOR,
    rolloff_fraction: float = ROLLOFF_FRACTION,
    brightness_cutoff_hz: float = BRIGHTNESS_CUTOFF_HZ,
) -> SongFeatureVector:
    """
    Song-level features over non-overlapping 50 ms frames: the means of the
    first 20 MFCCs, followed (for the full set) by the mean and population
    variance of each of the nine spectral descriptors.

    :raises SUMusic.errors.TooShortError: Clip shorter than one frame.
    """
    feature_set = FeatureSet(feature_set)
    framing = FramingSpec(frame_seconds, frame_seconds)
    if clip.duration_seconds + 1e-12 < frame_seconds:
        raise TooShortError(
            f"Clip of {clip.duration_seconds:.3f}s is shorter than "
            f"{frame_seconds}s."
        )
    frames = frame_signal(clip, framing)
    spectra = power_spectra(frames)
    coefficients = mfcc_from_spectra(
        spectra,
        n_fft=frames.shape[1],
        n_coeffs=CLASSIFICATION_N_MFCC,
        sample_rate=clip.sample_rate,
        n_mels=n_mels,
        log_floor=log_floor,
    )
    values = [coefficients.mean(axis=0)]
    if feature_set is FeatureSet.full:
        descriptors = descriptor_matrix(
            spectra,
            bin_frequencies(frames.shape[1], clip.sample_rate),
            rolloff_fraction=rolloff_fraction,
            brightness_cutoff_hz=brightness_cutoff_hz,
        )
        statistics = np.empty(2 * descriptors.shape[1])
        statistics[0::2] = descriptors.mean(axis=0)
        statistics[1::2] = descriptors.var(axis=0)
        values.append(statistics)
    return SongFeatureVector(
        values=np.concatenate(values),
        layout=song_feature_layout(feature_set),
    )


def frame_features(
    clip: AudioClip,
    framing: FramingSpec,
    n_mfcc: int = 20,
    spectral: bool = False,
    n_mels: int = N_MELS,
    log_floor: float = LOG_FLOOR,
) -> FrameMatrix:
    """
    Per-frame summarization features: MFCCs, optionally concatenated with the
    nine spectral descriptors. With descriptors, every column is standardized
    over the song.
    """
    frames = frame_signal(clip, framing)
    spectra = power_spectra(frames)
    rows = mfcc_from_spectra(
        spectra,
        n_fft=frames.shape[1],
        n_coeffs=n_mfcc,
        sample_rate=clip.sample_rate,
        n_mels=n_mels,
        log_floor=log_floor,
    )
    layout = [f"mfcc_{i}" for i in range(n_mfcc)]
    if spectral:
        descriptors = descriptor_matrix(
            spectra,
            bin_frequencies(frames.shape[1], clip.sample_rate),
        )
        rows = np.hstack([rows, descriptors])
        layout += list(SpectralDescriptors.NAMES)
        std = rows.std(axis=0)
        rows = np.divide(
            rows - rows.mean(axis=0),
            std,
            out=np.zeros_like(rows),
            where=std > 0,
        )
    return FrameMatrix(
        rows=rows,
        feature_layout=layout,
        framing=framing,
        frame_times=frame_start_times(len(rows), framing, clip.sample_rate),
        duration_seconds=clip.duration_seconds,
    )


def dump_frame_matrix(frames: FrameMatrix, path: str) -> None:
    """Writes one frame per line, space-separated, with a layout header."""
    np.savetxt(
        path,
        frames.rows,
        delimiter=" ",
        header=" ".join(frames.feature_layout),
    )
