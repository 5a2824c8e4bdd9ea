"""Unit tests for `SUMusic.audio`"""
import numpy as np
import pytest
import soundfile as sf

from SUMusic.audio import (
    SUPPORTED_SUBTYPES,
    frame_signal,
    frame_start_times,
    load_audio,
    render_summary,
    resample,
    write_audio,
)
from SUMusic.errors import (
    DecodeError,
    EmptyInputError,
    InvalidSelectionError,
    TooShortError,
)
from SUMusic.models import (AudioClip, FramingSpec, TimeSpan)

# Test parameters
RATE = 8000
HALF_STEP = 0.5 / 32768


def _tone(seconds=1.0, rate=RATE, frequency=440.0, amplitude=0.5):
    t = np.arange(int(seconds * rate)) / rate
    return amplitude * np.sin(2 * np.pi * frequency * t)


def test_load_audio_pcm16_mono(tmp_path):
    path = str(tmp_path / "tone.wav")
    samples = _tone()
    sf.write(path, samples, RATE, subtype="PCM_16")
    clip = load_audio(path, target_rate=RATE)
    assert clip.sample_rate == RATE
    assert len(clip) == len(samples)
    assert np.max(np.abs(clip.samples - samples)) <= 2.0 / 32768


def test_load_audio_stereo_downmix(tmp_path):
    path = str(tmp_path / "stereo.wav")
    left = np.full(RATE, 0.5)
    right = np.full(RATE, -0.25)
    sf.write(path, np.stack([left, right], axis=1), RATE, subtype="FLOAT")
    clip = load_audio(path, target_rate=RATE)
    assert np.allclose(clip.samples, 0.125)


@pytest.mark.parametrize("subtype", ["PCM_U8", "PCM_24", "PCM_32", "FLOAT"])
def test_load_audio_subtypes(tmp_path, subtype):
    path = str(tmp_path / f"{subtype}.wav")
    sf.write(path, _tone(), RATE, subtype=subtype)
    clip = load_audio(path, target_rate=RATE)
    assert np.allclose(clip.samples, _tone(), atol=1e-2)


def test_load_audio_resamples(tmp_path):
    path = str(tmp_path / "tone.wav")
    sf.write(path, _tone(rate=16000), 16000, subtype="PCM_16")
    clip = load_audio(path, target_rate=RATE)
    assert clip.sample_rate == RATE
    assert len(clip) == RATE
    assert np.max(np.abs(clip.samples)) <= 1.0


def test_load_audio_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_audio(str(tmp_path / "missing.wav"))


def test_load_audio_empty_file(tmp_path):
    path = tmp_path / "empty.wav"
    path.write_bytes(b"")
    with pytest.raises(EmptyInputError):
        load_audio(str(path))


def test_load_audio_not_audio(tmp_path):
    path = tmp_path / "text.wav"
    path.write_text("this is not a RIFF file")
    with pytest.raises(DecodeError):
        load_audio(str(path))


def test_load_audio_not_wav(tmp_path):
    path = str(tmp_path / "tone.flac")
    sf.write(path, _tone(), RATE, format="FLAC", subtype="PCM_16")
    with pytest.raises(DecodeError):
        load_audio(path)


def test_supported_subtypes_are_wav_subtypes():
    assert "PCM_S8" not in SUPPORTED_SUBTYPES
    for subtype in SUPPORTED_SUBTYPES:
        assert sf.check_format("WAV", subtype)


def test_load_audio_unsupported_subtype(tmp_path):
    path = str(tmp_path / "ulaw.wav")
    sf.write(path, _tone(), RATE, subtype="ULAW")
    with pytest.raises(DecodeError):
        load_audio(path)


def test_resample_length():
    samples = np.random.default_rng(0).uniform(-0.5, 0.5, 44100)
    assert len(resample(samples, 44100, 22050)) == 22050
    assert len(resample(samples[:1001], 44100, 22050)) == 501


def test_resample_identity():
    samples = _tone()
    assert np.array_equal(resample(samples, RATE, RATE), samples)


def test_write_audio_round_trip(tmp_path):
    path = str(tmp_path / "out" / "clip.wav")
    samples = np.random.default_rng(1).uniform(-0.99, 0.99, RATE)
    write_audio(AudioClip(samples, RATE), path)
    info = sf.info(path)
    assert info.subtype == "PCM_16"
    assert info.channels == 1
    clip = load_audio(path, target_rate=RATE)
    assert np.max(np.abs(clip.samples - samples)) <= HALF_STEP + 1e-12


def test_frame_signal_count():
    rng = np.random.default_rng(2)
    for _ in range(50):
        n = int(rng.integers(4000, 20000))
        frame, hop = [(0.25, 0.125), (0.5, 0.25), (0.1, 0.1)][
            int(rng.integers(3))
        ]
        spec = FramingSpec(frame, hop)
        frames = frame_signal(AudioClip(np.zeros(n), RATE), spec)
        F = spec.frame_length(RATE)
        H = spec.hop_length(RATE)
        assert frames.shape == ((n - F) // H + 1, F)


def test_frame_signal_content():
    clip = AudioClip(np.arange(10, dtype=float), 10)
    frames = frame_signal(clip, FramingSpec(0.4, 0.2))
    assert frames.tolist() == [
        [0, 1, 2, 3],
        [2, 3, 4, 5],
        [4, 5, 6, 7],
        [6, 7, 8, 9],
    ]
    assert frame_start_times(4, FramingSpec(0.4, 0.2), 10).tolist() == \
        pytest.approx([0.0, 0.2, 0.4, 0.6])


def test_frame_signal_too_short():
    with pytest.raises(TooShortError):
        frame_signal(AudioClip(np.zeros(100), RATE), FramingSpec(0.5, 0.5))


def test_render_summary_concatenates():
    clip = AudioClip(np.arange(100, dtype=float), 10)
    summary = render_summary(clip, [TimeSpan(1.0, 2.0), TimeSpan(5.0, 5.5)])
    assert summary.samples.tolist() == list(range(10, 20)) + \
        list(range(50, 55))


def test_render_summary_empty():
    clip = AudioClip(np.ones(100), 10)
    assert len(render_summary(clip, [])) == 0


def test_render_summary_overlap():
    clip = AudioClip(np.ones(100), 10)
    with pytest.raises(InvalidSelectionError):
        render_summary(clip, [TimeSpan(1.0, 3.0), TimeSpan(2.0, 4.0)])


def test_render_summary_unsorted():
    clip = AudioClip(np.ones(100), 10)
    with pytest.raises(InvalidSelectionError):
        render_summary(clip, [TimeSpan(5.0, 6.0), TimeSpan(1.0, 2.0)])


def test_render_summary_out_of_range():
    clip = AudioClip(np.ones(100), 10)
    with pytest.raises(InvalidSelectionError):
        render_summary(clip, [TimeSpan(9.0, 11.0)])
