"""
Summaries that take one contiguous excerpt: fixed anchors and the Average
Similarity thumbnail.
"""
import logging
import math
from typing import (Tuple, Union)

import numpy as np

from SUMusic.errors import (TooLongError, ValidationError)
from SUMusic.models import (Anchor, FrameMatrix, TimeSpan)
from SUMusic.summarizers.ranking import first_max
from SUMusic.tokenizer import cosine_matrix

logger = logging.getLogger("SUMusic")


def contiguous_baseline(
    clip_duration: float,
    L: float,
    anchor: Union[Anchor, str] = Anchor.middle,
) -> Tuple[TimeSpan, bool]:
    """
    Excerpt of `L` seconds at the beginning, middle or end of a song.

    :return: The excerpt and whether the song was shorter than `L` and was
            therefore returned whole.
    """
    anchor = Anchor(anchor)
    if L <= 0:
        raise ValidationError(f"Excerpt duration must be positive, got {L}.")
    if clip_duration <= L:
        short = clip_duration < L
        if short:
            logger.warning(
                f"Song of {clip_duration:.2f}s is shorter than the requested "
                f"{L}s excerpt; using the whole song."
            )
        return TimeSpan(0.0, clip_duration), short
    if anchor is Anchor.begin:
        start = 0.0
    elif anchor is Anchor.middle:
        start = (clip_duration - L) / 2
    else:
        start = clip_duration - L
    return TimeSpan(start, start + L), False


def window_frames(
    frames: FrameMatrix,
    L: float,
) -> int:
    """Number of whole frames inside an `L`-second window."""
    framing = frames.framing
    return max(
        1,
        int(math.floor(
            (L - framing.frame_seconds) / framing.hop_seconds + 1e-9
        )) + 1,
    )


def average_similarity_scores(
    frames: FrameMatrix,
    L: float,
) -> np.ndarray:
    """
    Mean cosine similarity between the frames of every candidate `L`-second
    window and all frames of the song, one score per window start frame.
    """
    if L > frames.duration_seconds + 1e-9:
        raise TooLongError(
            f"Excerpt of {L}s exceeds song duration of "
            f"{frames.duration_seconds:.2f}s."
        )
    profile = cosine_matrix(frames.rows).mean(axis=1)
    width = min(window_frames(frames, L), len(profile))
    hop = frames.framing.hop_seconds
    n_starts = int(math.floor(
        (frames.duration_seconds - L) / hop + 1e-9
    )) + 1
    n_starts = max(1, min(n_starts, len(profile) - width + 1))
    windows = np.lib.stride_tricks.sliding_window_view(profile, width)
    return windows[:n_starts].mean(axis=1)


def average_similarity(
    frames: FrameMatrix,
    L: float,
) -> TimeSpan:
    """
    The `L`-second excerpt most similar, on average, to the whole song; ties
    go to the earliest start.

    :raises SUMusic.errors.TooLongError: `L` exceeds the song duration.
    """
    scores = average_similarity_scores(frames, L)
    best = first_max(scores)
    start = float(frames.frame_times[best])
    end = min(start + L, frames.duration_seconds)
    if end - start < L - 1e-9:
        start = max(0.0, end - L)
    return TimeSpan(start, end)
