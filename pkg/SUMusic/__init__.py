"""
Exposes SUMusic main function summarize_song()
"""
import logging
from typing import (Dict, Optional, Tuple, Union)

from SUMusic.audio import (load_audio, render_summary)
from SUMusic.log import (log_yaml, setup_logger)
from SUMusic.models import (Algorithm, AudioClip, SummarySelection)
from SUMusic.summarizers import summarize

# Set up logging
logger = setup_logger("SUMusic", logging.INFO)
logging.captureWarnings(capture=True)


def summarize_song(
    path: str,
    algorithm: Union[Algorithm, str] = Algorithm.grasshopper,
    duration: float = 30.0,
    parameters: Optional[Dict] = None,
    working_rate: int = 22050,
) -> Tuple[SummarySelection, AudioClip]:
    """
    Main function that summarizes one song: the WAV file is decoded and
    resampled, split into musical sentences, the sentences are ranked by the
    chosen algorithm and the best ones are concatenated into a summary of
    `duration` seconds.

    :param path: Path to a PCM WAV file.
    :param algorithm: One of the rankers 'grasshopper', 'lexrank', 'lsa',
            'mmr' and 'support-sets', the thumbnail method 'avgsim', one of
            the contiguous excerpts 'begin', 'middle' and 'end', or 'full'
            for the whole song.
    :param duration: Target summary duration in seconds.
    :param parameters: Summarizer parameters (framing, vocabulary and
            sentence size, weighting, algorithm-specific settings); see
            `SUMusic.summarizers.DEFAULT_PARAMETERS`.
    :param working_rate: Sample rate all audio is resampled to.

    :return: The selection (ranking, selected sentences, time spans) and the
            rendered summary clip.
    """
    log_yaml(
        header="=== USER INPUT ===",
        level=logging.DEBUG,
        logger=logger,
        path=path,
        algorithm=str(algorithm),
        duration=duration,
        parameters=parameters or {},
    )
    algorithm = Algorithm.parse(algorithm)

    # Decode audio
    clip = load_audio(path, target_rate=working_rate)
    log_yaml(
        header="=== AUDIO ===",
        level=logging.DEBUG,
        logger=logger,
        **clip.to_dict()
    )

    # Select spans
    selection = summarize(
        clip,
        algorithm=algorithm,
        duration=duration,
        parameters=parameters,
    )
    log_yaml(
        header="=== SELECTION ===",
        level=logging.DEBUG,
        logger=logger,
        **selection.to_dict()
    )

    # Render summary
    summary = render_summary(clip, selection.spans)
    logger.debug(
        f"Rendered summary of {summary.duration_seconds:.3f}s from "
        f"'{path}'."
    )
    return selection, summary
