"""
Sentence rankers, contiguous baselines and the dispatcher that turns a clip
into a duration-bounded summary selection.
"""
import logging
from typing import (Dict, Optional, Union)

import numpy as np

from SUMusic.errors import ValidationError
from SUMusic.features import (LOG_FLOOR, N_MELS, frame_features)
from SUMusic.log import log_yaml
from SUMusic.models import (
    Algorithm,
    Anchor,
    AudioClip,
    FramingSpec,
    GrasshopperParams,
    SummarySelection,
    TimeSpan,
)
from SUMusic.summarizers.baselines import (
    average_similarity,
    contiguous_baseline,
)
from SUMusic.summarizers.grasshopper import grasshopper_rank
from SUMusic.summarizers.lexrank import lexrank
from SUMusic.summarizers.lsa import lsa_rank
from SUMusic.summarizers.mmr import mmr_select
from SUMusic.summarizers.ranking import (
    assemble_summary,
    rank_scores,
    similarity_graph,
)
from SUMusic.summarizers.support_sets import support_sets_rank
from SUMusic.tokenizer import (tokenize, weigh_sentences)

logger = logging.getLogger("SUMusic")

DEFAULT_PARAMETERS = {
    "framing": [0.5, 0.5],
    "n_mfcc": 20,
    "spectral": False,
    "vocabulary_size": 25,
    "sentence_size": 10,
    "weighting": "binary",
    "seed": 42,
    "lambda": None,
    "prior": "uniform",
    "damping": 0.85,
    "threshold": 0.1,
    "weighted": True,
    "metric": "cosine",
    "n_mels": N_MELS,
    "log_floor": LOG_FLOOR,
}


def _grasshopper_params(n: int, parameters: Dict) -> GrasshopperParams:
    lam = parameters["lambda"]
    lam = 0.95 if lam is None else lam
    prior = parameters["prior"]
    if isinstance(prior, str):
        if prior != "uniform":
            raise ValidationError(f"Unknown GRASSHOPPER prior '{prior}'.")
        return GrasshopperParams.uniform(n, lam)
    return GrasshopperParams(lam=lam, prior=np.asarray(prior, dtype=float))


def rank_sentences(
    clip: AudioClip,
    algorithm: Algorithm,
    parameters: Dict,
):
    """
    Tokenizes a clip and ranks all of its sentences.

    :return: Tuple of ranking and sentence extents.
    """
    frames = frame_features(
        clip,
        FramingSpec(*parameters["framing"]),
        n_mfcc=parameters["n_mfcc"],
        spectral=parameters["spectral"],
        n_mels=parameters["n_mels"],
        log_floor=parameters["log_floor"],
    )
    tokenized = tokenize(
        frames,
        K=parameters["vocabulary_size"],
        S=parameters["sentence_size"],
        seed=parameters["seed"],
    )
    vectors = weigh_sentences(tokenized, parameters["weighting"])
    n = len(vectors)

    if algorithm is Algorithm.grasshopper:
        ranking = grasshopper_rank(
            similarity_graph(vectors),
            _grasshopper_params(n, parameters),
        )
    elif algorithm is Algorithm.lexrank:
        ranking = rank_scores(lexrank(
            similarity_graph(vectors),
            d=parameters["damping"],
            threshold=parameters["threshold"],
            weighted=parameters["weighted"],
        ))
    elif algorithm is Algorithm.lsa:
        ranking = lsa_rank(vectors)
    elif algorithm is Algorithm.mmr:
        lam = parameters["lambda"]
        ranking = mmr_select(vectors, lam=0.7 if lam is None else lam)
    elif algorithm is Algorithm.support_sets:
        ranking = rank_scores(
            support_sets_rank(vectors, metric=parameters["metric"])
        )
    else:
        raise ValidationError(f"'{algorithm.value}' does not rank sentences.")
    log_yaml(
        header="=== RANKING ===",
        level=logging.DEBUG,
        logger=logger,
        n_frames=len(frames),
        n_sentences=n,
        vocabulary=tokenized.vocabulary.to_dict(),
        ranking=ranking,
    )
    return ranking, tokenized.sentence_spans


def summarize(
    clip: AudioClip,
    algorithm: Union[Algorithm, str],
    duration: float = 30.0,
    parameters: Optional[Dict] = None,
) -> SummarySelection:
    """
    Selects the time spans of a summary of `duration` seconds.

    :param algorithm: Any ranker, a contiguous baseline, Average Similarity
            or `full` (the whole song).
    :param parameters: Overrides of `DEFAULT_PARAMETERS`.
    """
    algorithm = Algorithm.parse(algorithm)
    parameters = {**DEFAULT_PARAMETERS, **(parameters or {})}
    unknown = set(parameters) - set(DEFAULT_PARAMETERS)
    if unknown:
        raise ValidationError(
            f"Unknown summarization parameters: {', '.join(sorted(unknown))}."
        )

    if algorithm is Algorithm.full:
        return SummarySelection(
            ranking=[],
            selected=[],
            spans=[TimeSpan(0.0, clip.duration_seconds)],
            target_seconds=clip.duration_seconds,
            algorithm=algorithm,
        )

    if algorithm in (Algorithm.begin, Algorithm.middle, Algorithm.end):
        span, short = contiguous_baseline(
            clip.duration_seconds,
            duration,
            Anchor(algorithm.value),
        )
        warnings = ["song shorter than summary duration"] if short else []
        return SummarySelection(
            ranking=[],
            selected=[],
            spans=[span],
            target_seconds=duration,
            algorithm=algorithm,
            warnings=warnings,
        )

    used = {
        key: parameters[key]
        for key in ("framing", "n_mfcc", "spectral", "n_mels", "log_floor")
    }
    if algorithm is Algorithm.avgsim:
        frames = frame_features(
            clip,
            FramingSpec(*parameters["framing"]),
            n_mfcc=parameters["n_mfcc"],
            spectral=parameters["spectral"],
            n_mels=parameters["n_mels"],
            log_floor=parameters["log_floor"],
        )
        return SummarySelection(
            ranking=[],
            selected=[],
            spans=[average_similarity(frames, duration)],
            target_seconds=duration,
            algorithm=algorithm,
            parameters=used,
        )

    ranking, spans = rank_sentences(clip, algorithm, parameters)
    used.update({
        key: parameters[key]
        for key in ("vocabulary_size", "sentence_size", "weighting", "seed")
    })
    used.update(_algorithm_specific(algorithm, parameters))
    return assemble_summary(
        ranking,
        spans,
        duration,
        algorithm=algorithm,
        parameters=used,
    )


def _algorithm_specific(algorithm: Algorithm, parameters: Dict) -> Dict:
    if algorithm is Algorithm.grasshopper:
        lam = parameters["lambda"]
        return {
            "lambda": 0.95 if lam is None else lam,
            "prior": parameters["prior"],
        }
    if algorithm is Algorithm.lexrank:
        return {
            key: parameters[key]
            for key in ("damping", "threshold", "weighted")
        }
    if algorithm is Algorithm.mmr:
        lam = parameters["lambda"]
        return {"lambda": 0.7 if lam is None else lam}
    if algorithm is Algorithm.support_sets:
        return {"metric": parameters["metric"]}
    return {}
