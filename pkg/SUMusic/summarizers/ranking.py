"""
Helpers shared by all rankers: similarity graphs, score ordering and
duration-bounded summary assembly.
"""
import logging
from typing import (Dict, List, Optional, Sequence)

import numpy as np

from SUMusic.errors import (EmptyInputError, ValidationError)
from SUMusic.models import (
    Algorithm,
    SentenceVectors,
    SimilarityGraph,
    SummarySelection,
    TimeSpan,
)
from SUMusic.tokenizer import cosine_matrix

logger = logging.getLogger("SUMusic")

DURATION_TOLERANCE = 1e-9
TIE_TOLERANCE = 1e-10


def similarity_graph(vectors: SentenceVectors) -> SimilarityGraph:
    """Pairwise cosine similarities of all sentences."""
    return SimilarityGraph(cosine_matrix(vectors.matrix))


def rank_scores(scores: Sequence[float]) -> List[int]:
    """
    Sentence indices by descending score; scores within `TIE_TOLERANCE` of
    their predecessor count as tied and ties go to the lower index.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if len(scores) == 0:
        return []
    order = np.lexsort((np.arange(len(scores)), -scores))
    ordered = scores[order]
    gaps = ordered[:-1] - ordered[1:]
    scale = np.maximum(1.0, np.abs(ordered[:-1]))
    levels = np.empty(len(scores), dtype=np.int64)
    levels[order] = np.concatenate(
        ([0], np.cumsum(gaps > TIE_TOLERANCE * scale))
    )
    return [int(i) for i in np.lexsort((np.arange(len(scores)), levels))]


def first_max(values: np.ndarray) -> int:
    """Lowest index whose value lies within `TIE_TOLERANCE` of the maximum."""
    values = np.asarray(values, dtype=np.float64)
    best = np.max(values)
    return int(np.flatnonzero(
        values >= best - TIE_TOLERANCE * max(1.0, abs(best))
    )[0])


def tile_spans(spans: Sequence[TimeSpan]) -> List[TimeSpan]:
    """
    Cuts each sentence extent at the start of the next sentence so that the
    extents of overlapping frames do not overlap.
    """
    tiled = []
    for i, span in enumerate(spans):
        end = span.end_seconds
        if i + 1 < len(spans):
            end = min(end, spans[i + 1].start_seconds)
        tiled.append(TimeSpan(span.start_seconds, end))
    return tiled


def assemble_summary(
    ranking: Sequence[int],
    spans: Sequence[TimeSpan],
    target_seconds: float,
    algorithm: Algorithm = Algorithm.lexrank,
    parameters: Optional[Dict] = None,
) -> SummarySelection:
    """
    Walks a ranking and accepts sentences until their total duration reaches
    `target_seconds`. The sentence crossing the target is cut short so that
    the total equals the target; a song shorter than the target is selected
    entirely. Selected sentences are returned in temporal order.

    :param ranking: Sentence indices, best first.
    :param spans: Extent of every sentence, in sentence order.
    """
    if len(ranking) == 0:
        raise EmptyInputError(
            "Cannot assemble a summary from an empty ranking."
        )
    if target_seconds <= 0:
        raise ValidationError(
            f"Summary duration must be positive, got {target_seconds}."
        )
    tiled = tile_spans(spans)
    accumulated = 0.0
    chosen = {}
    for index in ranking:
        if accumulated >= target_seconds - DURATION_TOLERANCE:
            break
        span = tiled[index]
        remaining = target_seconds - accumulated
        if span.duration_seconds > remaining:
            span = TimeSpan(span.start_seconds, span.start_seconds + remaining)
        chosen[int(index)] = span
        accumulated += span.duration_seconds
    selected = sorted(chosen, key=lambda i: chosen[i].start_seconds)
    return SummarySelection(
        ranking=ranking,
        selected=selected,
        spans=[chosen[i] for i in selected],
        target_seconds=target_seconds,
        algorithm=algorithm,
        parameters=parameters,
    )
