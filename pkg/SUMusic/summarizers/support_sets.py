"""
Support Sets: a sentence is central if it belongs to the support sets of many
other sentences.
"""
import logging
from typing import (List, Set, Tuple)

import numpy as np
from scipy.spatial.distance import cdist

from SUMusic.errors import ValidationError
from SUMusic.models import SentenceVectors
from SUMusic.summarizers.ranking import (TIE_TOLERANCE, first_max)
from SUMusic.tokenizer import (cosine_matrix, cosine_similarity)

logger = logging.getLogger("SUMusic")

METRICS = ("cosine", "euclidean", "cityblock")


def _check_metric(metric: str) -> None:
    if metric not in METRICS:
        raise ValidationError(
            f"Unknown support-set metric '{metric}', choose from "
            f"{', '.join(METRICS)}."
        )


def pairwise_similarity(
    X: np.ndarray,
    metric: str = "cosine",
) -> np.ndarray:
    """Similarities between rows; distances count as negated similarities."""
    _check_metric(metric)
    if metric == "cosine":
        return cosine_matrix(X)
    return -cdist(X, X, metric)


def _similarity(a: np.ndarray, b: np.ndarray, metric: str) -> float:
    if metric == "cosine":
        return cosine_similarity(a, b)
    return -float(cdist(a[np.newaxis, :], b[np.newaxis, :], metric)[0, 0])


def passage_clusters(
    X: np.ndarray,
    metric: str = "cosine",
) -> Tuple[List[int], List[int]]:
    """
    Splits sentences into two clusters in passage order: sentences 0 and 1
    seed the clusters, every later sentence joins the cluster whose running
    centroid it is more similar to (ties join the first cluster).
    """
    clusters: Tuple[List[int], List[int]] = ([0], [1])
    centroids = [X[0].astype(np.float64), X[1].astype(np.float64)]
    for i in range(2, X.shape[0]):
        first = _similarity(X[i], centroids[0], metric)
        second = _similarity(X[i], centroids[1], metric)
        c = 0 if first >= second - TIE_TOLERANCE * max(1.0, abs(second)) \
            else 1
        clusters[c].append(i)
        centroids[c] = centroids[c] + (X[i] - centroids[c]) / len(clusters[c])
    return clusters


def support_sets(
    vectors: SentenceVectors,
    metric: str = "cosine",
) -> List[Set[int]]:
    """
    Support set of every sentence `i`: the members of the cluster holding
    `i`'s nearest neighbour, without `i` itself. Equally near neighbours in
    both clusters contribute both clusters.
    """
    _check_metric(metric)
    X = vectors.matrix
    n = X.shape[0]
    if n < 2:
        return [set() for _ in range(n)]
    similarities = pairwise_similarity(X, metric)
    clusters = passage_clusters(X, metric)
    membership = np.zeros(n, dtype=np.int64)
    membership[clusters[1]] = 1

    sets = []
    for i in range(n):
        others = similarities[i].copy()
        others[i] = -np.inf
        best = others[first_max(others)]
        nearest = np.flatnonzero(
            others >= best - TIE_TOLERANCE * max(1.0, abs(best))
        )
        sets.append({
            m for c in sorted(set(membership[nearest]))
            for m in clusters[c] if m != i
        })
    return sets


def support_sets_rank(
    vectors: SentenceVectors,
    metric: str = "cosine",
) -> np.ndarray:
    """Number of support sets every sentence belongs to."""
    n = len(vectors)
    if n < 2:
        return np.ones(n)
    scores = np.zeros(n)
    for members in support_sets(vectors, metric):
        for s in members:
            scores[s] += 1
    return scores
