"""
LexRank: eigenvector centrality of the thresholded sentence graph.
"""
import logging

import numpy as np

from SUMusic.errors import ValidationError
from SUMusic.models import SimilarityGraph

logger = logging.getLogger("SUMusic")

TOLERANCE = 1e-10
MAX_ITERATIONS = 100000


def centrality_matrix(
    W: SimilarityGraph,
    threshold: float = 0.1,
    weighted: bool = True,
) -> np.ndarray:
    """
    Column-normalized adjacency `M` such that LexRank scores solve
    `S = (1 - d) / N + d M S`. Edges link distinct sentences whose similarity
    reaches `threshold`; without `weighted` every edge counts 1.
    """
    adjacency = np.where(W.matrix >= threshold, W.matrix, 0.0)
    np.fill_diagonal(adjacency, 0.0)
    if not weighted:
        adjacency = (adjacency > 0).astype(np.float64)
    out_weight = adjacency.sum(axis=0)
    return np.divide(
        adjacency,
        out_weight[np.newaxis, :],
        out=np.zeros_like(adjacency),
        where=out_weight[np.newaxis, :] > 0,
    )


def lexrank(
    W: SimilarityGraph,
    d: float = 0.85,
    threshold: float = 0.1,
    weighted: bool = True,
    tolerance: float = TOLERANCE,
    max_iterations: int = MAX_ITERATIONS,
) -> np.ndarray:
    """
    LexRank score of every sentence, iterated to its fixed point. Isolated
    sentences score exactly `(1 - d) / N`.

    :param d: Damping factor in (0, 1).
    """
    if not 0 < d < 1:
        raise ValidationError(f"Damping factor must lie in (0, 1), got {d}.")
    n = W.n
    M = centrality_matrix(W, threshold=threshold, weighted=weighted)
    base = (1.0 - d) / n
    scores = np.full(n, 1.0 / n)
    for iteration in range(1, max_iterations + 1):
        updated = base + d * (M @ scores)
        change = np.max(np.abs(updated - scores))
        scores = updated
        if change < tolerance:
            logger.debug(f"LexRank converged after {iteration} iterations.")
            break
    else:
        logger.warning(
            f"LexRank did not converge in {max_iterations} iterations."
        )
    return scores
