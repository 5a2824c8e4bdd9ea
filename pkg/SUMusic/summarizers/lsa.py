"""
Latent semantic analysis ranking over the word-by-sentence matrix.
"""
from typing import List

import numpy as np
from scipy import linalg

from SUMusic.models import SentenceVectors
from SUMusic.summarizers.ranking import rank_scores


def topic_count(singular_values: np.ndarray) -> int:
    """Number of singular values not below half of the largest one."""
    singular_values = np.sort(np.asarray(singular_values, dtype=np.float64))
    singular_values = singular_values[::-1]
    if len(singular_values) == 0 or singular_values[0] <= 0:
        return 0
    return int(np.sum(singular_values >= singular_values[0] / 2))


def lsa_scores(vectors: SentenceVectors) -> np.ndarray:
    """
    Length of each sentence in the space of the dominant topics,
    `sqrt(sum_i v_ij^2 sigma_i^2)`; all zeros for an all-zero matrix.
    """
    A = vectors.matrix.T
    _, sigma, Vt = linalg.svd(A, full_matrices=False)
    topics = topic_count(sigma)
    if topics == 0:
        return np.zeros(A.shape[1])
    weighted = Vt[:topics] * sigma[:topics, np.newaxis]
    return np.sqrt(np.sum(weighted ** 2, axis=0))


def lsa_rank(vectors: SentenceVectors) -> List[int]:
    """Sentences by descending `lsa_scores()`."""
    return rank_scores(lsa_scores(vectors))
