"""
Maximal Marginal Relevance with the sentence centroid as generic query.
"""
from typing import (List, Optional)

import numpy as np

from SUMusic.errors import ValidationError
from SUMusic.models import SentenceVectors
from SUMusic.summarizers.ranking import first_max
from SUMusic.tokenizer import (cosine_matrix, cosine_similarity)


def mmr_select(
    vectors: SentenceVectors,
    lam: float = 0.7,
    k: Optional[int] = None,
) -> List[int]:
    """
    Greedily picks the sentence maximizing
    `lam * sim(s, centroid) - (1 - lam) * max(sim(s, picked))`; ties go to the
    lower index.
    """
    if not 0 <= lam <= 1:
        raise ValidationError(f"MMR lambda must lie in [0, 1], got {lam}.")
    X = vectors.matrix
    n = X.shape[0]
    k = n if k is None else min(int(k), n)
    query = X.mean(axis=0)
    relevance = np.array([cosine_similarity(x, query) for x in X])
    similarities = cosine_matrix(X)

    ranking: List[int] = []
    redundancy = np.zeros(n)
    available = np.ones(n, dtype=bool)
    while len(ranking) < k:
        criterion = lam * relevance - (1.0 - lam) * redundancy
        criterion[~available] = -np.inf
        pick = first_max(criterion)
        ranking.append(pick)
        available[pick] = False
        redundancy = np.maximum(redundancy, similarities[:, pick])
    return ranking
