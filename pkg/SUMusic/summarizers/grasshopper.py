"""
GRASSHOPPER: ranking by an absorbing random walk over the sentence graph.
Ranked sentences turn into absorbing states, which drains the expected visits
of the sentences similar to them.
"""
import logging
from typing import (List, Optional, Sequence)

import numpy as np
from scipy import linalg

from SUMusic.errors import ValidationError
from SUMusic.models import (GrasshopperParams, SimilarityGraph)
from SUMusic.summarizers.ranking import first_max

logger = logging.getLogger("SUMusic")

POWER_TOLERANCE = 1e-12
POWER_MAX_ITERATIONS = 100000


def transition_matrix(
    W: SimilarityGraph,
    params: GrasshopperParams,
) -> np.ndarray:
    """
    `lambda * O + (1 - lambda) * 1 r^T`, with `O` the row-normalized
    similarity matrix; all-zero rows of `W` are replaced by uniform rows.
    """
    n = W.n
    if len(params.prior) != n:
        raise ValidationError(
            f"Prior of length {len(params.prior)} does not match {n} "
            "sentences."
        )
    O = np.array(W.matrix, dtype=np.float64)
    row_sums = O.sum(axis=1)
    empty = row_sums <= 0
    O[empty] = 1.0
    row_sums[empty] = n
    O /= row_sums[:, np.newaxis]
    return params.lam * O + (1.0 - params.lam) * np.outer(
        np.ones(n),
        params.prior,
    )


def stationary_distribution(
    P: np.ndarray,
    tolerance: float = POWER_TOLERANCE,
    max_iterations: int = POWER_MAX_ITERATIONS,
) -> np.ndarray:
    """Stationary distribution of a row-stochastic matrix (power iteration)."""
    n = P.shape[0]
    pi = np.full(n, 1.0 / n)
    for _ in range(max_iterations):
        updated = P.T @ pi
        updated /= updated.sum()
        if np.abs(updated - pi).sum() < tolerance:
            return updated
        pi = updated
    logger.warning(
        f"Power iteration did not converge in {max_iterations} iterations; "
        "solving for the stationary distribution directly."
    )
    system = np.vstack([P.T - np.eye(n), np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    pi = linalg.lstsq(system, rhs)[0]
    return pi / pi.sum()


def absorbing_transition_matrix(
    P: np.ndarray,
    ranked: Sequence[int],
) -> np.ndarray:
    """Copy of `P` in which every ranked state only transitions to itself."""
    absorbing = np.array(P, dtype=np.float64)
    for g in ranked:
        absorbing[g] = 0.0
        absorbing[g, g] = 1.0
    return absorbing


def expected_visits(
    P: np.ndarray,
    ranked: Sequence[int],
) -> np.ndarray:
    """
    Expected number of visits to every transient state before absorption,
    averaged over all transient starting states: `N^T 1 / |U|` with
    `N = (I - Q)^-1` and `Q` the transient block of the absorbing chain.

    :return: Vector over all states; absorbing states get 0.
    """
    n = P.shape[0]
    ranked_set = set(int(g) for g in ranked)
    transient = [i for i in range(n) if i not in ranked_set]
    visits = np.zeros(n)
    if not transient:
        return visits
    Q = absorbing_transition_matrix(P, ranked)[np.ix_(transient, transient)]
    system = (np.eye(len(transient)) - Q).T
    ones = np.ones(len(transient))
    try:
        v = linalg.solve(system, ones)
    except linalg.LinAlgError:
        logger.warning(
            "Absorbing system is singular; using a least-squares solution."
        )
        v = linalg.lstsq(system, ones)[0]
    visits[transient] = v / len(transient)
    return visits


def grasshopper_rank(
    W: SimilarityGraph,
    params: Optional[GrasshopperParams] = None,
    k: Optional[int] = None,
) -> List[int]:
    """
    Ranks `k` sentences (all by default). The first one maximizes the
    stationary distribution of the walk, every further one the expected
    visits of the walk absorbed by the sentences ranked so far. Ties go to
    the lower index.
    """
    n = W.n
    if n < 1:
        raise ValidationError("GRASSHOPPER needs at least one sentence.")
    if params is None:
        params = GrasshopperParams.uniform(n, lam=0.95)
    k = n if k is None else min(int(k), n)
    P = transition_matrix(W, params)

    ranking = [first_max(stationary_distribution(P))]
    while len(ranking) < k:
        visits = expected_visits(P, ranking)
        visits[ranking] = -np.inf
        ranking.append(first_max(visits))
    return ranking
