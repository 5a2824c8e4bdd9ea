"""
Wilcoxon signed-rank test and its application to pairs of confusion matrices.
"""
import logging
from typing import Sequence

import numpy as np
from scipy.stats import (norm, rankdata)

from SUMusic.errors import ValidationError
from SUMusic.models import (ConfusionMatrix, SignificanceResult)

logger = logging.getLogger("SUMusic")

MIN_PAIRS = 5
EXACT_MAX_N = 25
METHODS = ("auto", "exact", "approx")


def _exact_p_value(
    ranks: np.ndarray,
    statistic: float,
) -> float:
    """
    Two-sided p-value of `statistic` under the null distribution of the
    positive rank sum, by enumerating all sign assignments. Ranks are doubled
    so that average ranks of ties stay integral.
    """
    doubled = np.rint(2 * ranks).astype(np.int64)
    counts = np.zeros(int(doubled.sum()) + 1, dtype=np.int64)
    counts[0] = 1
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:len(counts) - r]
        counts = counts + shifted
    threshold = int(np.rint(2 * statistic))
    tail = counts[:threshold + 1].sum() / float(2 ** len(ranks))
    return float(min(1.0, 2 * tail))


def _approx_p_value(
    ranks: np.ndarray,
    abs_differences: np.ndarray,
    statistic: float,
) -> float:
    """Normal approximation with tie and continuity corrections."""
    n = len(ranks)
    mean = n * (n + 1) / 4.0
    variance = n * (n + 1) * (2 * n + 1) / 24.0
    _, tie_counts = np.unique(abs_differences, return_counts=True)
    variance -= np.sum(tie_counts ** 3 - tie_counts) / 48.0
    z = (statistic - mean + 0.5) / np.sqrt(variance)
    return float(min(1.0, 2 * norm.cdf(z)))


def wilcoxon_signed_rank(
    a: Sequence[float],
    b: Sequence[float],
    method: str = "auto",
    exact_max_n: int = EXACT_MAX_N,
) -> SignificanceResult:
    """
    Two-sided Wilcoxon signed-rank test of paired samples. Zero differences
    are dropped and tied magnitudes share their average rank.

    :param method: "exact" enumerates all sign assignments, "approx" uses the
            normal approximation; "auto" enumerates when there are at most
            `exact_max_n` non-zero differences without tied magnitudes.

    :raises SUMusic.errors.ValidationError: Samples differ in length or hold
            fewer than 5 pairs.
    """
    if method not in METHODS:
        raise ValidationError(
            f"Unknown Wilcoxon method '{method}', choose from "
            f"{', '.join(METHODS)}."
        )
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ValidationError(
            f"Paired samples differ in length: {len(a)} vs. {len(b)}."
        )
    if len(a) < MIN_PAIRS:
        raise ValidationError(
            f"Wilcoxon test needs at least {MIN_PAIRS} pairs, got {len(a)}."
        )

    differences = a - b
    differences = differences[differences != 0]
    n = len(differences)
    if n == 0:
        return SignificanceResult(
            statistic=0.0,
            p_value=1.0,
            n_effective=0,
            method=method,
        )
    magnitudes = np.abs(differences)
    ranks = rankdata(magnitudes)
    w_plus = float(ranks[differences > 0].sum())
    w_minus = float(ranks[differences < 0].sum())
    statistic = min(w_plus, w_minus)

    if method == "auto":
        tied = len(np.unique(magnitudes)) < n
        method = "exact" if n <= exact_max_n and not tied else "approx"
    if method == "exact":
        p_value = _exact_p_value(ranks, statistic)
    else:
        p_value = _approx_p_value(ranks, magnitudes, statistic)
    return SignificanceResult(
        statistic=statistic,
        p_value=p_value,
        n_effective=n,
        w_plus=w_plus,
        w_minus=w_minus,
        method=method,
    )


def error_matrix(matrix: ConfusionMatrix) -> np.ndarray:
    """
    Counts of every confusion matrix cell expressed as errors: off-diagonal
    cells stay, every diagonal cell becomes its class's misclassification
    count.
    """
    counts = matrix.counts.copy()
    diagonal = np.diag(counts).copy()
    np.fill_diagonal(counts, counts.sum(axis=1) - diagonal)
    return counts


def compare_confusion_matrices(
    a: ConfusionMatrix,
    b: ConfusionMatrix,
    method: str = "auto",
    exact_max_n: int = EXACT_MAX_N,
) -> SignificanceResult:
    """Cell-wise Wilcoxon test of the error matrices of two conditions."""
    if a.classes != b.classes:
        raise ValidationError(
            f"Class orders differ: {a.classes} vs. {b.classes}."
        )
    result = wilcoxon_signed_rank(
        error_matrix(a).ravel(),
        error_matrix(b).ravel(),
        method=method,
        exact_max_n=exact_max_n,
    )
    logger.debug(
        f"Wilcoxon ({result.method}): W={result.statistic}, "
        f"n={result.n_effective}, p={result.p_value:.4g}"
    )
    return result
