"""
Turns per-frame features into a document: a k-means vocabulary of musical
words, the word sequence, fixed-size sentences and weighted sentence vectors.
"""
import logging
import math
from typing import (List, Tuple, Union)

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.cluster import kmeans_plusplus

from SUMusic.errors import (EmptyInputError, ValidationError)
from SUMusic.models import (
    FrameMatrix,
    SentenceVectors,
    TimeSpan,
    TokenizedSong,
    Vocabulary,
    Weighting,
)

logger = logging.getLogger("SUMusic")

MAX_ITERATIONS = 300
SHIFT_TOLERANCE = 1e-6


def build_vocabulary(
    frames: FrameMatrix,
    K: int,
    seed: int,
    max_iterations: int = MAX_ITERATIONS,
    tolerance: float = SHIFT_TOLERANCE,
) -> Vocabulary:
    """
    Clusters the frames of one song with k-means; the centroids are the
    song's vocabulary.

    Seeding is k-means++ with a fixed random state, followed by Lloyd
    iterations until no centroid moves by `tolerance` or more. A cluster that
    runs empty is reseeded with the frame farthest from its centroid.

    :raises SUMusic.errors.ValidationError: `K` < 1 or more words than
            frames requested.
    """
    X = frames.rows
    n = X.shape[0]
    if K < 1:
        raise ValidationError(f"Vocabulary size must be >= 1, got {K}.")
    if K > n:
        raise ValidationError(
            f"Cannot build {K} words from {n} frames."
        )
    centroids, _ = kmeans_plusplus(X, n_clusters=K, random_state=seed)
    centroids = centroids.astype(np.float64)

    history: List[float] = []
    iteration = 0
    for iteration in range(1, max_iterations + 1):
        distances = cdist(X, centroids, "sqeuclidean")
        labels = np.argmin(distances, axis=1)
        history.append(float(distances[np.arange(n), labels].sum()))

        updated = centroids.copy()
        counts = np.bincount(labels, minlength=K)
        for k in range(K):
            if counts[k]:
                updated[k] = X[labels == k].mean(axis=0)
        for k in np.flatnonzero(counts == 0):
            farthest = int(np.argmax(distances[np.arange(n), labels]))
            logger.warning(
                f"k-means cluster {k} ran empty; reseeding with frame "
                f"{farthest}."
            )
            updated[k] = X[farthest]
            labels[farthest] = k
            distances[farthest, labels[farthest]] = 0.0

        shift = np.max(np.linalg.norm(updated - centroids, axis=1))
        centroids = updated
        if shift < tolerance:
            break

    distances = cdist(X, centroids, "sqeuclidean")
    distortion = float(distances.min(axis=1).sum())
    logger.debug(
        f"k-means: K={K}, {iteration} iterations, distortion={distortion:.6g}"
    )
    return Vocabulary(
        centroids=centroids,
        distortion=distortion,
        seed=seed,
        history=history + [distortion],
        iterations=iteration,
    )


def quantize(
    frames: FrameMatrix,
    vocab: Vocabulary,
) -> np.ndarray:
    """Maps every frame to its nearest word; ties go to the lowest index."""
    if frames.dimension != vocab.centroids.shape[1]:
        raise ValidationError(
            f"Frame dimension {frames.dimension} does not match vocabulary "
            f"dimension {vocab.centroids.shape[1]}."
        )
    distances = cdist(frames.rows, vocab.centroids, "sqeuclidean")
    return np.argmin(distances, axis=1).astype(np.int64)


def segment_sentences(
    words: Union[np.ndarray, int],
    S: int,
) -> List[Tuple[int, int]]:
    """
    Splits a word sequence into consecutive half-open ranges of `S` words.
    A shorter remainder is kept as its own sentence if it holds at least
    half of `S` (rounded up) words and is merged into the previous sentence
    otherwise.

    :param words: Word sequence or its length.
    """
    n = words if isinstance(words, int) else len(words)
    if n < 1:
        raise EmptyInputError("Cannot segment an empty word sequence.")
    if S < 1:
        raise ValidationError(f"Sentence size must be >= 1, got {S}.")
    sentences = [(start, start + S) for start in range(0, n - S + 1, S)]
    covered = sentences[-1][1] if sentences else 0
    remainder = n - covered
    if remainder:
        if sentences and remainder < math.ceil(S / 2):
            sentences[-1] = (sentences[-1][0], n)
        else:
            sentences.append((covered, n))
    return sentences


def tokenize(
    frames: FrameMatrix,
    K: int,
    S: int,
    seed: int,
) -> TokenizedSong:
    """Vocabulary, word sequence, sentences and sentence extents of a song."""
    vocab = build_vocabulary(frames, K=K, seed=seed)
    words = quantize(frames, vocab)
    sentences = segment_sentences(words, S)
    frame_seconds = frames.framing.frame_seconds
    spans = []
    for start, end in sentences:
        span_end = min(
            frames.frame_times[end - 1] + frame_seconds,
            frames.duration_seconds,
        )
        spans.append(TimeSpan(frames.frame_times[start], span_end))
    return TokenizedSong(
        words=words,
        sentences=sentences,
        sentence_spans=spans,
        vocabulary=vocab,
    )


def term_counts(tokenized: TokenizedSong) -> np.ndarray:
    """Sentence-by-word occurrence counts."""
    K = tokenized.vocabulary.size
    return np.vstack([
        np.bincount(tokenized.words[start:end], minlength=K)
        for start, end in tokenized.sentences
    ]).astype(np.float64)


def weigh_sentences(
    tokenized: TokenizedSong,
    scheme: Union[Weighting, str] = Weighting.binary,
) -> SentenceVectors:
    """
    One weight per sentence and word.

    binary: 1 if the word occurs in the sentence.
    tfidf: `(1 + ln tf) * ln(N_s / df)`; 0 where the word does not occur.
    """
    scheme = Weighting(scheme)
    if not tokenized.sentences:
        raise EmptyInputError("Song has no sentences.")
    counts = term_counts(tokenized)
    present = counts > 0
    if scheme is Weighting.binary:
        return SentenceVectors(present.astype(np.float64), scheme)

    n_sentences = counts.shape[0]
    df = present.sum(axis=0)
    idf = np.log(n_sentences / np.maximum(df, 1))
    tf = np.zeros_like(counts)
    tf[present] = 1.0 + np.log(counts[present])
    return SentenceVectors(tf * idf, scheme)


def cosine_similarity(
    a: np.ndarray,
    b: np.ndarray,
) -> float:
    """Cosine of the angle between two vectors; 0 if either is zero."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValidationError(
            f"Cannot compare vectors of shapes {a.shape} and {b.shape}."
        )
    norm = np.linalg.norm(a) * np.linalg.norm(b)
    if norm == 0:
        return 0.0
    return float(np.clip(np.dot(a, b) / norm, -1.0, 1.0))


def cosine_matrix(matrix: np.ndarray) -> np.ndarray:
    """
    Pairwise `cosine_similarity()` of the rows of `matrix`; the diagonal is
    exactly 1 for non-zero rows.
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    norms = np.linalg.norm(matrix, axis=1)
    nonzero = norms > 0
    unit = np.zeros_like(matrix)
    unit[nonzero] = matrix[nonzero] / norms[nonzero, np.newaxis]
    similarities = np.clip(unit @ unit.T, -1.0, 1.0)
    similarities = (similarities + similarities.T) / 2
    np.fill_diagonal(similarities, nonzero.astype(np.float64))
    return similarities


def dump_tokenized(
    tokenized: TokenizedSong,
    path: str,
) -> None:
    """Writes the word sequence and the sentence table as plain text."""
    with open(path, "w") as f:
        f.write("# words\n")
        f.write(" ".join(str(w) for w in tokenized.words) + "\n")
        f.write("# sentence\tfirst_word\tend_word\tstart_seconds\t"
                "end_seconds\n")
        for i, ((start, end), span) in enumerate(zip(
            tokenized.sentences,
            tokenized.sentence_spans,
        )):
            f.write(
                f"{i}\t{start}\t{end}\t{span.start_seconds:.6f}\t"
                f"{span.end_seconds:.6f}\n"
            )
