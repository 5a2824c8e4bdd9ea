"""Unit tests for `SUMusic.summarizers`"""
import numpy as np
import pytest

from SUMusic.errors import (
    EmptyInputError,
    TooLongError,
    ValidationError,
)
from SUMusic.models import (
    Algorithm,
    AudioClip,
    FrameMatrix,
    FramingSpec,
    GrasshopperParams,
    SentenceVectors,
    SimilarityGraph,
    TimeSpan,
    Weighting,
)
from SUMusic.summarizers import summarize
from SUMusic.summarizers.baselines import (
    average_similarity,
    average_similarity_scores,
    contiguous_baseline,
)
from SUMusic.summarizers.grasshopper import (
    absorbing_transition_matrix,
    expected_visits,
    grasshopper_rank,
    stationary_distribution,
    transition_matrix,
)
from SUMusic.summarizers.lexrank import lexrank
from SUMusic.summarizers.lsa import (lsa_rank, lsa_scores, topic_count)
from SUMusic.summarizers.mmr import mmr_select
from SUMusic.summarizers.ranking import (
    assemble_summary,
    rank_scores,
    similarity_graph,
    tile_spans,
)
from SUMusic.summarizers.support_sets import (
    passage_clusters,
    support_sets,
    support_sets_rank,
)
from SUMusic.tokenizer import cosine_similarity

# Test parameters
RATE = 8000
DUPLICATES = np.array([
    [1.0, 0.99, 0.1],
    [0.99, 1.0, 0.1],
    [0.1, 0.1, 1.0],
])
RANKERS = ["grasshopper", "lexrank", "lsa", "mmr", "support_sets"]


def _vectors(matrix):
    return SentenceVectors(np.asarray(matrix, dtype=float), Weighting.binary)


def _random_graph(rng, n):
    vectors = _vectors(rng.integers(0, 2, size=(n, 12)))
    return similarity_graph(vectors)


def _frames(rows, seconds=0.5):
    rows = np.asarray(rows, dtype=float)
    n = rows.shape[0]
    return FrameMatrix(
        rows=rows,
        feature_layout=[f"f{i}" for i in range(rows.shape[1])],
        framing=FramingSpec(seconds, seconds),
        frame_times=seconds * np.arange(n),
        duration_seconds=seconds * n,
    )


def _song(seconds=60):
    """Alternating noise and tone sections, 5 s each."""
    rng = np.random.default_rng(0)
    t = np.arange(5 * RATE) / RATE
    sections = []
    for i in range(seconds // 5):
        if i % 3 == 0:
            sections.append(0.3 * np.sin(2 * np.pi * 440 * t))
        elif i % 3 == 1:
            sections.append(rng.normal(scale=0.1, size=len(t)))
        else:
            sections.append(0.2 * np.sin(2 * np.pi * 1200 * t) +
                            rng.normal(scale=0.02, size=len(t)))
    return AudioClip(np.concatenate(sections), RATE)


def test_grasshopper_single_sentence():
    assert grasshopper_rank(SimilarityGraph([[1.0]])) == [0]


def test_grasshopper_absorption_suppresses_duplicate():
    W = SimilarityGraph(DUPLICATES)
    ranking = grasshopper_rank(W, GrasshopperParams.uniform(3, lam=1.0))
    assert ranking[0] in (0, 1)
    assert ranking[1] == 2


def test_grasshopper_absorption_oracle():
    params = GrasshopperParams.uniform(3, lam=1.0)
    P = transition_matrix(SimilarityGraph(DUPLICATES), params)
    eigenvalues, eigenvectors = np.linalg.eig(P.T)
    pi = np.real(eigenvectors[:, np.argmin(np.abs(eigenvalues - 1))])
    pi = pi / pi.sum()
    assert np.allclose(stationary_distribution(P), pi, atol=1e-9)
    Q = P[1:, 1:]
    N = np.linalg.inv(np.eye(2) - Q)
    visits = expected_visits(P, [0])
    assert visits[0] == 0.0
    assert np.allclose(visits[1:], N.sum(axis=0) / 2, atol=1e-9)
    assert visits[2] > visits[1]


def test_grasshopper_absorbing_row():
    P = transition_matrix(
        SimilarityGraph(DUPLICATES),
        GrasshopperParams.uniform(3, lam=0.9),
    )
    absorbing = absorbing_transition_matrix(P, [1])
    assert absorbing[1].tolist() == [0.0, 1.0, 0.0]
    assert np.array_equal(absorbing[[0, 2]], P[[0, 2]])


def test_grasshopper_zero_lambda_follows_prior():
    params = GrasshopperParams(lam=0.0, prior=np.array([0.1, 0.5, 0.4]))
    assert grasshopper_rank(SimilarityGraph(DUPLICATES), params)[0] == 1


def test_grasshopper_zero_row_is_uniform():
    W = SimilarityGraph(np.zeros((4, 4)))
    P = transition_matrix(W, GrasshopperParams.uniform(4, lam=0.95))
    assert np.allclose(P, 0.25)


def test_grasshopper_random_graphs():
    rng = np.random.default_rng(1)
    for _ in range(200):
        n = int(rng.integers(2, 11))
        W = _random_graph(rng, n)
        params = GrasshopperParams.uniform(n, lam=0.95)
        P = transition_matrix(W, params)
        assert np.allclose(P.sum(axis=1), 1.0)
        pi = stationary_distribution(P)
        assert np.abs(P.T @ pi - pi).sum() < 1e-10

        ranking = grasshopper_rank(W, params)
        assert sorted(ranking) == list(range(n))
        for k in range(1, n):
            ranked = ranking[:k]
            transient = [i for i in range(n) if i not in ranked]
            Q = P[np.ix_(transient, transient)]
            N = np.linalg.inv(np.eye(len(transient)) - Q)
            visits = expected_visits(P, ranked)
            assert np.allclose(
                visits[transient],
                N.sum(axis=0) / len(transient),
                atol=1e-9,
            )


def test_grasshopper_partial_ranking():
    W = _random_graph(np.random.default_rng(2), 8)
    assert grasshopper_rank(W, k=3) == grasshopper_rank(W)[:3]


def test_grasshopper_invalid_params():
    with pytest.raises(ValidationError):
        GrasshopperParams(lam=1.5, prior=np.full(3, 1 / 3))
    with pytest.raises(ValidationError):
        GrasshopperParams(lam=0.5, prior=np.array([0.5, 0.6]))
    with pytest.raises(ValidationError):
        transition_matrix(
            SimilarityGraph(DUPLICATES),
            GrasshopperParams.uniform(2, lam=0.5),
        )


def test_lexrank_identical_sentences():
    scores = lexrank(SimilarityGraph(np.ones((5, 5))))
    assert np.allclose(scores, scores[0])


def test_lexrank_no_edges():
    scores = lexrank(SimilarityGraph(np.eye(4)), d=0.85, threshold=1.5)
    assert np.allclose(scores, 0.15 / 4, rtol=0, atol=1e-15)


def test_lexrank_path_graph():
    W = np.array([
        [1.0, 0.5, 0.0],
        [0.5, 1.0, 0.3],
        [0.0, 0.3, 1.0],
    ])
    d = 0.85
    adjacency = W - np.eye(3)
    M = adjacency / adjacency.sum(axis=0)
    expected = np.linalg.solve(np.eye(3) - d * M, np.full(3, (1 - d) / 3))
    scores = lexrank(SimilarityGraph(W), d=d, threshold=0.1)
    assert np.allclose(scores, expected, atol=1e-8)
    assert np.max(np.abs((1 - d) / 3 + d * M @ scores - scores)) < 1e-8


def test_lexrank_unweighted():
    W = np.array([
        [1.0, 0.5, 0.0],
        [0.5, 1.0, 0.3],
        [0.0, 0.3, 1.0],
    ])
    d = 0.85
    adjacency = (W - np.eye(3) > 0).astype(float)
    M = adjacency / adjacency.sum(axis=0)
    expected = np.linalg.solve(np.eye(3) - d * M, np.full(3, (1 - d) / 3))
    scores = lexrank(SimilarityGraph(W), d=d, threshold=0.1, weighted=False)
    assert np.allclose(scores, expected, atol=1e-8)


def test_lexrank_invalid_damping():
    with pytest.raises(ValidationError):
        lexrank(SimilarityGraph(np.eye(2)), d=1.0)


def test_lsa_topic_count():
    assert topic_count(np.array([10.0, 6.0, 4.0])) == 2
    assert topic_count(np.array([4.0, 10.0, 5.0])) == 2
    assert topic_count(np.zeros(3)) == 0


def test_lsa_rank_one():
    u = np.array([1.0, 2.0, 0.5, 1.0])
    v = np.array([0.2, -0.9, 0.4, 0.1, 0.0])
    scores = lsa_scores(_vectors(np.outer(v, u)))
    assert int(np.argmax(scores)) == 1
    assert np.allclose(
        scores / scores.max(),
        np.abs(v) / np.abs(v).max(),
        atol=1e-9,
    )
    assert lsa_rank(_vectors(np.outer(v, u))) == [1, 2, 0, 3, 4]


def test_lsa_eigen_oracle():
    rng = np.random.default_rng(3)
    for _ in range(200):
        A = rng.normal(size=(6, 4))
        eigenvalues, V = np.linalg.eigh(A.T @ A)
        order = np.argsort(eigenvalues)[::-1]
        sigma = np.sqrt(np.maximum(eigenvalues[order], 0.0))
        V = V[:, order]
        topics = int(np.sum(sigma >= sigma[0] / 2))
        expected = np.sqrt(np.sum(
            (V[:, :topics] * sigma[:topics]) ** 2,
            axis=1,
        ))
        assert np.allclose(lsa_scores(_vectors(A.T)), expected, atol=1e-8)


def test_lsa_zero_matrix():
    scores = lsa_scores(_vectors(np.zeros((4, 3))))
    assert scores.tolist() == [0.0] * 4
    assert rank_scores(scores) == [0, 1, 2, 3]
    assert lsa_rank(_vectors(np.zeros((4, 3)))) == [0, 1, 2, 3]


def test_mmr_relevance_only():
    rng = np.random.default_rng(4)
    X = rng.uniform(size=(7, 5))
    centroid = X.mean(axis=0)
    relevance = [cosine_similarity(x, centroid) for x in X]
    assert mmr_select(_vectors(X), lam=1.0) == rank_scores(relevance)


def test_mmr_penalizes_duplicate():
    X = [[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
    assert mmr_select(_vectors(X), lam=0.5) == [0, 2, 1]


def test_mmr_brute_force():
    rng = np.random.default_rng(5)
    for _ in range(200):
        X = rng.uniform(size=(5, 4))
        centroid = X.mean(axis=0)
        expected = []
        while len(expected) < 5:
            best, best_value = None, -np.inf
            for i in range(5):
                if i in expected:
                    continue
                redundancy = max(
                    [cosine_similarity(X[i], X[j]) for j in expected],
                    default=0.0,
                )
                value = 0.7 * cosine_similarity(X[i], centroid) - \
                    0.3 * redundancy
                if value > best_value:
                    best, best_value = i, value
            expected.append(best)
        assert mmr_select(_vectors(X), lam=0.7) == expected


def test_mmr_invalid_lambda():
    with pytest.raises(ValidationError):
        mmr_select(_vectors(np.eye(3)), lam=-0.1)


def test_support_sets_identical_sentences():
    vectors = _vectors(np.ones((5, 4)))
    assert passage_clusters(vectors.matrix) == ([0, 2, 3, 4], [1])
    assert support_sets(vectors) == [
        {1, 2, 3, 4}, {0, 2, 3, 4}, {0, 1, 3, 4}, {0, 1, 2, 4}, {0, 1, 2, 3},
    ]
    assert support_sets_rank(vectors).tolist() == [4.0] * 5
    assert rank_scores(support_sets_rank(vectors)) == [0, 1, 2, 3, 4]


def test_support_sets_tied_neighbours():
    angles = np.radians([0.0, 90.0, 45.0])
    vectors = _vectors(np.column_stack([np.cos(angles), np.sin(angles)]))
    assert passage_clusters(vectors.matrix) == ([0, 2], [1])
    assert support_sets(vectors) == [{2}, {0, 2}, {0, 1}]
    assert support_sets_rank(vectors).tolist() == [2.0, 1.0, 2.0]


def test_support_sets_cluster_members_only():
    angles = np.radians([0.0, 90.0, 40.0, 60.0])
    vectors = _vectors(np.column_stack([np.cos(angles), np.sin(angles)]))
    assert passage_clusters(vectors.matrix) == ([0, 2], [1, 3])
    assert support_sets(vectors) == [{2}, {3}, {1, 3}, {0, 2}]
    assert support_sets_rank(vectors).tolist() == [1.0, 1.0, 2.0, 2.0]


def test_support_sets_exclude_self():
    rng = np.random.default_rng(6)
    for metric in ("cosine", "euclidean", "cityblock"):
        vectors = _vectors(rng.uniform(size=(9, 4)))
        for i, members in enumerate(support_sets(vectors, metric)):
            assert i not in members


def test_support_sets_naive_enumeration():
    rng = np.random.default_rng(7)
    X = np.vstack([
        [1.0, 0.0, 0.0] + rng.uniform(0, 0.1, size=(3, 3)),
        [0.0, 0.0, 1.0] + rng.uniform(0, 0.1, size=(3, 3)),
    ])[[0, 3, 1, 4, 2, 5]]
    n = len(X)

    first, second = [0], [1]
    c1, c2 = X[0].copy(), X[1].copy()
    for i in range(2, n):
        if cosine_similarity(X[i], c1) >= cosine_similarity(X[i], c2):
            first.append(i)
            c1 = X[first].mean(axis=0)
        else:
            second.append(i)
            c2 = X[second].mean(axis=0)
    expected = np.zeros(n)
    for i in range(n):
        sims = {j: cosine_similarity(X[i], X[j]) for j in range(n) if j != i}
        nearest = max(sorted(sims), key=lambda j: sims[j])
        cluster = first if nearest in first else second
        for s in cluster:
            if s != i:
                expected[s] += 1

    assert np.allclose(support_sets_rank(_vectors(X)), expected)


def test_support_sets_single_sentence():
    assert support_sets_rank(_vectors([[1.0, 0.0]])).tolist() == [1.0]


def test_support_sets_unknown_metric():
    with pytest.raises(ValidationError):
        support_sets_rank(_vectors(np.eye(3)), metric="chebyshev")


@pytest.mark.parametrize("duration, L, anchor, expected, short", [
    (283.0, 30.0, "middle", (126.5, 156.5), False),
    (283.0, 30.0, "begin", (0.0, 30.0), False),
    (283.0, 30.0, "end", (253.0, 283.0), False),
    (30.0, 30.0, "middle", (0.0, 30.0), False),
    (30.0, 30.0, "end", (0.0, 30.0), False),
    (20.0, 30.0, "begin", (0.0, 20.0), True),
])
def test_contiguous_baseline(duration, L, anchor, expected, short):
    span, flag = contiguous_baseline(duration, L, anchor)
    assert (span.start_seconds, span.end_seconds) == pytest.approx(expected)
    assert flag is short


def test_average_similarity_homogeneous():
    frames = _frames(np.ones((20, 3)))
    span = average_similarity(frames, 3.0)
    assert (span.start_seconds, span.end_seconds) == (0.0, 3.0)


def test_average_similarity_whole_song():
    frames = _frames(np.random.default_rng(8).uniform(size=(20, 3)))
    span = average_similarity(frames, 10.0)
    assert (span.start_seconds, span.end_seconds) == (0.0, 10.0)


def test_average_similarity_too_long():
    with pytest.raises(TooLongError):
        average_similarity(_frames(np.ones((20, 3))), 10.5)


def test_average_similarity_majority_half():
    rng = np.random.default_rng(9)
    rows = np.vstack([
        [1.0, 0.0, 0.0] + rng.uniform(0, 0.2, size=(14, 3)),
        [0.0, 0.0, 1.0] + rng.uniform(0, 0.2, size=(6, 3)),
    ])
    frames = _frames(rows)
    width = 6
    expected = []
    for start in range(15):
        expected.append(np.mean([
            cosine_similarity(rows[i], rows[j])
            for i in range(start, start + width)
            for j in range(20)
        ]))
    scores = average_similarity_scores(frames, 3.0)
    assert np.allclose(scores, expected, atol=1e-12)
    span = average_similarity(frames, 3.0)
    assert span.start_seconds == 0.5 * int(np.argmax(expected))
    assert span.end_seconds <= 7.0


def test_rank_scores_ties():
    assert rank_scores([1.0, 3.0, 3.0, 0.0]) == [1, 2, 0, 3]
    assert rank_scores([2.449489742783178, 2.449489742783179]) == [0, 1]
    assert rank_scores([0.5, 0.5 + 1e-14, 0.25, 0.5 - 1e-14]) == [0, 1, 3, 2]
    assert rank_scores([]) == []


@pytest.mark.parametrize("n", [2, 3, 6, 11, 30])
@pytest.mark.parametrize("row", [[1, 1, 1, 1], [1, 0, 1, 1, 0, 1]])
def test_rankers_identical_sentences_keep_order(n, row):
    vectors = _vectors(np.tile(row, (n, 1)))
    W = similarity_graph(vectors)
    expected = list(range(n))
    assert grasshopper_rank(W) == expected
    assert rank_scores(lexrank(W)) == expected
    assert lsa_rank(vectors) == expected
    assert mmr_select(vectors) == expected
    assert rank_scores(support_sets_rank(vectors)) == expected


def test_tile_spans():
    spans = [TimeSpan(0.0, 1.0), TimeSpan(0.5, 1.5), TimeSpan(1.0, 2.0)]
    assert tile_spans(spans) == [
        TimeSpan(0.0, 0.5),
        TimeSpan(0.5, 1.0),
        TimeSpan(1.0, 2.0),
    ]


def test_assemble_summary_truncates():
    spans = [TimeSpan(0.0, 12.0), TimeSpan(12.0, 22.0), TimeSpan(22.0, 31.0)]
    selection = assemble_summary([0, 1, 2], spans, 30.0)
    assert selection.selected == [0, 1, 2]
    assert [s.duration_seconds for s in selection.spans] == \
        pytest.approx([12.0, 10.0, 8.0])
    assert selection.total_seconds == pytest.approx(30.0)


def test_assemble_summary_top_sentences():
    spans = [TimeSpan(5.0 * i, 5.0 * (i + 1)) for i in range(12)]
    ranking = list(np.random.default_rng(10).permutation(12))
    selection = assemble_summary(ranking, spans, 30.0)
    assert selection.selected == sorted(ranking[:6])
    assert selection.total_seconds == 30.0
    starts = [s.start_seconds for s in selection.spans]
    assert starts == sorted(starts)


def test_assemble_summary_short_song():
    spans = [TimeSpan(5.0 * i, 5.0 * (i + 1)) for i in range(4)]
    selection = assemble_summary([3, 1, 0, 2], spans, 30.0)
    assert selection.selected == [0, 1, 2, 3]
    assert selection.total_seconds == 20.0


def test_assemble_summary_invalid():
    spans = [TimeSpan(0.0, 5.0)]
    with pytest.raises(EmptyInputError):
        assemble_summary([], spans, 30.0)
    with pytest.raises(ValidationError):
        assemble_summary([0], spans, 0.0)


@pytest.mark.parametrize("algorithm", RANKERS)
def test_summarize_rankers(algorithm):
    clip = _song()
    selection = summarize(clip, algorithm, duration=10.0)
    assert selection.algorithm is Algorithm.parse(algorithm)
    assert sorted(selection.ranking) == list(range(12))
    assert selection.total_seconds == pytest.approx(10.0)
    ends = [s.end_seconds for s in selection.spans]
    starts = [s.start_seconds for s in selection.spans]
    assert all(e <= s for e, s in zip(ends, starts[1:]))
    again = summarize(clip, algorithm, duration=10.0)
    assert again.to_dict() == selection.to_dict()


def test_summarize_parameters_recorded():
    selection = summarize(
        _song(30),
        "lexrank",
        duration=10.0,
        parameters={"sentence_size": 5, "weighting": "tfidf"},
    )
    assert selection.parameters["sentence_size"] == 5
    assert selection.parameters["weighting"] == "tfidf"
    assert selection.parameters["damping"] == 0.85
    assert len(selection.ranking) == 12
    assert selection.parameters["n_mels"] == 40


def test_summarize_mel_settings_reach_frames():
    clip = _song(30)
    default = summarize(clip, "lsa", duration=10.0)
    coarse = summarize(
        clip,
        "lsa",
        duration=10.0,
        parameters={"n_mels": 20, "log_floor": 1e-6},
    )
    assert coarse.parameters["n_mels"] == 20
    assert coarse.parameters["log_floor"] == 1e-6
    assert default.parameters["log_floor"] == 1e-10


def test_summarize_baselines():
    clip = _song(30)
    full = summarize(clip, "full")
    assert full.spans == [TimeSpan(0.0, 30.0)]
    middle = summarize(clip, "middle", duration=10.0)
    assert middle.spans == [TimeSpan(10.0, 20.0)]
    assert middle.warnings == []
    short = summarize(clip, "begin", duration=40.0)
    assert short.spans == [TimeSpan(0.0, 30.0)]
    assert short.warnings
    avgsim = summarize(clip, "avgsim", duration=10.0)
    assert avgsim.total_seconds == pytest.approx(10.0)


def test_summarize_invalid():
    clip = _song(30)
    with pytest.raises(ValidationError):
        summarize(clip, "textrank")
    with pytest.raises(ValidationError):
        summarize(clip, "lexrank", parameters={"alpha": 1})
