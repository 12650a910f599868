"""kNN normality scoring against a full-sort brute-force oracle."""

import numpy as np
import pytest

from logicad.encoder import Vocabulary, init_params
from logicad.knn import (
    DEFAULT_K,
    LibraryError,
    ReferenceLibrary,
    build_library,
    score,
    score_split,
    parse_score_record,
    score_record,
)


def _random_unit_rows(rng, n, d):
    m = rng.normal(size=(n, d))
    return m / np.linalg.norm(m, axis=1, keepdims=True)


def _library(rng, n, d):
    return ReferenceLibrary(
        vectors=_random_unit_rows(rng, n, d),
        ids=tuple(f"train-{i:04d}" for i in range(n)),
    )


def _brute_force(test_vector, library, k):
    """Full sort over (distance, index) pairs; no partial selection tricks."""
    pairs = sorted(
        (float(np.linalg.norm(row - test_vector)), i)
        for i, row in enumerate(library.vectors)
    )[: min(k, library.size)]
    mean_distance = sum(d for d, _ in pairs) / len(pairs)
    return 1.0 / (1.0 + mean_distance), mean_distance, [library.ids[i] for _, i in pairs]


def test_score_matches_brute_force_on_random_libraries():
    rng = np.random.default_rng(314)
    for _ in range(100):
        n = int(rng.integers(1, 201))
        d = int(rng.integers(2, 17))
        library = _library(rng, n, d)
        query = _random_unit_rows(rng, 1, d)[0]
        got = score(query, library, k=5)
        want_score, want_mean, want_ids = _brute_force(query, library, 5)
        assert abs(got.mean_distance - want_mean) < 1e-12
        assert abs(got.score - want_score) < 1e-12
        assert list(got.neighbor_ids) == want_ids


def test_score_bounds_for_unit_norm_inputs():
    rng = np.random.default_rng(2)
    library = _library(rng, 50, 8)
    for _ in range(200):
        result = score(_random_unit_rows(rng, 1, 8)[0], library, k=5)
        assert 1.0 / 3.0 - 1e-12 <= result.score <= 1.0 + 1e-12


def test_duplicate_of_library_vectors_scores_exactly_one():
    rng = np.random.default_rng(4)
    base = _random_unit_rows(rng, 1, 6)[0]
    vectors = np.stack([base] * 5 + list(_random_unit_rows(rng, 10, 6)))
    library = ReferenceLibrary(vectors=vectors,
                               ids=tuple(f"t{i}" for i in range(15)))
    result = score(base, library, k=5)
    assert result.score == 1.0
    assert result.mean_distance == 0.0
    assert result.neighbor_ids == ("t0", "t1", "t2", "t3", "t4")


def test_orthonormal_library_gives_the_closed_form_score():
    library = ReferenceLibrary(vectors=np.eye(6), ids=tuple("abcdef"))
    result = score(np.eye(6)[0], library, k=5)
    # a library member: one zero distance and four sqrt(2) distances
    assert abs(result.mean_distance - 4 * np.sqrt(2.0) / 5.0) < 1e-12
    # a query orthogonal to every member sits at sqrt(2) from all of them
    library7 = ReferenceLibrary(vectors=np.hstack([np.eye(6), np.zeros((6, 1))]),
                                ids=tuple("abcdef"))
    q = np.zeros(7)
    q[6] = 1.0
    result = score(q, library7, k=5)
    assert abs(result.score - 1.0 / (1.0 + np.sqrt(2.0))) < 1e-12
    assert abs(result.score - 0.41421) < 5e-6


def test_exact_distance_ties_break_by_ascending_library_index():
    base = np.array([1.0, 0.0])
    vectors = np.stack([[0.0, 1.0], [0.0, -1.0], [0.0, 1.0], [-1.0, 0.0],
                        [0.0, -1.0]])
    vectors = vectors / np.linalg.norm(vectors, axis=1, keepdims=True)
    library = ReferenceLibrary(vectors=vectors, ids=("a", "b", "c", "d", "e"))
    result = score(base, library, k=2)
    assert result.neighbor_ids == ("a", "b")


def test_k_larger_than_library_uses_every_member():
    rng = np.random.default_rng(6)
    library = _library(rng, 3, 5)
    query = _random_unit_rows(rng, 1, 5)[0]
    result = score(query, library, k=10)
    assert len(result.neighbor_ids) == 3
    assert abs(result.mean_distance
               - np.linalg.norm(library.vectors - query, axis=1).mean()) < 1e-12


def test_adding_a_library_vector_never_increases_the_mean_distance():
    rng = np.random.default_rng(8)
    query = _random_unit_rows(rng, 1, 6)[0]
    vectors = _random_unit_rows(rng, 30, 6)
    for extra in _random_unit_rows(rng, 10, 6):
        small = ReferenceLibrary(vectors=vectors,
                                 ids=tuple(str(i) for i in range(len(vectors))))
        grown = ReferenceLibrary(
            vectors=np.vstack([vectors, extra[None, :]]),
            ids=tuple(str(i) for i in range(len(vectors) + 1)),
        )
        assert score(query, grown, k=5).mean_distance \
            <= score(query, small, k=5).mean_distance + 1e-12


def test_non_unit_queries_are_renormalized_and_flagged():
    rng = np.random.default_rng(10)
    library = _library(rng, 20, 4)
    query = _random_unit_rows(rng, 1, 4)[0]
    unit = score(query, library, k=5)
    scaled = score(query * 7.5, library, k=5)
    assert not unit.renormalized
    assert scaled.renormalized
    assert abs(unit.score - scaled.score) < 1e-12
    assert unit.neighbor_ids == scaled.neighbor_ids


def test_build_library_and_score_split_are_order_preserving():
    texts = ["three oranges two kiwis", "two oranges two kiwis",
             "four oranges one kiwi"]
    vocab = Vocabulary.build(texts)
    params = init_params(vocab.size, dim=8, seed=0)
    library = build_library(texts, params, vocab)
    assert library.ids == ("train-0000", "train-0001", "train-0002")
    assert np.allclose(np.linalg.norm(library.vectors, axis=1), 1.0)
    results = score_split(texts, params, vocab, library, k=1)
    # every training text is its own nearest neighbor
    for i, result in enumerate(results):
        assert result.neighbor_ids == (f"train-{i:04d}",)
        assert result.score == 1.0


def test_library_validation_errors():
    with pytest.raises(LibraryError):
        build_library([], None, None)
    with pytest.raises(LibraryError):
        ReferenceLibrary(vectors=np.eye(3), ids=("a", "b"))
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        score(np.array([1.0, 0.0]), _library(rng, 4, 2), k=0)


def test_score_record_round_trip():
    rng = np.random.default_rng(1)
    library = _library(rng, 8, 4)
    result = score(_random_unit_rows(rng, 1, 4)[0], library, k=DEFAULT_K)
    line = score_record("sticks-white_bg", "test-normal-0001", "normal", result)
    rec = parse_score_record(line)
    assert rec["task_id"] == "sticks-white_bg"
    assert rec["label"] == "normal"
    assert rec["score"] == result.score
    assert tuple(rec["neighbor_ids"]) == result.neighbor_ids
