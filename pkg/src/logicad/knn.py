"""Reference library of training embeddings and the kNN normality score.

The score of a test embedding is S = 1 / (1 + mean distance to its k
nearest reference embeddings).  Unit-norm inputs bound distances by 2, so
S lies in [1/3, 1].  Ties at the k-th distance are broken by ascending
library index so exactly min(k, N) neighbors are selected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .encoder import EncoderParams, Vocabulary, encode, renormalize

DEFAULT_K = 5


class LibraryError(ValueError):
    pass


@dataclass(frozen=True)
class ReferenceLibrary:
    vectors: np.ndarray  # (N, D), unit rows
    ids: tuple[str, ...]

    def __post_init__(self):
        if len(self.ids) != self.vectors.shape[0]:
            raise LibraryError("ids and vectors are misaligned")
        if self.vectors.shape[0] < 1:
            raise LibraryError("reference library is empty")

    @property
    def size(self) -> int:
        return self.vectors.shape[0]


@dataclass(frozen=True)
class NormalityScore:
    score: float
    mean_distance: float
    neighbor_ids: tuple[str, ...]
    renormalized: bool = False


def build_library(train_texts: list[str], params: EncoderParams,
                  vocab: Vocabulary,
                  ids: list[str] | None = None) -> ReferenceLibrary:
    """Deterministic (dropout-free) encodings of every training text, in order."""
    if not train_texts:
        raise LibraryError("cannot build a library from an empty train set")
    if ids is None:
        ids = [f"train-{i:04d}" for i in range(len(train_texts))]
    vectors = np.stack([encode(t, params, vocab, mode="deterministic")
                        for t in train_texts])
    return ReferenceLibrary(vectors=vectors, ids=tuple(ids))


def score(test_vector: np.ndarray, library: ReferenceLibrary,
          k: int = DEFAULT_K) -> NormalityScore:
    """kNN normality score of one embedding against the reference library."""
    if k < 1:
        raise ValueError("k must be >= 1")
    z = np.asarray(test_vector, dtype=np.float64)
    renormalized = False
    if abs(float(np.linalg.norm(z)) - 1.0) > 1e-6:
        z = renormalize(z)
        renormalized = True
    distances = np.linalg.norm(library.vectors - z, axis=1)
    n_neighbors = min(k, library.size)
    # Stable sort keeps ascending-index order among exact distance ties.
    order = np.argsort(distances, kind="stable")[:n_neighbors]
    mean_distance = float(distances[order].mean())
    return NormalityScore(
        score=1.0 / (1.0 + mean_distance),
        mean_distance=mean_distance,
        neighbor_ids=tuple(library.ids[i] for i in order),
        renormalized=renormalized,
    )


def score_split(test_texts: list[str], params: EncoderParams,
                vocab: Vocabulary, library: ReferenceLibrary,
                k: int = DEFAULT_K) -> list[NormalityScore]:
    """Deterministic encode then score, order-preserving."""
    return [
        score(encode(t, params, vocab, mode="deterministic"), library, k)
        for t in test_texts
    ]


def score_record(task_id: str, sample_id: str, label: str,
                 result: NormalityScore) -> str:
    """One line of the score file."""
    return json.dumps(
        {
            "task_id": task_id,
            "sample_id": sample_id,
            "label": label,
            "score": result.score,
            "mean_distance": result.mean_distance,
            "neighbor_ids": list(result.neighbor_ids),
        },
        sort_keys=True,
    )


def parse_score_record(line: str) -> dict:
    return json.loads(line)
