"""Tiny trainable text encoder: embed, project, tanh, dropout, mean-pool, L2.

Deterministic mode is a pure function of (text, params); stochastic mode
applies an inverted-dropout mask to per-token activations before pooling,
so averaging many stochastic encodings converges to the deterministic
direction.  The forward pass caches everything the manual backward pass
needs.
"""

from __future__ import annotations

import re
import struct
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

UNKNOWN_ID = 0
UNKNOWN_TOKEN = "<unk>"
DEFAULT_DIM = 64
DEFAULT_DROPOUT = 0.1
_NORM_EPS = 1e-12

_TOKEN_RE = re.compile(r"[a-z0-9_']+")


class EncodeError(ValueError):
    pass


class EmbeddingStoreError(KeyError):
    pass


@dataclass(frozen=True)
class Vocabulary:
    token_to_id: dict[str, int]

    @classmethod
    def build(cls, texts: Iterable[str]) -> "Vocabulary":
        tokens = set()
        for text in texts:
            tokens.update(_TOKEN_RE.findall(text.lower()))
        mapping = {UNKNOWN_TOKEN: UNKNOWN_ID}
        for i, token in enumerate(sorted(tokens), start=1):
            mapping[token] = i
        return cls(mapping)

    @property
    def size(self) -> int:
        return len(self.token_to_id)

    def lookup(self, token: str) -> int:
        return self.token_to_id.get(token, UNKNOWN_ID)


def tokenize(text: str, vocab: Vocabulary) -> np.ndarray:
    """Lowercase, split on whitespace/punctuation, map OOV tokens to UNKNOWN."""
    tokens = _TOKEN_RE.findall(text.lower())
    if not tokens:
        raise EncodeError(f"text has no tokens: {text!r}")
    return np.array([vocab.lookup(t) for t in tokens], dtype=np.int64)


@dataclass
class EncoderParams:
    embedding: np.ndarray   # (V, D)
    proj_w: np.ndarray      # (D, D)
    proj_b: np.ndarray      # (D,)
    dropout_rate: float = DEFAULT_DROPOUT

    @property
    def dim(self) -> int:
        return self.embedding.shape[1]

    def copy(self) -> "EncoderParams":
        return EncoderParams(self.embedding.copy(), self.proj_w.copy(),
                             self.proj_b.copy(), self.dropout_rate)


def init_params(vocab_size: int, dim: int = DEFAULT_DIM,
                dropout_rate: float = DEFAULT_DROPOUT,
                seed: int = 0) -> EncoderParams:
    if dim < 2:
        raise ValueError("embedding dimension must be >= 2")
    rng = np.random.default_rng(seed)
    scale = 1.0 / np.sqrt(dim)
    return EncoderParams(
        embedding=rng.uniform(-scale, scale, size=(vocab_size, dim)),
        proj_w=rng.uniform(-scale, scale, size=(dim, dim)),
        proj_b=np.zeros(dim),
        dropout_rate=dropout_rate,
    )


def make_dropout_mask(n_tokens: int, dim: int, rate: float,
                      rng: np.random.Generator) -> np.ndarray:
    """Inverted-dropout mask: zeros with probability ``rate``, else 1/(1-rate)."""
    if rate == 0.0:
        return np.ones((n_tokens, dim))
    keep = rng.random((n_tokens, dim)) >= rate
    return keep / (1.0 - rate)


@dataclass
class ForwardCache:
    token_ids: np.ndarray
    token_vecs: np.ndarray  # embedding rows (T, D)
    activations: np.ndarray  # tanh outputs (T, D)
    mask: Optional[np.ndarray]
    pooled: np.ndarray
    norm: float
    output: np.ndarray


def encode_tokens(token_ids: np.ndarray, params: EncoderParams,
                  mask: Optional[np.ndarray] = None) -> ForwardCache:
    x = params.embedding[token_ids]
    pre = x @ params.proj_w.T + params.proj_b
    act = np.tanh(pre)
    dropped = act if mask is None else act * mask
    pooled = dropped.mean(axis=0)
    norm = float(np.linalg.norm(pooled))
    if norm < _NORM_EPS:
        raise EncodeError("pooled representation has zero norm")
    return ForwardCache(token_ids, x, act, mask, pooled, norm, pooled / norm)


def encode(text: str, params: EncoderParams, vocab: Vocabulary,
           mode: str = "deterministic",
           rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Unit-norm embedding of a text; stochastic mode applies dropout."""
    token_ids = tokenize(text, vocab)
    if mode == "deterministic":
        mask = None
    elif mode == "stochastic":
        if rng is None:
            raise ValueError("stochastic encoding needs a random source")
        mask = make_dropout_mask(len(token_ids), params.dim,
                                 params.dropout_rate, rng)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return encode_tokens(token_ids, params, mask).output


@dataclass
class EncoderGrads:
    embedding: np.ndarray
    proj_w: np.ndarray
    proj_b: np.ndarray

    @classmethod
    def zeros_like(cls, params: EncoderParams) -> "EncoderGrads":
        return cls(np.zeros_like(params.embedding), np.zeros_like(params.proj_w),
                   np.zeros_like(params.proj_b))

    def arrays(self):
        return (self.embedding, self.proj_w, self.proj_b)

    def global_norm(self) -> float:
        return float(np.sqrt(sum(float((a * a).sum()) for a in self.arrays())))

    def scale(self, factor: float) -> None:
        for a in self.arrays():
            a *= factor


def encode_backward(d_output: np.ndarray, cache: ForwardCache,
                    params: EncoderParams, grads: EncoderGrads) -> None:
    """Accumulate d(loss)/d(params) given d(loss)/d(unit-norm output)."""
    z = cache.output
    d_pooled = (d_output - z * float(z @ d_output)) / cache.norm
    d_dropped = np.broadcast_to(d_pooled / len(cache.token_ids),
                                cache.activations.shape)
    d_act = d_dropped if cache.mask is None else d_dropped * cache.mask
    d_pre = d_act * (1.0 - cache.activations ** 2)
    grads.proj_w += d_pre.T @ cache.token_vecs
    grads.proj_b += d_pre.sum(axis=0)
    d_x = d_pre @ params.proj_w
    np.add.at(grads.embedding, cache.token_ids, d_x)


def renormalize(vector: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(vector)
    if norm < _NORM_EPS:
        raise EncodeError("stored vector has zero norm")
    return vector / norm


def encode_batch_precomputed(sample_ids: list[str],
                             store: dict[str, np.ndarray]) -> list[np.ndarray]:
    """Look up precomputed embeddings and re-normalize to unit norm."""
    out = []
    for sample_id in sample_ids:
        if sample_id not in store:
            raise EmbeddingStoreError(f"no stored embedding for {sample_id!r}")
        out.append(renormalize(np.asarray(store[sample_id], dtype=np.float64)))
    return out


# --- embedding store file -------------------------------------------------
# Layout (little-endian): magic b"EMBS", u32 version (1), u32 dimension D,
# u32 record count N, then per record u16 id length, UTF-8 id bytes, and
# D float32 values.

_STORE_MAGIC = b"EMBS"
_STORE_VERSION = 1


def write_embedding_store(path, store: dict[str, np.ndarray]) -> None:
    dims = {np.asarray(v).shape[0] for v in store.values()}
    if len(dims) > 1:
        raise ValueError(f"inconsistent embedding dimensions: {sorted(dims)}")
    dim = dims.pop() if dims else 0
    with open(path, "wb") as fh:
        fh.write(_STORE_MAGIC)
        fh.write(struct.pack("<III", _STORE_VERSION, dim, len(store)))
        for sample_id in sorted(store):
            encoded = sample_id.encode("utf-8")
            fh.write(struct.pack("<H", len(encoded)))
            fh.write(encoded)
            fh.write(np.asarray(store[sample_id], dtype="<f4").tobytes())


def read_embedding_store(path) -> dict[str, np.ndarray]:
    with open(path, "rb") as fh:
        if fh.read(4) != _STORE_MAGIC:
            raise ValueError("not an embedding store file")
        version, dim, count = struct.unpack("<III", fh.read(12))
        if version != _STORE_VERSION:
            raise ValueError(f"unsupported embedding store version {version}")
        store = {}
        for _ in range(count):
            (id_len,) = struct.unpack("<H", fh.read(2))
            sample_id = fh.read(id_len).decode("utf-8")
            values = np.frombuffer(fh.read(4 * dim), dtype="<f4")
            store[sample_id] = values.astype(np.float64)
        return store
