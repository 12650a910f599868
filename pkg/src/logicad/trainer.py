"""Contrastive fine-tuning of the text encoder.

The objective is an InfoNCE/NT-Xent style loss: for anchor i, one positive
(a second stochastic encoding of the same text) against the batch's
synthesized negatives.  The normalizer for anchor i contains the positive
pair plus ALL negatives of the batch; other anchors' positives are not
used as negatives.  Updates are Adam with decoupled weight decay and
global gradient-norm clipping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .encoder import (
    EncoderGrads,
    EncoderParams,
    Vocabulary,
    encode_backward,
    encode_tokens,
    make_dropout_mask,
    tokenize,
)

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


class TrainingError(RuntimeError):
    """Non-finite loss or gradient."""


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 20
    batch_size: int = 16
    temperature: float = 0.5
    learning_rate: float = 5e-3
    weight_decay: float = 1e-5
    clip_norm: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")
        if self.batch_size < 1:
            raise ValueError("batch size must be >= 1")
        if self.clip_norm <= 0:
            raise ValueError("clip norm must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")


def nt_xent(anchors: np.ndarray, positives: np.ndarray, negatives: np.ndarray,
            temperature: float) -> tuple[float, np.ndarray]:
    """Loss over a batch of unit vectors; returns (mean, per-anchor losses).

    per_anchor[i] = -log( exp(s(a_i,p_i)/t) /
                          (exp(s(a_i,p_i)/t) + sum_j exp(s(a_i,n_j)/t)) )
    computed with max-subtraction for stability.
    """
    logits = _logits(anchors, positives, negatives, temperature)
    if not np.all(np.isfinite(logits)):
        raise TrainingError("non-finite similarity in contrastive batch")
    m = logits.max(axis=1, keepdims=True)
    logsumexp = np.log(np.exp(logits - m).sum(axis=1)) + m[:, 0]
    per_anchor = logsumexp - logits[:, 0]
    return float(per_anchor.mean()), per_anchor


def _logits(anchors, positives, negatives, temperature):
    pos_sim = (anchors * positives).sum(axis=1, keepdims=True)
    neg_sim = anchors @ negatives.T
    return np.concatenate([pos_sim, neg_sim], axis=1) / temperature


def nt_xent_embedding_grads(anchors, positives, negatives, temperature):
    """Gradients of the mean loss w.r.t. the three embedding matrices."""
    batch = anchors.shape[0]
    logits = _logits(anchors, positives, negatives, temperature)
    m = logits.max(axis=1, keepdims=True)
    expd = np.exp(logits - m)
    q = expd / expd.sum(axis=1, keepdims=True)
    coef = 1.0 / (batch * temperature)
    d_anchors = coef * ((q[:, :1] - 1.0) * positives + q[:, 1:] @ negatives)
    d_positives = coef * (q[:, :1] - 1.0) * anchors
    d_negatives = coef * (q[:, 1:].T @ anchors)
    return d_anchors, d_positives, d_negatives


@dataclass
class BatchMasks:
    """Frozen dropout masks for one step (anchor, positive, negative views)."""

    anchor: list[np.ndarray]
    positive: list[np.ndarray]
    negative: list[np.ndarray]

    @classmethod
    def sample(cls, pos_tokens, neg_tokens, dim, rate, rng):
        return cls(
            anchor=[make_dropout_mask(len(t), dim, rate, rng) for t in pos_tokens],
            positive=[make_dropout_mask(len(t), dim, rate, rng) for t in pos_tokens],
            negative=[make_dropout_mask(len(t), dim, rate, rng) for t in neg_tokens],
        )


def clip_gradients(grads: EncoderGrads, clip_norm: float) -> float:
    """Scale gradients in place so the global norm is at most ``clip_norm``."""
    norm = grads.global_norm()
    if norm > clip_norm:
        grads.scale(clip_norm / norm)
    return norm


@dataclass
class AdamState:
    m: list[np.ndarray]
    v: list[np.ndarray]
    step: int = 0

    @classmethod
    def zeros_like(cls, params: EncoderParams) -> "AdamState":
        arrays = (params.embedding, params.proj_w, params.proj_b)
        return cls([np.zeros_like(a) for a in arrays],
                   [np.zeros_like(a) for a in arrays])


def adam_update(params: EncoderParams, grads: EncoderGrads, state: AdamState,
                cfg: TrainConfig) -> None:
    """Decoupled-weight-decay Adam step, applied in place."""
    state.step += 1
    t = state.step
    targets = (params.embedding, params.proj_w, params.proj_b)
    for target, grad, m, v in zip(targets, grads.arrays(), state.m, state.v):
        m *= ADAM_BETA1
        m += (1 - ADAM_BETA1) * grad
        v *= ADAM_BETA2
        v += (1 - ADAM_BETA2) * grad * grad
        m_hat = m / (1 - ADAM_BETA1 ** t)
        v_hat = v / (1 - ADAM_BETA2 ** t)
        target -= cfg.learning_rate * (
            m_hat / (np.sqrt(v_hat) + ADAM_EPS) + cfg.weight_decay * target
        )


@dataclass
class FitResult:
    params: EncoderParams
    epoch_losses: list[float]


def fit(
    pos_texts: list[str],
    neg_texts: list[str],
    vocab: Vocabulary,
    cfg: TrainConfig,
    init: Optional[EncoderParams] = None,
    dim: int = 64,
) -> FitResult:
    """Contrastive training over (positive, negative) text pairs."""
    if len(pos_texts) != len(neg_texts):
        raise ValueError("positive/negative lists must be index-aligned")
    if not pos_texts:
        raise ValueError("no training pairs")
    params = init.copy() if init is not None else None
    if params is None:
        from .encoder import init_params

        params = init_params(vocab.size, dim=dim, seed=cfg.seed)
    pos_tokens = [tokenize(t, vocab) for t in pos_texts]
    neg_tokens = [tokenize(t, vocab) for t in neg_texts]

    rng = np.random.default_rng(cfg.seed)
    state = AdamState.zeros_like(params)
    n = len(pos_tokens)
    epoch_losses = []
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        step_losses = []
        for start in range(0, n, cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            batch_pos = [pos_tokens[i] for i in idx]
            batch_neg = [neg_tokens[i] for i in idx]
            masks = BatchMasks.sample(batch_pos, batch_neg, params.dim,
                                      params.dropout_rate, rng)
            loss, _, grads = batch_step(batch_pos, batch_neg, params, masks,
                                        cfg.temperature)
            if not np.isfinite(loss):
                raise TrainingError(
                    f"non-finite loss at epoch {len(epoch_losses)}, "
                    f"step {start // cfg.batch_size}"
                )
            clip_gradients(grads, cfg.clip_norm)
            adam_update(params, grads, state, cfg)
            step_losses.append(loss)
        epoch_losses.append(float(np.mean(step_losses)))
    return FitResult(params=params, epoch_losses=epoch_losses)


def batch_step(
    pos_tokens: list[np.ndarray],
    neg_tokens: list[np.ndarray],
    params: EncoderParams,
    masks: BatchMasks,
    temperature: float,
) -> tuple[float, np.ndarray, EncoderGrads]:
    """Forward + exact analytic backward for one contrastive step."""
    anc_caches = [encode_tokens(t, params, m)
                  for t, m in zip(pos_tokens, masks.anchor)]
    pos_caches = [encode_tokens(t, params, m)
                  for t, m in zip(pos_tokens, masks.positive)]
    neg_caches = [encode_tokens(t, params, m)
                  for t, m in zip(neg_tokens, masks.negative)]
    anchors = np.stack([c.output for c in anc_caches])
    positives = np.stack([c.output for c in pos_caches])
    negatives = np.stack([c.output for c in neg_caches])

    loss, per_anchor = nt_xent(anchors, positives, negatives, temperature)
    d_anc, d_pos, d_neg = nt_xent_embedding_grads(
        anchors, positives, negatives, temperature)

    grads = EncoderGrads.zeros_like(params)
    for cache, dz in zip(anc_caches, d_anc):
        encode_backward(dz, cache, params, grads)
    for cache, dz in zip(pos_caches, d_pos):
        encode_backward(dz, cache, params, grads)
    for cache, dz in zip(neg_caches, d_neg):
        encode_backward(dz, cache, params, grads)
    if not all(np.all(np.isfinite(a)) for a in grads.arrays()):
        raise TrainingError("non-finite gradient")
    return loss, per_anchor, grads
