"""1-D convolutional text classifier with hand-written backpropagation.

Architecture: embedding table, parallel 1-D convolutions over token windows
of several widths with ReLU and global max pooling, concatenation, and a
dense layer to a single fake/real logit. Everything is float64 numpy so
gradients can be checked against central finite differences.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from fakenewskit.corpus import Corpus, Label
from fakenewskit.features import (
    Token,
    Vocabulary,
    build_vocabulary,
    token_sequence,
    tokenize,
)
from fakenewskit.models.base import DivergenceError, ModelArtifact, TrainingError

DEFAULTS = {
    "embed_dim": 64,
    "num_filters": 64,
    "widths": (3, 4, 5),
    "max_len": 128,
    "batch_size": 32,
    "learning_rate": 0.01,
    "momentum": 0.9,
    "epochs": 5,
    "embed_init_scale": 0.05,
}

_RANGES = {
    "embed_dim": (1, 4096),
    "num_filters": (1, 4096),
    "max_len": (1, 100_000),
    "batch_size": (1, 100_000),
    "learning_rate": (0.0, 10.0),
    "momentum": (0.0, 1.0),
    "epochs": (1, 10_000),
    "embed_init_scale": (0.0, 10.0),
}

_PREDICT_CHUNK = 256


def resolve_hyperparameters(hp: dict | None) -> dict:
    merged = dict(DEFAULTS)
    if hp:
        unknown = set(hp) - set(DEFAULTS)
        if unknown:
            raise ValueError(f"unknown cnn hyperparameters: {sorted(unknown)}")
        merged.update(hp)
    merged["widths"] = tuple(int(w) for w in merged["widths"])
    if not merged["widths"] or any(w < 1 for w in merged["widths"]):
        raise ValueError("widths must be positive")
    for name, (low, high) in _RANGES.items():
        if not low <= merged[name] <= high:
            raise ValueError(f"cnn hyperparameter {name}={merged[name]} outside [{low}, {high}]")
    if merged["max_len"] < max(merged["widths"]):
        raise ValueError("max_len must be at least the widest convolution")
    return merged


def init_parameters(vocab_size: int, hp: dict, rng: np.random.Generator
                    ) -> dict[str, np.ndarray]:
    """Seeded init: embeddings uniform in +/-embed_init_scale, conv and dense
    layers Glorot uniform."""
    dim = int(hp["embed_dim"])
    filters = int(hp["num_filters"])
    params: dict[str, np.ndarray] = {
        "embedding": rng.uniform(-hp["embed_init_scale"], hp["embed_init_scale"],
                                 size=(vocab_size, dim)),
    }
    for width in hp["widths"]:
        fan_in = width * dim
        limit = np.sqrt(6.0 / (fan_in + filters))
        params[f"conv{width}_w"] = rng.uniform(-limit, limit, size=(fan_in, filters))
        params[f"conv{width}_b"] = np.zeros(filters, dtype=np.float64)
    total = filters * len(hp["widths"])
    limit = np.sqrt(6.0 / (total + 1))
    params["dense_w"] = rng.uniform(-limit, limit, size=(total,))
    params["dense_b"] = np.zeros(1, dtype=np.float64)
    return params


def _im2col(emb: np.ndarray, width: int) -> np.ndarray:
    # (B, L, D) -> (B, L-width+1, width*D), window offset varying slowest
    windows = np.lib.stride_tricks.sliding_window_view(emb, width, axis=1)
    return windows.transpose(0, 1, 3, 2).reshape(emb.shape[0], -1, width * emb.shape[2])


def _forward(params: dict[str, np.ndarray], X: np.ndarray, widths: Sequence[int],
             keep_cache: bool) -> tuple[np.ndarray, dict | None]:
    emb = params["embedding"][X]
    pooled_parts = []
    cache: dict | None = {"emb": emb, "branches": []} if keep_cache else None
    for width in widths:
        col = _im2col(emb, width)
        # one large 2-D GEMM instead of a batched 3-D matmul
        flat = col.reshape(-1, col.shape[2])
        pre = (flat @ params[f"conv{width}_w"]).reshape(
            col.shape[0], col.shape[1], -1) + params[f"conv{width}_b"]
        act = np.maximum(pre, 0.0)
        argmax = act.argmax(axis=1)
        pooled = np.take_along_axis(act, argmax[:, None, :], axis=1)[:, 0, :]
        pooled_parts.append(pooled)
        if cache is not None:
            cache["branches"].append((width, col, pre, argmax))
    hidden = np.concatenate(pooled_parts, axis=1)
    logits = hidden @ params["dense_w"] + params["dense_b"][0]
    if cache is not None:
        cache["hidden"] = hidden
    return logits, cache


def _bce_with_logits(logits: np.ndarray, y: np.ndarray) -> float:
    losses = np.maximum(logits, 0.0) - y * logits + np.log1p(np.exp(-np.abs(logits)))
    return float(losses.mean())


def loss_and_gradients(params: dict[str, np.ndarray], X: np.ndarray, y: np.ndarray,
                       widths: Sequence[int]) -> tuple[float, dict[str, np.ndarray]]:
    """Mean binary cross-entropy on a batch and its gradient for every
    parameter tensor, computed by explicit backpropagation."""
    logits, cache = _forward(params, X, widths, keep_cache=True)
    assert cache is not None
    loss = _bce_with_logits(logits, y)

    batch = X.shape[0]
    probs = 1.0 / (1.0 + np.exp(-np.clip(logits, -500, 500)))
    dlogits = (probs - y) / batch

    grads: dict[str, np.ndarray] = {}
    hidden = cache["hidden"]
    grads["dense_w"] = hidden.T @ dlogits
    grads["dense_b"] = np.array([dlogits.sum()])
    dhidden = np.outer(dlogits, params["dense_w"])

    demb = np.zeros_like(cache["emb"])
    filters = cache["branches"][0][2].shape[2]
    for slot, (width, col, pre, argmax) in enumerate(cache["branches"]):
        dpooled = dhidden[:, slot * filters:(slot + 1) * filters]
        dact = np.zeros_like(pre)
        np.put_along_axis(dact, argmax[:, None, :], dpooled[:, None, :], axis=1)
        dpre = dact * (pre > 0.0)
        flat_col = col.reshape(-1, col.shape[2])
        flat_dpre = dpre.reshape(-1, filters)
        grads[f"conv{width}_w"] = flat_col.T @ flat_dpre
        grads[f"conv{width}_b"] = dpre.sum(axis=(0, 1))
        dcol = (flat_dpre @ params[f"conv{width}_w"].T).reshape(
            batch, -1, width, params["embedding"].shape[1])
        span = dcol.shape[1]
        for offset in range(width):
            demb[:, offset:offset + span, :] += dcol[:, :, offset, :]

    dembedding = np.zeros_like(params["embedding"])
    np.add.at(dembedding, X.ravel(), demb.reshape(-1, demb.shape[2]))
    grads["embedding"] = dembedding
    return loss, grads


def _sequence_matrix(corpus: Corpus, vocab: Vocabulary, max_len: int) -> np.ndarray:
    return np.stack([token_sequence(tokenize(item.text), vocab, max_len).indices
                     for item in corpus.items])


def _labels(corpus: Corpus) -> np.ndarray:
    return np.array([1.0 if item.label is Label.FAKE else 0.0 for item in corpus.items])


def _batched_loss(params: dict, X: np.ndarray, y: np.ndarray,
                  widths: Sequence[int]) -> float:
    total = 0.0
    for start in range(0, len(X), _PREDICT_CHUNK):
        stop = min(start + _PREDICT_CHUNK, len(X))
        logits, _ = _forward(params, X[start:stop], widths, keep_cache=False)
        total += _bce_with_logits(logits, y[start:stop]) * (stop - start)
    return total / len(X)


def train_cnn(train: Corpus, validation: Corpus, vocab: Vocabulary | None = None,
              hp: dict | None = None, seed: int = 0) -> ModelArtifact:
    """Mini-batch SGD with momentum; epoch-end validation loss selects the
    weights kept in the artifact. An empty validation split falls back to
    the final epoch's weights and flags training_meta accordingly."""
    hp = resolve_hyperparameters(hp)
    if train.real_count == 0 or train.fake_count == 0:
        raise TrainingError("cnn needs both classes in the training set")
    if vocab is None:
        vocab = build_vocabulary(train)

    max_len = int(hp["max_len"])
    X = _sequence_matrix(train, vocab, max_len)
    y = _labels(train)
    has_validation = len(validation) > 0
    if has_validation:
        X_val = _sequence_matrix(validation, vocab, max_len)
        y_val = _labels(validation)

    rng = np.random.default_rng(seed)
    params = init_parameters(vocab.size, hp, rng)
    velocity = {name: np.zeros_like(tensor) for name, tensor in params.items()}
    lr = float(hp["learning_rate"])
    momentum = float(hp["momentum"])
    batch_size = int(hp["batch_size"])

    train_losses: list[float] = []
    val_losses: list[float] = []
    best_val = np.inf
    best_params: dict[str, np.ndarray] | None = None
    best_epoch = -1
    for epoch in range(int(hp["epochs"])):
        order = rng.permutation(len(X))
        epoch_loss = 0.0
        for start in range(0, len(order), batch_size):
            batch_idx = order[start:start + batch_size]
            loss, grads = loss_and_gradients(params, X[batch_idx], y[batch_idx],
                                             hp["widths"])
            if not np.isfinite(loss):
                raise DivergenceError(epoch)
            epoch_loss += loss * len(batch_idx)
            for name in params:
                velocity[name] = momentum * velocity[name] - lr * grads[name]
                params[name] = params[name] + velocity[name]
        train_losses.append(epoch_loss / len(X))
        if has_validation:
            val_loss = _batched_loss(params, X_val, y_val, hp["widths"])
            if not np.isfinite(val_loss):
                raise DivergenceError(epoch)
            val_losses.append(val_loss)
            if val_loss < best_val:
                best_val = val_loss
                best_epoch = epoch
                best_params = {name: tensor.copy() for name, tensor in params.items()}

    meta = {
        "seed": seed,
        "epochs": int(hp["epochs"]),
        "train_loss_history": train_losses,
        "validation_loss_history": val_losses,
        "validation_fallback": not has_validation,
    }
    if has_validation and best_params is not None:
        params = best_params
        meta["best_epoch"] = best_epoch
        meta["best_validation_loss"] = best_val
    meta["final_train_loss"] = train_losses[-1]

    stored_hp = dict(hp)
    stored_hp["widths"] = list(hp["widths"])
    return ModelArtifact(
        model_kind="cnn",
        vocabulary=vocab,
        parameters=params,
        hyperparameters=stored_hp,
        training_meta=meta,
    )


def predict_tokens_batch(artifact: ModelArtifact,
                         token_lists: Sequence[Sequence[Token]]) -> np.ndarray:
    hp = artifact.hyperparameters
    widths = tuple(int(w) for w in hp["widths"])
    max_len = int(hp["max_len"])
    X = np.stack([token_sequence(tokens, artifact.vocabulary, max_len).indices
                  for tokens in token_lists])
    out = np.empty(len(X), dtype=np.float64)
    for start in range(0, len(X), _PREDICT_CHUNK):
        stop = min(start + _PREDICT_CHUNK, len(X))
        logits, _ = _forward(artifact.parameters, X[start:stop], widths,
                             keep_cache=False)
        out[start:stop] = 1.0 / (1.0 + np.exp(-np.clip(logits, -500, 500)))
    return out
