"""L2-regularized logistic regression on tf-idf features, trained by
full-batch gradient descent with a decaying learning rate."""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy import sparse

from fakenewskit.corpus import Corpus, Label
from fakenewskit.features import (
    Token,
    Vocabulary,
    build_vocabulary,
    idf_weights,
    tfidf_vector,
    tokenize,
    vectors_to_csr,
)
from fakenewskit.models.base import DivergenceError, ModelArtifact, TrainingError

# With geometric decay the total step budget is learning_rate/(1-lr_decay);
# it must be large enough to move zero-initialized weights past the class-prior
# bias on imbalanced corpora, hence the long schedule.
DEFAULTS = {
    "learning_rate": 2.0,
    "lr_decay": 0.995,
    "epochs": 300,
    "l2": 1e-4,
}

_RANGES = {
    "learning_rate": (0.0, 100.0),
    "lr_decay": (0.0, 1.0),
    "epochs": (1, 100_000),
    "l2": (0.0, 1e9),
}


def resolve_hyperparameters(hp: dict | None) -> dict:
    merged = dict(DEFAULTS)
    if hp:
        unknown = set(hp) - set(DEFAULTS)
        if unknown:
            raise ValueError(f"unknown logreg hyperparameters: {sorted(unknown)}")
        merged.update(hp)
    for name, (low, high) in _RANGES.items():
        if not low <= merged[name] <= high:
            raise ValueError(f"logreg hyperparameter {name}={merged[name]} outside [{low}, {high}]")
    return merged


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def loss_and_grad(weights: np.ndarray, bias: float, X: sparse.csr_matrix,
                  y: np.ndarray, l2: float) -> tuple[float, np.ndarray, float]:
    """Mean binary cross-entropy plus (l2/2)*||w||^2 (bias unpenalized), with
    its exact gradient. Exposed so gradients can be checked independently."""
    z = X @ weights + bias
    # stable BCE with logits: max(z,0) - y*z + log(1+exp(-|z|)); overflow to
    # inf is fine here, the training loop turns it into DivergenceError
    with np.errstate(over="ignore"):
        losses = np.maximum(z, 0.0) - y * z + np.log1p(np.exp(-np.abs(z)))
        loss = float(losses.mean() + 0.5 * l2 * float(weights @ weights))
    residual = _sigmoid(z) - y
    grad_w = (X.T @ residual) / len(y) + l2 * weights
    grad_b = float(residual.mean())
    return loss, np.asarray(grad_w).ravel(), grad_b


def train_logreg(train: Corpus, vocab: Vocabulary | None = None,
                 hp: dict | None = None, seed: int = 0) -> ModelArtifact:
    """Full-batch gradient descent from zero-initialized weights; the per-
    epoch loss trace is recorded in training_meta and is non-increasing
    under the default schedule."""
    params = resolve_hyperparameters(hp)
    if train.real_count == 0 or train.fake_count == 0:
        raise TrainingError("logistic regression needs both classes in the training set")
    if vocab is None:
        vocab = build_vocabulary(train)

    idf = idf_weights(vocab)
    X = vectors_to_csr([tfidf_vector(tokenize(item.text), vocab, idf)
                        for item in train.items])
    y = np.array([1.0 if item.label is Label.FAKE else 0.0 for item in train.items])

    weights = np.zeros(vocab.size, dtype=np.float64)
    bias = 0.0
    lr = float(params["learning_rate"])
    losses: list[float] = []
    for epoch in range(int(params["epochs"])):
        loss, grad_w, grad_b = loss_and_grad(weights, bias, X, y, params["l2"])
        if not np.isfinite(loss):
            raise DivergenceError(epoch)
        losses.append(loss)
        weights = weights - lr * grad_w
        bias = bias - lr * grad_b
        lr *= float(params["lr_decay"])
    final_loss, _, _ = loss_and_grad(weights, bias, X, y, params["l2"])
    if not np.isfinite(final_loss):
        raise DivergenceError(int(params["epochs"]))
    losses.append(final_loss)

    return ModelArtifact(
        model_kind="logreg",
        vocabulary=vocab,
        parameters={
            "weights": weights,
            "bias": np.array([bias], dtype=np.float64),
            "idf": idf,
        },
        hyperparameters=params,
        training_meta={"seed": seed, "epochs": int(params["epochs"]),
                       "loss_history": losses, "final_train_loss": final_loss},
    )


def predict_tokens_batch(artifact: ModelArtifact,
                         token_lists: Sequence[Sequence[Token]]) -> np.ndarray:
    vocab = artifact.vocabulary
    idf = artifact.parameters["idf"]
    weights = artifact.parameters["weights"]
    bias = float(artifact.parameters["bias"][0])
    X = vectors_to_csr([tfidf_vector(tokens, vocab, idf) for tokens in token_lists])
    return _sigmoid(np.asarray(X @ weights).ravel() + bias)
