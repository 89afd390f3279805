"""Multinomial naive Bayes over vocabulary token counts."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from fakenewskit.corpus import Corpus, Label
from fakenewskit.features import Token, Vocabulary, build_vocabulary, tokenize
from fakenewskit.models.base import ModelArtifact, TrainingError

# Class axis order everywhere: row 0 = real, row 1 = fake.
CLASS_ORDER = (Label.REAL, Label.FAKE)


def train_naive_bayes(train: Corpus, vocab: Vocabulary | None = None,
                      alpha: float = 1.0) -> ModelArtifact:
    """Fit class log-priors and Laplace-smoothed class-conditional term
    log-probabilities. Smoothing spreads alpha over the full vocabulary
    (pad/unk included), so the denominator is count_sum + alpha*size."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if train.real_count == 0 or train.fake_count == 0:
        raise TrainingError("naive Bayes needs both classes in the training set")
    if vocab is None:
        vocab = build_vocabulary(train)

    counts = np.zeros((2, vocab.size), dtype=np.float64)
    class_totals = np.zeros(2, dtype=np.float64)
    for item in train.items:
        row = CLASS_ORDER.index(item.label)
        class_totals[row] += 1
        for token in tokenize(item.text):
            idx = vocab.index(token.surface)
            if idx is not None:
                counts[row, idx] += 1

    with np.errstate(divide="ignore"):
        class_log_prior = np.log(class_totals / class_totals.sum())
        feature_log_prob = np.log(
            (counts + alpha) / (counts.sum(axis=1, keepdims=True) + alpha * vocab.size))

    return ModelArtifact(
        model_kind="nb",
        vocabulary=vocab,
        parameters={
            "class_log_prior": class_log_prior,
            "feature_log_prob": feature_log_prob,
        },
        hyperparameters={"alpha": alpha},
        training_meta={"train_items": len(train), "train_real": train.real_count,
                       "train_fake": train.fake_count},
    )


def predict_tokens_batch(artifact: ModelArtifact,
                         token_lists: Sequence[Sequence[Token]]) -> np.ndarray:
    """Posterior probability of fake for each tokenized text; texts with no
    in-vocabulary tokens fall back to the class prior."""
    vocab = artifact.vocabulary
    prior = artifact.parameters["class_log_prior"]
    log_prob = artifact.parameters["feature_log_prob"]
    out = np.empty(len(token_lists), dtype=np.float64)
    for i, tokens in enumerate(token_lists):
        scores = prior.copy()
        for token in tokens:
            idx = vocab.index(token.surface)
            if idx is not None:
                scores = scores + log_prob[:, idx]
        # log-sum-exp for a stable 2-class posterior
        peak = scores.max()
        if not math.isfinite(peak):
            out[i] = 0.5
            continue
        norm = peak + math.log(np.exp(scores - peak).sum())
        out[i] = math.exp(scores[1] - norm)
    return out
