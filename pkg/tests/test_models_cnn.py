import numpy as np
import pytest

from fakenewskit.corpus import Corpus, Label
from fakenewskit.features import build_vocabulary
from fakenewskit.models import TrainingError, predict_proba, train_cnn
from fakenewskit.models.cnn import (
    init_parameters,
    loss_and_gradients,
    resolve_hyperparameters,
)

from conftest import SMALL_CNN_HP, synthetic_corpus

TINY_HP = {"embed_dim": 8, "num_filters": 4, "max_len": 8, "embed_init_scale": 0.5}
TINY_SEED = 42  # chosen so pooling margins dominate the finite-difference step


def test_separable_forty_items():
    corpus = synthetic_corpus(20, 20, seed=51)
    artifact = train_cnn(corpus, corpus, build_vocabulary(corpus, min_df=1),
                         hp=SMALL_CNN_HP, seed=3)
    correct = sum((predict_proba(artifact, item.text) >= 0.5) == (item.label is Label.FAKE)
                  for item in corpus.items)
    assert correct / len(corpus) >= 0.95


def test_all_pad_input_is_deterministic(cnn_artifact):
    # both inputs tokenize to nothing, so the model sees only pad rows
    p1 = predict_proba(cnn_artifact, "")
    p2 = predict_proba(cnn_artifact, "!!! ???")
    assert p1 == p2
    assert 0.0 <= p1 <= 1.0


def test_every_parameter_gradient_matches_finite_differences():
    hp = resolve_hyperparameters(TINY_HP)
    rng = np.random.default_rng(TINY_SEED)
    params = init_parameters(20, hp, rng)
    X = rng.integers(0, 20, size=(6, 8))
    y = rng.integers(0, 2, size=6).astype(np.float64)
    _, grads = loss_and_gradients(params, X, y, hp["widths"])

    eps = 1e-3
    worst = 0.0
    for name, tensor in params.items():
        flat = tensor.ravel()
        grad_flat = grads[name].ravel()
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + eps
            loss_plus, _ = loss_and_gradients(params, X, y, hp["widths"])
            flat[i] = original - eps
            loss_minus, _ = loss_and_gradients(params, X, y, hp["widths"])
            flat[i] = original
            numeric = (loss_plus - loss_minus) / (2 * eps)
            rel = abs(numeric - grad_flat[i]) / max(abs(numeric), abs(grad_flat[i]), 1e-4)
            worst = max(worst, rel)
    assert worst < 1e-4


def test_empty_validation_falls_back_with_flag():
    corpus = synthetic_corpus(10, 10, seed=52)
    empty = Corpus(name="novalidation", items=())
    artifact = train_cnn(corpus, empty, build_vocabulary(corpus, min_df=1),
                         hp={**SMALL_CNN_HP, "epochs": 2}, seed=1)
    assert artifact.training_meta["validation_fallback"] is True
    assert "best_epoch" not in artifact.training_meta


def test_best_validation_weights_kept(cnn_artifact):
    meta = cnn_artifact.training_meta
    history = meta["validation_loss_history"]
    assert meta["best_validation_loss"] == min(history)
    assert history[meta["best_epoch"]] == meta["best_validation_loss"]


def test_deterministic_given_seed(toy_train, toy_validation, toy_vocab):
    hp = {**SMALL_CNN_HP, "epochs": 2}
    a = train_cnn(toy_train, toy_validation, toy_vocab, hp=hp, seed=9)
    b = train_cnn(toy_train, toy_validation, toy_vocab, hp=hp, seed=9)
    for name in a.parameters:
        assert np.array_equal(a.parameters[name], b.parameters[name])


def test_single_class_training_error():
    corpus = synthetic_corpus(10, 0, seed=53)
    with pytest.raises(TrainingError):
        train_cnn(corpus, corpus, build_vocabulary(corpus, min_df=1),
                  hp=SMALL_CNN_HP, seed=1)


def test_probability_bounds_fuzz(cnn_artifact):
    import random
    rng = random.Random(19)
    alphabet = "hoax study covid miracle data ??? <url> 12 é"
    for _ in range(60):
        text = " ".join(rng.choice(alphabet.split())
                        for _ in range(rng.randint(0, 30)))
        assert 0.0 <= predict_proba(cnn_artifact, text) <= 1.0


def test_hyperparameter_validation():
    with pytest.raises(ValueError):
        resolve_hyperparameters({"max_len": 2})  # narrower than the widest conv
    with pytest.raises(ValueError):
        resolve_hyperparameters({"widths": ()})
    with pytest.raises(ValueError):
        resolve_hyperparameters({"bogus": 3})
