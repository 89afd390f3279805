"""Shared fixtures: fixture-corpus ingestion and small trained models."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from fakenewskit.corpus import Corpus, Label, NewsItem, Source, ingest, normalize_text
from fakenewskit.features import build_vocabulary
from fakenewskit.models import train_cnn, train_logreg, train_naive_bayes

REPO_ROOT = Path(__file__).resolve().parents[1]
FIXTURES_DIR = REPO_ROOT / "fixtures"

SOURCE_MAPPING = {"text": "text", "label": "label", "id": "id", "source": "source"}

FAKE_POOL = ["hoax", "cure", "garlic", "miracle", "secret", "bleach", "conspiracy",
             "exposed", "banned", "poison"]
REAL_POOL = ["study", "vaccine", "trial", "data", "guidance", "health", "experts",
             "hospital", "testing", "evidence"]
SHARED_POOL = ["covid", "news", "report", "people", "city", "week", "officials"]


def make_corpus(pairs, name="toy"):
    """Corpus from (text, label) pairs with normalized text and stable ids."""
    return Corpus(name=name, items=tuple(
        NewsItem(id=f"{name}-{i}", text=normalize_text(text), label=label)
        for i, (text, label) in enumerate(pairs)))


def synthetic_corpus(n_real: int, n_fake: int, seed: int, name="toy",
                     min_tokens: int = 5, max_tokens: int = 9) -> Corpus:
    """Separable two-class corpus drawn from disjoint word pools."""
    rng = random.Random(seed)

    def text(pool):
        k = rng.randint(min_tokens, max_tokens)
        return " ".join(rng.choice(pool if rng.random() < 0.7 else SHARED_POOL)
                        for _ in range(k))

    pairs = [(text(REAL_POOL), Label.REAL) for _ in range(n_real)]
    pairs += [(text(FAKE_POOL), Label.FAKE) for _ in range(n_fake)]
    rng.shuffle(pairs)
    return make_corpus(pairs, name=name)


SMALL_CNN_HP = {"embed_dim": 16, "num_filters": 8, "max_len": 16, "epochs": 20,
                "batch_size": 8}


@pytest.fixture(scope="session")
def coaid_corpus():
    return ingest(FIXTURES_DIR / "coaid_like.jsonl", "jsonl", SOURCE_MAPPING,
                  name="coaid", source=Source.COAID)


@pytest.fixture(scope="session")
def c19_corpus():
    return ingest(FIXTURES_DIR / "c19rumor_like.jsonl", "jsonl", SOURCE_MAPPING,
                  name="c19rumor", source=Source.C19RUMOR)


@pytest.fixture(scope="session")
def toy_train():
    return synthetic_corpus(30, 30, seed=101, name="toytrain")


@pytest.fixture(scope="session")
def toy_validation():
    return synthetic_corpus(10, 10, seed=202, name="toyval")


@pytest.fixture(scope="session")
def toy_vocab(toy_train):
    return build_vocabulary(toy_train, min_df=1)


@pytest.fixture(scope="session")
def nb_artifact(toy_train, toy_vocab):
    return train_naive_bayes(toy_train, toy_vocab)


@pytest.fixture(scope="session")
def logreg_artifact(toy_train, toy_vocab):
    return train_logreg(toy_train, toy_vocab, seed=7)


@pytest.fixture(scope="session")
def cnn_artifact(toy_train, toy_validation, toy_vocab):
    return train_cnn(toy_train, toy_validation, toy_vocab, hp=SMALL_CNN_HP, seed=7)
