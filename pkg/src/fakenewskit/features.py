"""Tokenization, vocabulary construction, tf-idf vectors, and index sequences.

All features are computed from training-split statistics only; the
vocabulary and idf weights travel inside the model artifact so prediction
never touches held-out data.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import sparse

from fakenewskit.corpus import Corpus

PAD_INDEX = 0
UNK_INDEX = 1

# Tokens are maximal letter/digit runs, optionally chained by single hyphens
# ("covid-19"), plus the literal "<url>" marker produced by normalization.
_TOKEN_RE = re.compile(r"<url>|[^\W_]+(?:-[^\W_]+)*")

DEFAULT_MIN_DF = 2
DEFAULT_MAX_SIZE = 50_000
DEFAULT_MAX_LEN = 128


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int


def tokenize(text: str) -> tuple[Token, ...]:
    """Split normalized text into tokens carrying their offsets; slicing the
    input at [start, end) always reproduces the surface."""
    return tuple(Token(m.group(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text))


@dataclass(frozen=True)
class Vocabulary:
    """Dense term-to-index map with reserved pad=0 and unk=1 slots.

    terms[i] maps to index i + 2; document_frequency aligns with terms.
    """

    terms: tuple[str, ...]
    document_frequency: tuple[int, ...]
    n_docs: int

    def __post_init__(self) -> None:
        if len(self.terms) != len(self.document_frequency):
            raise ValueError("terms and document_frequency lengths differ")

    @property
    def size(self) -> int:
        return len(self.terms) + 2

    def index(self, term: str) -> int | None:
        idx = self._term_to_index.get(term)
        return idx

    @property
    def _term_to_index(self) -> dict[str, int]:
        cached = self.__dict__.get("_index_cache")
        if cached is None:
            cached = {term: i + 2 for i, term in enumerate(self.terms)}
            self.__dict__["_index_cache"] = cached
        return cached


def build_vocabulary(corpus: Corpus, min_df: int = DEFAULT_MIN_DF,
                     max_size: int = DEFAULT_MAX_SIZE) -> Vocabulary:
    """Vocabulary of terms with document frequency >= min_df, keeping the
    max_size most frequent (ties resolved to the lexicographically smaller
    term). Deterministic given corpus order and parameters."""
    if len(corpus) == 0:
        raise ValueError("cannot build a vocabulary from an empty corpus")
    df: Counter[str] = Counter()
    for item in corpus.items:
        df.update({token.surface for token in tokenize(item.text)})
    eligible = [(term, count) for term, count in df.items() if count >= min_df]
    eligible.sort(key=lambda pair: (-pair[1], pair[0]))
    kept = eligible[:max_size]
    return Vocabulary(
        terms=tuple(term for term, _ in kept),
        document_frequency=tuple(count for _, count in kept),
        n_docs=len(corpus),
    )


def idf_weights(vocab: Vocabulary) -> np.ndarray:
    """Smoothed inverse document frequency, ln((1+N)/(1+df)), indexed by
    vocabulary position; pad/unk rows are zero."""
    weights = np.zeros(vocab.size, dtype=np.float64)
    for i, df in enumerate(vocab.document_frequency):
        weights[i + 2] = math.log((1 + vocab.n_docs) / (1 + df))
    return weights


@dataclass(frozen=True)
class WeightedVector:
    """Sparse L2-normalized tf-idf vector: strictly increasing indices."""

    indices: np.ndarray
    weights: np.ndarray
    dimension: int


def tfidf_vector(tokens: Sequence[Token], vocab: Vocabulary,
                 idf: np.ndarray) -> WeightedVector:
    """weight(t) = tf(t) * idf(t) over in-vocabulary terms, L2-normalized
    when nonzero; out-of-vocabulary terms contribute nothing."""
    counts: Counter[int] = Counter()
    for token in tokens:
        idx = vocab.index(token.surface)
        if idx is not None:
            counts[idx] += 1
    if not counts:
        return WeightedVector(indices=np.empty(0, dtype=np.int64),
                              weights=np.empty(0, dtype=np.float64),
                              dimension=vocab.size)
    indices = np.array(sorted(counts), dtype=np.int64)
    weights = np.array([counts[int(i)] * idf[int(i)] for i in indices], dtype=np.float64)
    norm = float(np.linalg.norm(weights))
    if norm > 0.0:
        weights = weights / norm
    return WeightedVector(indices=indices, weights=weights, dimension=vocab.size)


def vectors_to_csr(vectors: Sequence[WeightedVector]) -> sparse.csr_matrix:
    if not vectors:
        raise ValueError("no vectors to stack")
    dim = vectors[0].dimension
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    for i, vec in enumerate(vectors):
        indptr[i + 1] = indptr[i] + len(vec.indices)
    indices = np.concatenate([vec.indices for vec in vectors]) if indptr[-1] else np.empty(0, dtype=np.int64)
    data = np.concatenate([vec.weights for vec in vectors]) if indptr[-1] else np.empty(0, dtype=np.float64)
    return sparse.csr_matrix((data, indices, indptr), shape=(len(vectors), dim))


@dataclass(frozen=True)
class TokenSequence:
    """Fixed-length array of vocabulary indices, padded with pad=0."""

    indices: np.ndarray
    true_length: int


def token_sequence(tokens: Sequence[Token], vocab: Vocabulary,
                   max_len: int = DEFAULT_MAX_LEN) -> TokenSequence:
    """First max_len tokens mapped to indices (unk for out-of-vocabulary),
    padded to max_len."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    indices = np.full(max_len, PAD_INDEX, dtype=np.int64)
    clipped = tokens[:max_len]
    for pos, token in enumerate(clipped):
        idx = vocab.index(token.surface)
        indices[pos] = UNK_INDEX if idx is None else idx
    return TokenSequence(indices=indices, true_length=len(clipped))


def sequences_to_matrix(sequences: Sequence[TokenSequence]) -> np.ndarray:
    return np.stack([seq.indices for seq in sequences])


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """English stopword list; the bundled resource is used when no path is
    given. Lines starting with '#' are ignored."""
    if path is None:
        text = (resources.files("fakenewskit") / "resources" / "stopwords_en.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)
