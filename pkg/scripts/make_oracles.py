#!/usr/bin/env python3
"""Recompute the hand-arithmetic oracle fixtures under fixtures/.

These expected values are derived directly from the defining formulas with
plain math/fractions (no package code) so the test suite can compare the
library against an independent computation.

tfidf_toy_expected.json: three tiny documents; weight(t) = tf * ln((1+N)/(1+df)),
then L2 normalization, written per document as {term: weight}.

nb_toy_expected.json: six two-token training items, Laplace alpha=1 smoothing
spread over the full vocabulary (six terms + pad + unk = 8 slots); posteriors
for several probe texts computed with exact fractions via Bayes rule.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parents[1] / "fixtures"


def tfidf_oracle() -> dict:
    docs = {
        "d1": ["covid", "vaccine", "works"],
        "d2": ["covid", "hoax", "spreads"],
        "d3": ["vaccine", "trial", "data", "covid", "vaccine"],
    }
    n_docs = len(docs)
    df: dict[str, int] = {}
    for tokens in docs.values():
        for term in set(tokens):
            df[term] = df.get(term, 0) + 1

    def idf(term: str) -> float:
        return math.log((1 + n_docs) / (1 + df[term]))

    expected = {}
    for name, tokens in docs.items():
        tf: dict[str, int] = {}
        for term in tokens:
            tf[term] = tf.get(term, 0) + 1
        raw = {term: count * idf(term) for term, count in tf.items()}
        norm = math.sqrt(sum(w * w for w in raw.values()))
        expected[name] = ({term: w / norm for term, w in raw.items()}
                          if norm > 0 else raw)
    return {
        "documents": {name: " ".join(tokens) for name, tokens in docs.items()},
        "document_frequency": df,
        "expected_vectors": expected,
    }


def naive_bayes_oracle() -> dict:
    fake_docs = [["bad", "hoax"], ["hoax", "lies"], ["bad", "lies"]]
    real_docs = [["good", "study"], ["study", "facts"], ["good", "facts"]]
    terms = sorted({t for doc in fake_docs + real_docs for t in doc})
    vocab_slots = len(terms) + 2  # pad and unk share the smoothing mass
    alpha = 1

    def class_probs(docs: list[list[str]]) -> dict[str, Fraction]:
        counts = {term: 0 for term in terms}
        for doc in docs:
            for term in doc:
                counts[term] += 1
        total = sum(counts.values())
        return {term: Fraction(counts[term] + alpha, total + alpha * vocab_slots)
                for term in terms}

    p_fake_terms = class_probs(fake_docs)
    p_real_terms = class_probs(real_docs)
    prior = Fraction(1, 2)  # three docs per class

    probes = ["bad hoax", "bad study", "bad bad hoax lies", "good study facts",
              "mystery", "", "bad", "hoax", "good", "study"]
    posteriors = {}
    for text in probes:
        like_fake, like_real = prior, prior
        for term in text.split():
            if term in p_fake_terms:  # out-of-vocabulary terms contribute nothing
                like_fake *= p_fake_terms[term]
                like_real *= p_real_terms[term]
        posteriors[text] = float(like_fake / (like_fake + like_real))

    return {
        "fake_texts": [" ".join(d) for d in fake_docs],
        "real_texts": [" ".join(d) for d in real_docs],
        "alpha": alpha,
        "vocab_slots": vocab_slots,
        "expected_p_fake": posteriors,
    }


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for name, payload in (("tfidf_toy_expected.json", tfidf_oracle()),
                          ("nb_toy_expected.json", naive_bayes_oracle())):
        path = OUT_DIR / name
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
