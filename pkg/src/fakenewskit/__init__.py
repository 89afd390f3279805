"""fakenewskit: explainable fake-news text classification.

Ingests labeled news corpora, builds the seven standard dataset
configurations (C1-C7), trains native classifiers (naive Bayes, logistic
regression, text CNN), evaluates them with support-weighted metrics,
explains single predictions with Shapley force values, and serves
classifications over HTTP.
"""

__version__ = "0.1.0"

from fakenewskit.corpus import Corpus, Label, NewsItem, Source, ingest, normalize_text
from fakenewskit.configs import (
    CONFIG_NAMES,
    DatasetConfiguration,
    SplitRatios,
    build_configuration,
    oversample_to_majority,
    stratified_split,
    undersample_to_minority,
)
from fakenewskit.explain import Explanation, explain
from fakenewskit.models import load_artifact, predict_proba, save_artifact

__all__ = [
    "CONFIG_NAMES",
    "Corpus",
    "DatasetConfiguration",
    "Explanation",
    "Label",
    "NewsItem",
    "Source",
    "SplitRatios",
    "build_configuration",
    "explain",
    "ingest",
    "load_artifact",
    "normalize_text",
    "oversample_to_majority",
    "predict_proba",
    "save_artifact",
    "stratified_split",
    "undersample_to_minority",
]
