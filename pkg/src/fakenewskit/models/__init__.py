"""Trainable text classifiers and artifact persistence.

Every trained model is a ModelArtifact: a self-describing bundle of
vocabulary, named float64 parameter tensors, hyperparameters, and training
metadata. The classifier contract is fit-once / predict-many: training
functions return artifacts, predict_proba maps (artifact, text) to the
probability that the text is fake.
"""

from fakenewskit.models.base import (
    FORMAT_VERSION,
    ArtifactCorruptError,
    ArtifactError,
    DivergenceError,
    LoadedModel,
    ModelArtifact,
    TrainingError,
    UnsupportedVersionError,
    load_artifact,
    predict_proba,
    predict_proba_batch,
    save_artifact,
)
from fakenewskit.models.naive_bayes import train_naive_bayes
from fakenewskit.models.logreg import train_logreg
from fakenewskit.models.cnn import train_cnn

__all__ = [
    "FORMAT_VERSION",
    "ArtifactCorruptError",
    "ArtifactError",
    "DivergenceError",
    "LoadedModel",
    "ModelArtifact",
    "TrainingError",
    "UnsupportedVersionError",
    "load_artifact",
    "predict_proba",
    "predict_proba_batch",
    "save_artifact",
    "train_cnn",
    "train_logreg",
    "train_naive_bayes",
]
