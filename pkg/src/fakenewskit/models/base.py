"""Model artifact container, JSON persistence, and prediction dispatch."""

from __future__ import annotations

import base64
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

from fakenewskit.corpus import normalize_text
from fakenewskit.features import Vocabulary, tokenize

FORMAT_VERSION = 1

# bert/bilstm are reserved interface slots; no native training exists for them.
MODEL_KINDS = ("nb", "logreg", "cnn", "bert", "bilstm")
NATIVE_KINDS = ("nb", "logreg", "cnn")


class ArtifactError(Exception):
    """Artifact could not be read or is not usable."""


class ArtifactCorruptError(ArtifactError):
    """File truncated, unparseable, or checksum mismatch."""


class UnsupportedVersionError(ArtifactError):
    """format_version newer than this build supports."""


class TrainingError(Exception):
    """Training could not produce a model."""


class DivergenceError(TrainingError):
    """Loss became non-finite during optimization."""

    def __init__(self, epoch: int, message: str | None = None) -> None:
        super().__init__(message or f"non-finite loss at epoch {epoch}")
        self.epoch = epoch


@dataclass
class ModelArtifact:
    """A serialized trained classifier plus everything needed to run it."""

    model_kind: str
    vocabulary: Vocabulary
    parameters: dict[str, np.ndarray]
    hyperparameters: dict
    training_meta: dict
    format_version: int = FORMAT_VERSION

    def __post_init__(self) -> None:
        if self.model_kind not in MODEL_KINDS:
            raise ArtifactError(f"unknown model kind {self.model_kind!r}")
        for name, tensor in self.parameters.items():
            if tensor.dtype != np.float64:
                raise ArtifactError(f"parameter {name!r} must be float64")

    @property
    def model_id(self) -> str:
        return f"{self.model_kind}:{_parameters_checksum(self.parameters)[:12]}"


class TextClassifier(Protocol):
    """Behavioral contract every usable model satisfies."""

    @property
    def model_id(self) -> str: ...

    def predict_proba(self, text: str) -> float: ...


@dataclass(frozen=True)
class LoadedModel:
    """An artifact bound to its prediction routine; safe to share across
    threads once constructed."""

    artifact: ModelArtifact

    @property
    def model_id(self) -> str:
        return self.artifact.model_id

    def predict_proba(self, text: str) -> float:
        return predict_proba(self.artifact, text)

    def predict_proba_batch(self, texts: Sequence[str]) -> np.ndarray:
        return predict_proba_batch(self.artifact, texts)


def _encode_tensor(tensor: np.ndarray) -> dict:
    return {
        "shape": list(tensor.shape),
        "data": base64.b64encode(np.ascontiguousarray(tensor, dtype="<f8").tobytes()).decode("ascii"),
    }


def _decode_tensor(obj: dict) -> np.ndarray:
    try:
        raw = base64.b64decode(obj["data"], validate=True)
        tensor = np.frombuffer(raw, dtype="<f8").astype(np.float64)
        return tensor.reshape(obj["shape"])
    except (KeyError, ValueError, TypeError) as exc:
        raise ArtifactCorruptError(f"bad parameter tensor: {exc}") from exc


def _parameters_block(parameters: dict[str, np.ndarray]) -> dict:
    return {name: _encode_tensor(tensor) for name, tensor in sorted(parameters.items())}


def _parameters_checksum(parameters: dict[str, np.ndarray]) -> str:
    block = json.dumps(_parameters_block(parameters), sort_keys=True,
                       separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(block).hexdigest()


def save_artifact(artifact: ModelArtifact, path: str | Path) -> None:
    """Write the artifact as a self-describing JSON envelope with a SHA-256
    checksum over the parameters block."""
    params = _parameters_block(artifact.parameters)
    envelope = {
        "format_version": artifact.format_version,
        "model_kind": artifact.model_kind,
        "hyperparameters": artifact.hyperparameters,
        "training_meta": artifact.training_meta,
        "vocabulary": {
            "terms": list(artifact.vocabulary.terms),
            "document_frequency": list(artifact.vocabulary.document_frequency),
            "n_docs": artifact.vocabulary.n_docs,
        },
        "parameters": params,
        "checksum": hashlib.sha256(
            json.dumps(params, sort_keys=True, separators=(",", ":")).encode("utf-8")
        ).hexdigest(),
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(envelope, fh, sort_keys=True, separators=(",", ":"))


def load_artifact(path: str | Path) -> ModelArtifact:
    """Inverse of save_artifact. Raises UnsupportedVersionError for files
    from a newer format and ArtifactCorruptError for damaged ones."""
    try:
        with open(Path(path), encoding="utf-8") as fh:
            envelope = json.load(fh)
    except FileNotFoundError:
        raise ArtifactError(f"{path}: no such file") from None
    except (OSError, json.JSONDecodeError) as exc:
        raise ArtifactCorruptError(f"{path}: unreadable artifact: {exc}") from exc

    if not isinstance(envelope, dict) or "format_version" not in envelope:
        raise ArtifactCorruptError(f"{path}: not a model artifact")
    version = envelope["format_version"]
    if version > FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"{path}: format_version {version} is newer than supported {FORMAT_VERSION}")

    try:
        params_block = envelope["parameters"]
        declared = envelope["checksum"]
        vocab_obj = envelope["vocabulary"]
    except KeyError as exc:
        raise ArtifactCorruptError(f"{path}: missing field {exc}") from exc
    actual = hashlib.sha256(
        json.dumps(params_block, sort_keys=True, separators=(",", ":")).encode("utf-8")
    ).hexdigest()
    if actual != declared:
        raise ArtifactCorruptError(f"{path}: parameters checksum mismatch")

    vocabulary = Vocabulary(
        terms=tuple(vocab_obj["terms"]),
        document_frequency=tuple(vocab_obj["document_frequency"]),
        n_docs=vocab_obj["n_docs"],
    )
    parameters = {name: _decode_tensor(obj) for name, obj in params_block.items()}
    return ModelArtifact(
        model_kind=envelope["model_kind"],
        vocabulary=vocabulary,
        parameters=parameters,
        hyperparameters=envelope.get("hyperparameters", {}),
        training_meta=envelope.get("training_meta", {}),
        format_version=version,
    )


def predict_proba(artifact: ModelArtifact, text: str) -> float:
    """Probability that `text` is fake, in [0, 1]; label is fake iff >= 0.5."""
    return float(predict_proba_batch(artifact, [text])[0])


def predict_proba_batch(artifact: ModelArtifact, texts: Sequence[str]) -> np.ndarray:
    """Vectorized predict_proba over a batch of raw texts."""
    token_lists = [tokenize(normalize_text(text)) for text in texts]
    if artifact.model_kind == "nb":
        from fakenewskit.models import naive_bayes
        return naive_bayes.predict_tokens_batch(artifact, token_lists)
    if artifact.model_kind == "logreg":
        from fakenewskit.models import logreg
        return logreg.predict_tokens_batch(artifact, token_lists)
    if artifact.model_kind == "cnn":
        from fakenewskit.models import cnn
        return cnn.predict_tokens_batch(artifact, token_lists)
    raise ArtifactError(
        f"model kind {artifact.model_kind!r} is a reserved slot with no native runtime")
