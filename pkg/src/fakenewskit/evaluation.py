"""Confusion matrices, support-weighted metrics, reports, and term clouds.

Fake is the positive class. Weighted averaging uses class support (truth
counts) as weights, which makes weighted recall equal accuracy; per-class
cells with a 0/0 ratio define to 0 and are flagged in the report.
"""

from __future__ import annotations

import io
import json
from collections import Counter
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Sequence

from fakenewskit.configs import DatasetConfiguration
from fakenewskit.corpus import Corpus, Label
from fakenewskit.features import tokenize
from fakenewskit.models.base import LoadedModel, ModelArtifact


class EvaluationError(Exception):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    tp_fake: int
    fn_fake: int
    tn_real: int
    fp_real: int

    def __post_init__(self) -> None:
        if min(self.tp_fake, self.fn_fake, self.tn_real, self.fp_real) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp_fake + self.fn_fake + self.tn_real + self.fp_real

    @property
    def support_fake(self) -> int:
        return self.tp_fake + self.fn_fake

    @property
    def support_real(self) -> int:
        return self.tn_real + self.fp_real


def confusion(pred: Sequence[Label], truth: Sequence[Label]) -> ConfusionMatrix:
    """Counts with fake positive; errors on length mismatch or empty input."""
    if len(pred) != len(truth):
        raise EvaluationError(f"length mismatch: {len(pred)} predictions, {len(truth)} truths")
    if not truth:
        raise EvaluationError("cannot build a confusion matrix from zero items")
    tp = fn = tn = fp = 0
    for p, t in zip(pred, truth):
        if t is Label.FAKE:
            if p is Label.FAKE:
                tp += 1
            else:
                fn += 1
        else:
            if p is Label.REAL:
                tn += 1
            else:
                fp += 1
    return ConfusionMatrix(tp_fake=tp, fn_fake=fn, tn_real=tn, fp_real=fp)


def _ratio(num: int, den: int, flag: str, flags: list[str]) -> float:
    if den == 0:
        flags.append(flag)
        return 0.0
    return num / den


@dataclass(frozen=True)
class EvaluationReport:
    """Weighted metrics for one (configuration, model) pair. Metric fields
    are percentages at full precision; use rounded() for display."""

    configuration: str
    model_id: str
    precision_weighted: float
    recall_weighted: float
    f1_weighted: float
    accuracy: float
    confusion: ConfusionMatrix
    per_class: dict
    flags: tuple[str, ...] = ()

    def rounded(self) -> dict[str, float]:
        """Half-up rounding to 2 decimals, applied only at presentation."""
        return {
            "precision": round2(self.precision_weighted),
            "recall": round2(self.recall_weighted),
            "f1": round2(self.f1_weighted),
            "accuracy": round2(self.accuracy),
        }


def round2(value: float) -> float:
    return float(Decimal(repr(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def weighted_metrics(cm: ConfusionMatrix, configuration: str = "",
                     model_id: str = "") -> EvaluationReport:
    """Per-class precision/recall/F1 and their support-weighted averages,
    as percentages."""
    if cm.total == 0:
        raise EvaluationError("confusion matrix is empty")
    flags: list[str] = []

    precision_fake = _ratio(cm.tp_fake, cm.tp_fake + cm.fp_real, "fake_precision_zero_division", flags)
    recall_fake = _ratio(cm.tp_fake, cm.support_fake, "fake_recall_zero_division", flags)
    precision_real = _ratio(cm.tn_real, cm.tn_real + cm.fn_fake, "real_precision_zero_division", flags)
    recall_real = _ratio(cm.tn_real, cm.support_real, "real_recall_zero_division", flags)

    def f1(p: float, r: float, flag: str) -> float:
        if p + r == 0.0:
            flags.append(flag)
            return 0.0
        return 2.0 * p * r / (p + r)

    f1_fake = f1(precision_fake, recall_fake, "fake_f1_zero_division")
    f1_real = f1(precision_real, recall_real, "real_f1_zero_division")

    n = cm.total
    w_fake = cm.support_fake / n
    w_real = cm.support_real / n
    report = EvaluationReport(
        configuration=configuration,
        model_id=model_id,
        precision_weighted=100.0 * (w_fake * precision_fake + w_real * precision_real),
        recall_weighted=100.0 * (w_fake * recall_fake + w_real * recall_real),
        f1_weighted=100.0 * (w_fake * f1_fake + w_real * f1_real),
        accuracy=100.0 * (cm.tp_fake + cm.tn_real) / n,
        confusion=cm,
        per_class={
            "fake": {"precision": precision_fake, "recall": recall_fake,
                     "f1": f1_fake, "support": cm.support_fake},
            "real": {"precision": precision_real, "recall": recall_real,
                     "f1": f1_real, "support": cm.support_real},
        },
        flags=tuple(flags),
    )
    return report


def evaluate(artifact: ModelArtifact, config: DatasetConfiguration) -> EvaluationReport:
    """Predict on the configuration's test split and assemble the report."""
    if len(config.test) == 0:
        raise EvaluationError(f"configuration {config.name} has an empty test split")
    model = LoadedModel(artifact)
    probs = model.predict_proba_batch(config.test.texts())
    pred = [Label.FAKE if p >= 0.5 else Label.REAL for p in probs]
    cm = confusion(pred, config.test.labels())
    return weighted_metrics(cm, configuration=config.name, model_id=model.model_id)


@dataclass(frozen=True)
class TermFrequencyCloud:
    label: Label
    entries: tuple[tuple[str, int], ...]


def term_cloud(corpus: Corpus, label: Label, top_k: int,
               stopwords: Iterable[str] = ()) -> TermFrequencyCloud:
    """Most frequent tokens over one class's texts, stopwords excluded;
    count ties resolve lexicographically."""
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    stop = set(stopwords)
    counts: Counter[str] = Counter()
    for item in corpus.by_label(label):
        counts.update(token.surface for token in tokenize(item.text)
                      if token.surface not in stop)
    ranked = sorted(counts.items(), key=lambda pair: (-pair[1], pair[0]))[:top_k]
    return TermFrequencyCloud(label=label, entries=tuple(ranked))


def cloud_to_csv(cloud: TermFrequencyCloud) -> str:
    buf = io.StringIO()
    buf.write("term,count\n")
    for term, count in cloud.entries:
        buf.write(f"{term},{count}\n")
    return buf.getvalue()


def report_to_json(report: EvaluationReport) -> str:
    payload = {
        "configuration": report.configuration,
        "model_id": report.model_id,
        "precision_weighted": report.precision_weighted,
        "recall_weighted": report.recall_weighted,
        "f1_weighted": report.f1_weighted,
        "accuracy": report.accuracy,
        "display": {k: f"{v:.2f}" for k, v in report.rounded().items()},
        "confusion": {
            "tp_fake": report.confusion.tp_fake,
            "fn_fake": report.confusion.fn_fake,
            "tn_real": report.confusion.tn_real,
            "fp_real": report.confusion.fp_real,
        },
        "per_class": report.per_class,
        "flags": list(report.flags),
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def report_from_json(text: str) -> EvaluationReport:
    obj = json.loads(text)
    return EvaluationReport(
        configuration=obj["configuration"],
        model_id=obj["model_id"],
        precision_weighted=obj["precision_weighted"],
        recall_weighted=obj["recall_weighted"],
        f1_weighted=obj["f1_weighted"],
        accuracy=obj["accuracy"],
        confusion=ConfusionMatrix(**obj["confusion"]),
        per_class=obj["per_class"],
        flags=tuple(obj["flags"]),
    )


def report_markdown_row(report: EvaluationReport) -> str:
    """One table row in Precision / Recall / F1 / Accuracy column order."""
    r = report.rounded()
    return (f"| {report.configuration} | {report.model_id} | {r['precision']:.2f} "
            f"| {r['recall']:.2f} | {r['f1']:.2f} | {r['accuracy']:.2f} |")


MARKDOWN_HEADER = ("| Config. | Model | Precision | Recall | F1 | Accuracy |\n"
                   "|---|---|---|---|---|---|")


def confusion_to_csv(cm: ConfusionMatrix) -> str:
    return ("predicted\\truth,fake,real\n"
            f"fake,{cm.tp_fake},{cm.fp_real}\n"
            f"real,{cm.fn_fake},{cm.tn_real}\n")
