"""Labeled news corpora: ingestion from CSV/JSONL, normalization, serialization."""

from __future__ import annotations

import csv
import json
import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping


class Label(Enum):
    REAL = "real"
    FAKE = "fake"


class Source(Enum):
    COAID = "coaid"
    C19RUMOR = "c19rumor"
    OTHER = "other"


# Accepted label spellings, case-insensitive. The two supported source
# datasets use True/False vocabulary; real/fake and 1/0 are common elsewhere.
_REAL_LABELS = {"true", "real", "1"}
_FAKE_LABELS = {"false", "fake", "0"}

_SOURCE_ALIASES = {
    "coaid": Source.COAID,
    "c19rumor": Source.C19RUMOR,
    "c19-rumor": Source.C19RUMOR,
    "c19_rumor": Source.C19RUMOR,
}

_URL_RE = re.compile(r"(?:https?://|www\.)\S+")
_WS_RE = re.compile(r"\s+")

DEFAULT_MAPPING = {"text": "text", "label": "label", "id": "id", "source": "source"}


class IngestError(Exception):
    """File missing, unreadable, or not parseable under the declared format."""


class EmptyCorpusError(IngestError):
    """The input contained no data rows."""


def normalize_text(raw: str) -> str:
    """Canonical text form: lowercased, URLs replaced by the single token
    "<url>", control and format characters removed (whitespace-class ones
    become spaces), whitespace runs collapsed to one space, ends trimmed.
    Idempotent and total."""
    text = raw.lower()
    text = _URL_RE.sub("<url>", text)
    # drop non-whitespace control/format chars first so their removal cannot
    # splice two spaces together after collapsing
    text = "".join(ch for ch in text
                   if ch.isspace() or unicodedata.category(ch) not in ("Cc", "Cf"))
    text = _WS_RE.sub(" ", text)
    return text.strip()


@dataclass(frozen=True)
class NewsItem:
    """One labeled news text (headline or body)."""

    id: str
    text: str
    label: Label
    source: Source = Source.OTHER


@dataclass(frozen=True)
class IngestStats:
    rows_parsed: int = 0
    dropped_empty_text: int = 0
    dropped_bad_label: int = 0
    duplicate_ids: int = 0


@dataclass(frozen=True)
class Corpus:
    """Immutable ordered collection of NewsItem.

    Ids are unique unless the corpus was produced by oversampling
    (allow_duplicate_ids), in which case repeats are intentional.
    """

    name: str
    items: tuple[NewsItem, ...]
    stats: IngestStats | None = field(default=None, compare=False)
    allow_duplicate_ids: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if not self.allow_duplicate_ids:
            ids = [item.id for item in self.items]
            if len(ids) != len(set(ids)):
                raise ValueError(f"corpus {self.name!r} has duplicate ids")

    def __len__(self) -> int:
        return len(self.items)

    @cached_property
    def real_count(self) -> int:
        return sum(1 for item in self.items if item.label is Label.REAL)

    @cached_property
    def fake_count(self) -> int:
        return sum(1 for item in self.items if item.label is Label.FAKE)

    def by_label(self, label: Label) -> tuple[NewsItem, ...]:
        return tuple(item for item in self.items if item.label is label)

    def texts(self) -> list[str]:
        return [item.text for item in self.items]

    def labels(self) -> list[Label]:
        return [item.label for item in self.items]

    def replace_items(self, items: Iterable[NewsItem], name: str | None = None,
                      allow_duplicate_ids: bool | None = None) -> "Corpus":
        return Corpus(
            name=self.name if name is None else name,
            items=tuple(items),
            allow_duplicate_ids=(self.allow_duplicate_ids if allow_duplicate_ids is None
                                 else allow_duplicate_ids),
        )


def parse_label(raw: object) -> Label | None:
    """Map a raw label value to Label, or None when unmappable."""
    if raw is None:
        return None
    token = str(raw).strip().lower()
    if token in _REAL_LABELS:
        return Label.REAL
    if token in _FAKE_LABELS:
        return Label.FAKE
    return None


def _parse_source(raw: object, default: Source) -> Source:
    if raw is None:
        return default
    return _SOURCE_ALIASES.get(str(raw).strip().lower(), default)


def _iter_rows(path: Path, format: str) -> Iterable[dict]:
    if format == "csv":
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise IngestError(f"{path}: missing CSV header row")
            yield from reader
    elif format == "jsonl":
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise IngestError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
                if not isinstance(obj, dict):
                    raise IngestError(f"{path}:{lineno}: expected a JSON object")
                yield obj
    else:
        raise IngestError(f"unknown format {format!r} (expected 'csv' or 'jsonl')")


def ingest(path: str | Path, format: str, mapping: Mapping[str, str],
           name: str | None = None, source: Source = Source.OTHER) -> Corpus:
    """Load a labeled corpus from a CSV or JSONL file.

    mapping names the columns/keys to read: required "text" and "label",
    optional "id" and "source". Rows with empty normalized text or an
    unmappable label are dropped and counted in Corpus.stats; duplicate ids
    keep the first occurrence. Missing ids are synthesized as
    "{source}-{row_index}".
    """
    path = Path(path)
    if "text" not in mapping or "label" not in mapping:
        raise IngestError("mapping must name 'text' and 'label' fields")
    if not path.exists():
        raise IngestError(f"{path}: no such file")

    rows_parsed = 0
    dropped_empty = 0
    dropped_label = 0
    duplicates = 0
    seen: set[str] = set()
    items: list[NewsItem] = []
    try:
        for index, row in enumerate(_iter_rows(path, format)):
            rows_parsed += 1
            label = parse_label(row.get(mapping["label"]))
            if label is None:
                dropped_label += 1
                continue
            text = normalize_text(str(row.get(mapping["text"]) or ""))
            if not text:
                dropped_empty += 1
                continue
            item_source = source
            if "source" in mapping:
                item_source = _parse_source(row.get(mapping["source"]), source)
            raw_id = row.get(mapping["id"]) if "id" in mapping else None
            item_id = str(raw_id).strip() if raw_id not in (None, "") else ""
            if not item_id:
                item_id = f"{item_source.value}-{index}"
            if item_id in seen:
                duplicates += 1
                continue
            seen.add(item_id)
            items.append(NewsItem(id=item_id, text=text, label=label, source=item_source))
    except OSError as exc:
        raise IngestError(f"{path}: {exc}") from exc

    if rows_parsed == 0:
        raise EmptyCorpusError(f"{path}: no data rows")
    stats = IngestStats(rows_parsed=rows_parsed, dropped_empty_text=dropped_empty,
                        dropped_bad_label=dropped_label, duplicate_ids=duplicates)
    return Corpus(name=name or path.stem, items=tuple(items), stats=stats)


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Serialize a corpus as JSONL in the canonical {id,text,label,source}
    shape; ingest() of the output reproduces the corpus item for item."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for item in corpus.items:
            fh.write(json.dumps(
                {"id": item.id, "text": item.text, "label": item.label.value,
                 "source": item.source.value},
                ensure_ascii=False) + "\n")


def load_corpus_jsonl(path: str | Path, name: str | None = None,
                      allow_duplicate_ids: bool = False) -> Corpus:
    """Load a corpus previously written by save_corpus. Unlike ingest this
    preserves duplicate ids, which oversampled splits rely on."""
    path = Path(path)
    items = []
    for row in _iter_rows(path, "jsonl"):
        label = parse_label(row.get("label"))
        if label is None:
            raise IngestError(f"{path}: bad label {row.get('label')!r}")
        items.append(NewsItem(
            id=str(row["id"]),
            text=normalize_text(str(row["text"])),
            label=label,
            source=_parse_source(row.get("source"), Source.OTHER),
        ))
    return Corpus(name=name or path.stem, items=tuple(items),
                  allow_duplicate_ids=allow_duplicate_ids)
