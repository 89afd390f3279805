"""The seven named dataset configurations (C1-C7).

C1/C3: plain 70/20/10 splits of the two source corpora. C2/C4: the same
splits rebalanced by oversampling the minority class within each split.
C5/C6: cross-dataset setups, 80/20 train/validation on one corpus
(oversampled within each split) with the other corpus undersampled to
balance as the test set. C7: stratified 70/20/10 over the merged corpora.

Split sizes follow an exact arithmetic rule: train = floor(train_ratio*N),
validation = round(validation_ratio*N) (half away from zero), test is the
remainder. Stratified mode applies the rule per class. Oversampling happens
after splitting so an id never crosses split boundaries.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from fakenewskit.corpus import Corpus, Label, NewsItem, save_corpus
from fakenewskit.rng import SplitMix64, derive_seed

CONFIG_NAMES = ("C1", "C2", "C3", "C4", "C5", "C6", "C7")


class ConfigError(Exception):
    """Dataset configuration could not be built."""


class InfeasibleSplitError(ConfigError):
    """A class has fewer items than the number of non-empty splits."""


class SingleClassError(ConfigError):
    """Rebalancing needs both classes present."""


@dataclass(frozen=True)
class SplitRatios:
    train: float
    validation: float
    test: float

    def __post_init__(self) -> None:
        for value in (self.train, self.validation, self.test):
            if not 0.0 <= value <= 1.0:
                raise ValueError("split ratios must lie in [0, 1]")
        if abs(self.train + self.validation + self.test - 1.0) > 1e-9:
            raise ValueError("split ratios must sum to 1")

    def as_fractions(self) -> tuple[Fraction, Fraction, Fraction]:
        # Exact rationals so floor/round arithmetic cannot be thrown off by
        # float representation (e.g. 0.7*N landing just below an integer).
        return (
            Fraction(self.train).limit_denominator(10**6),
            Fraction(self.validation).limit_denominator(10**6),
            Fraction(self.test).limit_denominator(10**6),
        )

    def nonzero_splits(self) -> int:
        return sum(1 for value in (self.train, self.validation, self.test) if value > 0)


DEFAULT_RATIOS = SplitRatios(train=0.7, validation=0.2, test=0.1)


@dataclass(frozen=True)
class DatasetConfiguration:
    name: str
    train: Corpus
    validation: Corpus
    test: Corpus
    seed: int
    provenance: str


def split_sizes(n: int, ratios: SplitRatios) -> tuple[int, int, int]:
    """(train, validation, test) sizes under the floor/round/remainder rule."""
    frac_train, frac_val, _ = ratios.as_fractions()
    n_train = math.floor(frac_train * n)
    n_val = math.floor(frac_val * n + Fraction(1, 2))
    n_test = n - n_train - n_val
    if n_test < 0:
        raise InfeasibleSplitError(f"ratios produce a negative test split for n={n}")
    return n_train, n_val, n_test


def _cut(items: list[NewsItem], sizes: tuple[int, int, int]
         ) -> tuple[list[NewsItem], list[NewsItem], list[NewsItem]]:
    n_train, n_val, _ = sizes
    return (items[:n_train], items[n_train:n_train + n_val], items[n_train + n_val:])


def stratified_split(corpus: Corpus, ratios: SplitRatios, seed: int,
                     mode: str = "plain") -> tuple[Corpus, Corpus, Corpus]:
    """Deterministic three-way split. mode="plain" applies the size rule to
    the whole corpus; mode="stratified" applies it per class, then mixes."""
    if len(corpus) == 0:
        raise ConfigError("cannot split an empty corpus")
    if mode not in ("plain", "stratified"):
        raise ValueError(f"unknown split mode {mode!r}")
    rng = SplitMix64(seed)

    if mode == "plain":
        pool = list(corpus.items)
        rng.shuffle(pool)
        parts = _cut(pool, split_sizes(len(pool), ratios))
    else:
        parts = ([], [], [])
        needed = ratios.nonzero_splits()
        for label in (Label.REAL, Label.FAKE):
            class_items = list(corpus.by_label(label))
            if not class_items:
                continue
            if len(class_items) < needed:
                raise InfeasibleSplitError(
                    f"class {label.value!r} has {len(class_items)} items for "
                    f"{needed} non-empty splits")
            rng.shuffle(class_items)
            for part, piece in zip(parts, _cut(class_items, split_sizes(len(class_items), ratios))):
                part.extend(piece)
        for part in parts:
            rng.shuffle(part)

    names = ("train", "validation", "test")
    return tuple(
        corpus.replace_items(part, name=f"{corpus.name}/{split_name}")
        for part, split_name in zip(parts, names)
    )  # type: ignore[return-value]


def oversample_to_majority(corpus: Corpus, seed: int) -> Corpus:
    """Duplicate minority-class items (sampling with replacement) until both
    classes match the original majority count. Originals are all retained."""
    real = list(corpus.by_label(Label.REAL))
    fake = list(corpus.by_label(Label.FAKE))
    if not real or not fake:
        raise SingleClassError(f"corpus {corpus.name!r} lacks one of the classes")
    if len(real) == len(fake):
        return corpus
    minority = real if len(real) < len(fake) else fake
    deficit = abs(len(real) - len(fake))
    rng = SplitMix64(seed)
    extras = rng.sample_with_replacement(minority, deficit)
    return corpus.replace_items(list(corpus.items) + extras, allow_duplicate_ids=True)


def undersample_to_minority(corpus: Corpus, seed: int) -> Corpus:
    """Randomly subsample the majority class (without replacement) down to
    the minority count, preserving corpus order among survivors."""
    real = list(corpus.by_label(Label.REAL))
    fake = list(corpus.by_label(Label.FAKE))
    if not real or not fake:
        raise SingleClassError(f"corpus {corpus.name!r} lacks one of the classes")
    if len(real) == len(fake):
        return corpus
    majority_label = Label.REAL if len(real) > len(fake) else Label.FAKE
    majority = real if majority_label is Label.REAL else fake
    keep = min(len(real), len(fake))
    rng = SplitMix64(seed)
    kept_ids = {item.id for item in rng.sample_without_replacement(majority, keep)}
    survivors = [item for item in corpus.items
                 if item.label is not majority_label or item.id in kept_ids]
    return corpus.replace_items(survivors)


def _oversample_splits(splits: tuple[Corpus, Corpus, Corpus], name: str, seed: int
                       ) -> tuple[Corpus, ...]:
    return tuple(
        oversample_to_majority(split, derive_seed(f"{name}:oversample:{i}", seed))
        for i, split in enumerate(splits)
    )


def _split_train_validation(corpus: Corpus, train_fraction: Fraction, seed: int
                            ) -> tuple[Corpus, Corpus]:
    """Stratified two-way split: per class, train = floor(fraction*N) and
    validation takes the remainder."""
    rng = SplitMix64(seed)
    train_part: list[NewsItem] = []
    val_part: list[NewsItem] = []
    for label in (Label.REAL, Label.FAKE):
        class_items = list(corpus.by_label(label))
        if len(class_items) < 2:
            raise InfeasibleSplitError(
                f"class {label.value!r} has {len(class_items)} items for 2 splits")
        rng.shuffle(class_items)
        n_train = math.floor(train_fraction * len(class_items))
        train_part.extend(class_items[:n_train])
        val_part.extend(class_items[n_train:])
    rng.shuffle(train_part)
    rng.shuffle(val_part)
    return (
        corpus.replace_items(train_part, name=f"{corpus.name}/train"),
        corpus.replace_items(val_part, name=f"{corpus.name}/validation"),
    )


def _merge(coaid: Corpus, c19: Corpus) -> Corpus:
    overlap = {item.id for item in coaid.items} & {item.id for item in c19.items}
    if overlap:
        raise ConfigError(f"corpora share {len(overlap)} ids; cannot merge")
    return Corpus(name="merged", items=coaid.items + c19.items)


def build_configuration(name: str, coaid: Corpus, c19: Corpus, seed: int
                        ) -> DatasetConfiguration:
    """Assemble one of C1..C7 from the two ingested corpora."""
    if name not in CONFIG_NAMES:
        raise ConfigError(f"unknown configuration {name!r}")
    split_seed = derive_seed(f"{name}:split", seed)

    if name in ("C1", "C3"):
        base = coaid if name == "C1" else c19
        train, val, test = stratified_split(base, DEFAULT_RATIOS, split_seed, mode="plain")
        provenance = (f"{name}: plain 70/20/10 split of {base.name} "
                      f"(seed {seed}, split seed {split_seed})")
    elif name in ("C2", "C4"):
        base = coaid if name == "C2" else c19
        splits = stratified_split(base, DEFAULT_RATIOS, split_seed, mode="stratified")
        train, val, test = _oversample_splits(splits, name, seed)
        provenance = (f"{name}: stratified 70/20/10 split of {base.name}, then each "
                      f"split oversampled to the majority class "
                      f"(seed {seed}, split seed {split_seed})")
    elif name in ("C5", "C6"):
        train_source, test_source = (coaid, c19) if name == "C5" else (c19, coaid)
        two_way = _split_train_validation(train_source, Fraction(4, 5), split_seed)
        train = oversample_to_majority(two_way[0], derive_seed(f"{name}:oversample:0", seed))
        val = oversample_to_majority(two_way[1], derive_seed(f"{name}:oversample:1", seed))
        test_seed = derive_seed(f"{name}:undersample", seed)
        test = undersample_to_minority(test_source, test_seed)
        test = test.replace_items(test.items, name=f"{test_source.name}/test")
        provenance = (f"{name}: stratified 80/20 train/validation split of "
                      f"{train_source.name} with each split oversampled to the "
                      f"majority class; test = {test_source.name} undersampled to "
                      f"the minority class (seed {seed}, split seed {split_seed}, "
                      f"test seed {test_seed})")
    else:  # C7
        merged = _merge(coaid, c19)
        train, val, test = stratified_split(merged, DEFAULT_RATIOS, split_seed,
                                            mode="stratified")
        provenance = (f"C7: stratified 70/20/10 split of {coaid.name} merged with "
                      f"{c19.name} (seed {seed}, split seed {split_seed})")

    return DatasetConfiguration(name=name, train=train, validation=val, test=test,
                                seed=seed, provenance=provenance)


def configuration_manifest(config: DatasetConfiguration) -> dict:
    return {
        "name": config.name,
        "seed": config.seed,
        "provenance": config.provenance,
        "splits": {
            "train": [item.id for item in config.train.items],
            "validation": [item.id for item in config.validation.items],
            "test": [item.id for item in config.test.items],
        },
    }


def save_configuration(config: DatasetConfiguration, out_dir: str | Path) -> dict:
    """Write train/validation/test JSONL plus a replayable manifest; returns
    a map of the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {}
    for split_name in ("train", "validation", "test"):
        path = out_dir / f"{split_name}.jsonl"
        save_corpus(getattr(config, split_name), path)
        paths[split_name] = str(path)
    manifest_path = out_dir / "config_manifest.json"
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(configuration_manifest(config), fh, indent=2, sort_keys=True)
        fh.write("\n")
    paths["manifest"] = str(manifest_path)
    return paths


def replay_configuration(manifest: dict, coaid: Corpus, c19: Corpus
                         ) -> DatasetConfiguration:
    """Rebuild a configuration from its manifest id lists (exact replay)."""
    by_id = {item.id: item for item in coaid.items}
    by_id.update({item.id: item for item in c19.items})
    corpora = {}
    for split_name, ids in manifest["splits"].items():
        try:
            items = tuple(by_id[item_id] for item_id in ids)
        except KeyError as exc:
            raise ConfigError(f"manifest id {exc} not found in source corpora") from exc
        corpora[split_name] = Corpus(
            name=f"{manifest['name']}/{split_name}", items=items,
            allow_duplicate_ids=True)
    return DatasetConfiguration(
        name=manifest["name"], train=corpora["train"], validation=corpora["validation"],
        test=corpora["test"], seed=manifest["seed"], provenance=manifest["provenance"])
