import json

import pytest

from fakenewskit.configs import (
    CONFIG_NAMES,
    ConfigError,
    DEFAULT_RATIOS,
    InfeasibleSplitError,
    SingleClassError,
    SplitRatios,
    build_configuration,
    configuration_manifest,
    oversample_to_majority,
    replay_configuration,
    save_configuration,
    split_sizes,
    stratified_split,
    undersample_to_minority,
)
from fakenewskit.corpus import Label

from conftest import make_corpus, synthetic_corpus


def test_split_sizes_reference_totals():
    assert split_sizes(4372, DEFAULT_RATIOS) == (3060, 874, 438)
    assert split_sizes(3699, DEFAULT_RATIOS) == (2589, 740, 370)
    assert split_sizes(8071, DEFAULT_RATIOS) == (5649, 1614, 808)
    assert split_sizes(10, DEFAULT_RATIOS) == (7, 2, 1)


def test_split_ratios_validation():
    with pytest.raises(ValueError):
        SplitRatios(0.7, 0.2, 0.2)
    with pytest.raises(ValueError):
        SplitRatios(-0.1, 0.6, 0.5)


def test_plain_split_sizes_and_disjoint():
    corpus = synthetic_corpus(30, 20, seed=5)
    train, val, test = stratified_split(corpus, DEFAULT_RATIOS, seed=1, mode="plain")
    assert (len(train), len(val), len(test)) == (35, 10, 5)
    ids = [item.id for split in (train, val, test) for item in split.items]
    assert len(set(ids)) == len(ids) == 50


def test_single_class_stratified_ten_items():
    corpus = make_corpus([(f"word{i} text", Label.REAL) for i in range(10)])
    train, val, test = stratified_split(corpus, DEFAULT_RATIOS, seed=3, mode="stratified")
    assert (len(train), len(val), len(test)) == (7, 2, 1)


def test_stratified_split_applies_rule_per_class():
    corpus = synthetic_corpus(40, 10, seed=8)
    train, val, test = stratified_split(corpus, DEFAULT_RATIOS, seed=2, mode="stratified")
    assert (train.real_count, val.real_count, test.real_count) == (28, 8, 4)
    assert (train.fake_count, val.fake_count, test.fake_count) == (7, 2, 1)


def test_split_determinism_and_seed_sensitivity():
    corpus = synthetic_corpus(25, 25, seed=6)
    first = stratified_split(corpus, DEFAULT_RATIOS, seed=11, mode="plain")
    second = stratified_split(corpus, DEFAULT_RATIOS, seed=11, mode="plain")
    assert [s.items for s in first] == [s.items for s in second]
    other = stratified_split(corpus, DEFAULT_RATIOS, seed=12, mode="plain")
    assert [s.items for s in first] != [s.items for s in other]


def test_infeasible_split_error():
    corpus = make_corpus([("a b", Label.REAL)] * 0 + [("c d", Label.FAKE), ("e f", Label.FAKE)]
                         + [("g h", Label.REAL), ("i j", Label.REAL), ("k l", Label.REAL)])
    with pytest.raises(InfeasibleSplitError):
        stratified_split(corpus, DEFAULT_RATIOS, seed=1, mode="stratified")


def test_empty_corpus_split_error():
    from fakenewskit.corpus import Corpus
    with pytest.raises(ConfigError):
        stratified_split(Corpus(name="empty", items=()), DEFAULT_RATIOS, seed=0)


def test_oversample_balances_to_majority(coaid_corpus, c19_corpus):
    balanced = oversample_to_majority(coaid_corpus, seed=4)
    assert (balanced.real_count, balanced.fake_count) == (3456, 3456)
    balanced = oversample_to_majority(c19_corpus, seed=4)
    assert (balanced.real_count, balanced.fake_count) == (3040, 3040)


def test_oversample_retains_originals_and_id_set():
    corpus = synthetic_corpus(12, 4, seed=9)
    balanced = oversample_to_majority(corpus, seed=2)
    assert balanced.items[:len(corpus)] == corpus.items
    original_fake_ids = {i.id for i in corpus.by_label(Label.FAKE)}
    balanced_fake_ids = {i.id for i in balanced.by_label(Label.FAKE)}
    assert balanced_fake_ids == original_fake_ids


def test_oversample_noop_when_balanced():
    corpus = synthetic_corpus(5, 5, seed=10)
    assert oversample_to_majority(corpus, seed=1) is corpus


def test_oversample_single_class_error():
    corpus = make_corpus([("a b", Label.REAL), ("c d", Label.REAL)])
    with pytest.raises(SingleClassError):
        oversample_to_majority(corpus, seed=0)


def test_undersample_to_minority(coaid_corpus, c19_corpus):
    assert (undersample_to_minority(c19_corpus, seed=3).real_count,
            undersample_to_minority(c19_corpus, seed=3).fake_count) == (659, 659)
    cut = undersample_to_minority(coaid_corpus, seed=3)
    assert (cut.real_count, cut.fake_count) == (916, 916)


def test_undersample_outputs_subset():
    corpus = synthetic_corpus(20, 6, seed=12)
    cut = undersample_to_minority(corpus, seed=5)
    original_ids = {i.id for i in corpus.items}
    assert all(item.id in original_ids for item in cut.items)
    assert len({i.id for i in cut.items}) == len(cut)


def test_undersample_noop_when_balanced():
    corpus = synthetic_corpus(4, 4, seed=13)
    assert undersample_to_minority(corpus, seed=1) is corpus


def test_undersample_single_class_error():
    corpus = make_corpus([("a b", Label.FAKE), ("c d", Label.FAKE)])
    with pytest.raises(SingleClassError):
        undersample_to_minority(corpus, seed=0)


def test_c1_on_ten_item_corpus():
    coaid = synthetic_corpus(6, 4, seed=14, name="coaid")
    c19 = synthetic_corpus(3, 7, seed=15, name="c19")
    config = build_configuration("C1", coaid, c19, seed=1)
    assert (len(config.train), len(config.validation), len(config.test)) == (7, 2, 1)


def test_c5_fixture_totals(coaid_corpus, c19_corpus):
    config = build_configuration("C5", coaid_corpus, c19_corpus, seed=42)
    assert (config.test.real_count, config.test.fake_count) == (659, 659)
    assert config.train.real_count + config.validation.real_count == 3456
    assert config.train.fake_count + config.validation.fake_count == 3456


def test_c7_fixture_class_totals(coaid_corpus, c19_corpus):
    config = build_configuration("C7", coaid_corpus, c19_corpus, seed=42)
    real = sum(s.real_count for s in (config.train, config.validation, config.test))
    fake = sum(s.fake_count for s in (config.train, config.validation, config.test))
    assert (real, fake) == (4115, 3956)


def test_unknown_configuration_name(coaid_corpus, c19_corpus):
    with pytest.raises(ConfigError):
        build_configuration("C8", coaid_corpus, c19_corpus, seed=0)


@pytest.mark.parametrize("name", CONFIG_NAMES)
def test_no_id_leaks_into_test_split(name):
    coaid = synthetic_corpus(40, 12, seed=21, name="coaid")
    c19 = synthetic_corpus(10, 36, seed=22, name="c19")
    config = build_configuration(name, coaid, c19, seed=7)
    seen = {i.id for i in config.train.items} | {i.id for i in config.validation.items}
    assert not seen & {i.id for i in config.test.items}


@pytest.mark.parametrize("name", CONFIG_NAMES)
def test_train_validation_disjoint(name):
    coaid = synthetic_corpus(40, 12, seed=23, name="coaid")
    c19 = synthetic_corpus(10, 36, seed=24, name="c19")
    config = build_configuration(name, coaid, c19, seed=8)
    assert not ({i.id for i in config.train.items}
                & {i.id for i in config.validation.items})


def test_configuration_serialization_deterministic(tmp_path):
    coaid = synthetic_corpus(30, 10, seed=31, name="coaid")
    c19 = synthetic_corpus(8, 24, seed=32, name="c19")
    blobs = []
    for run in ("one", "two"):
        config = build_configuration("C2", coaid, c19, seed=99)
        out = tmp_path / run
        save_configuration(config, out)
        blobs.append(b"".join((out / f).read_bytes() for f in
                              ("train.jsonl", "validation.jsonl", "test.jsonl",
                               "config_manifest.json")))
    assert blobs[0] == blobs[1]


def test_replay_from_manifest(tmp_path):
    coaid = synthetic_corpus(30, 10, seed=33, name="coaid")
    c19 = synthetic_corpus(8, 24, seed=34, name="c19")
    config = build_configuration("C5", coaid, c19, seed=5)
    manifest = json.loads(json.dumps(configuration_manifest(config)))
    replayed = replay_configuration(manifest, coaid, c19)
    for split in ("train", "validation", "test"):
        assert [i.id for i in getattr(replayed, split).items] == \
            [i.id for i in getattr(config, split).items]


def test_merge_rejects_id_collisions():
    coaid = synthetic_corpus(6, 4, seed=35, name="same")
    c19 = synthetic_corpus(6, 4, seed=35, name="same")
    with pytest.raises(ConfigError):
        build_configuration("C7", coaid, c19, seed=0)


def test_provenance_mentions_seed_and_steps(coaid_corpus, c19_corpus):
    config = build_configuration("C5", coaid_corpus, c19_corpus, seed=42)
    assert "seed 42" in config.provenance
    assert "undersampled" in config.provenance
