import random

import pytest

from fakenewskit.configs import build_configuration
from fakenewskit.corpus import Label
from fakenewskit.evaluation import (
    ConfusionMatrix,
    EvaluationError,
    cloud_to_csv,
    confusion,
    confusion_to_csv,
    evaluate,
    report_from_json,
    report_markdown_row,
    report_to_json,
    term_cloud,
    weighted_metrics,
)
from fakenewskit.features import load_stopwords
from fakenewskit.models import train_naive_bayes

from conftest import make_corpus, synthetic_corpus


def test_confusion_all_correct():
    truth = [Label.FAKE] * 3 + [Label.REAL] * 2
    cm = confusion(truth, truth)
    assert (cm.tp_fake, cm.fn_fake, cm.tn_real, cm.fp_real) == (3, 0, 2, 0)


def test_confusion_published_reference_case():
    # 349 real / 89 fake with 5 fake and 3 real misclassified
    truth = [Label.FAKE] * 89 + [Label.REAL] * 349
    pred = ([Label.FAKE] * 84 + [Label.REAL] * 5
            + [Label.REAL] * 346 + [Label.FAKE] * 3)
    cm = confusion(pred, truth)
    assert (cm.tp_fake, cm.fn_fake, cm.tn_real, cm.fp_real) == (84, 5, 346, 3)


def test_confusion_inverted_predictions():
    truth = [Label.FAKE] * 4 + [Label.REAL] * 6
    pred = [Label.REAL] * 4 + [Label.FAKE] * 6
    cm = confusion(pred, truth)
    assert cm.tp_fake == 0 and cm.tn_real == 0
    assert cm.fn_fake == 4 and cm.fp_real == 6


def test_confusion_length_mismatch():
    with pytest.raises(EvaluationError):
        confusion([Label.FAKE], [Label.FAKE, Label.REAL])


def test_confusion_empty():
    with pytest.raises(EvaluationError):
        confusion([], [])


def test_weighted_metrics_reference_row():
    report = weighted_metrics(ConfusionMatrix(tp_fake=84, fn_fake=5, tn_real=346, fp_real=3))
    assert report.rounded() == {"precision": 98.16, "recall": 98.17,
                                "f1": 98.17, "accuracy": 98.17}


def test_weighted_metrics_perfect_ten_items():
    report = weighted_metrics(ConfusionMatrix(tp_fake=4, fn_fake=0, tn_real=6, fp_real=0))
    assert report.rounded() == {"precision": 100.0, "recall": 100.0,
                                "f1": 100.0, "accuracy": 100.0}


def test_weighted_recall_equals_accuracy_fuzz():
    rng = random.Random(7)
    for _ in range(500):
        cm = ConfusionMatrix(*(rng.randint(0, 40) for _ in range(4)))
        if cm.total == 0:
            continue
        report = weighted_metrics(cm)
        assert abs(report.recall_weighted - report.accuracy) <= 1e-12


def test_f1_is_harmonic_mean_when_defined():
    rng = random.Random(8)
    for _ in range(200):
        cm = ConfusionMatrix(*(rng.randint(1, 30) for _ in range(4)))
        report = weighted_metrics(cm)
        for cell in report.per_class.values():
            p, r = cell["precision"], cell["recall"]
            if p > 0 and r > 0:
                assert cell["f1"] == pytest.approx(2 * p * r / (p + r), abs=1e-12)


def test_zero_division_cells_flagged():
    # no fake truths and no fake predictions
    report = weighted_metrics(ConfusionMatrix(tp_fake=0, fn_fake=0, tn_real=5, fp_real=0))
    assert report.per_class["fake"]["precision"] == 0.0
    assert "fake_precision_zero_division" in report.flags


def test_metrics_permutation_invariant():
    rng = random.Random(9)
    truth = [Label.FAKE if rng.random() < 0.4 else Label.REAL for _ in range(60)]
    pred = [Label.FAKE if rng.random() < 0.5 else Label.REAL for _ in range(60)]
    base = weighted_metrics(confusion(pred, truth))
    order = list(range(60))
    rng.shuffle(order)
    shuffled = weighted_metrics(confusion([pred[i] for i in order],
                                          [truth[i] for i in order]))
    assert base.rounded() == shuffled.rounded()
    assert base.confusion == shuffled.confusion


def test_report_json_roundtrip(nb_artifact):
    report = weighted_metrics(ConfusionMatrix(11, 3, 25, 2),
                              configuration="C1", model_id=nb_artifact.model_id)
    again = report_from_json(report_to_json(report))
    assert again == report


def test_report_markdown_row_order():
    report = weighted_metrics(ConfusionMatrix(84, 5, 346, 3),
                              configuration="C1", model_id="m")
    row = report_markdown_row(report)
    assert row.split("|")[3:7] == [" 98.16 ", " 98.17 ", " 98.17 ", " 98.17 "]


def test_evaluate_populates_report(nb_artifact):
    coaid = synthetic_corpus(40, 12, seed=61, name="coaid")
    c19 = synthetic_corpus(10, 36, seed=62, name="c19")
    config = build_configuration("C1", coaid, c19, seed=3)
    artifact = train_naive_bayes(config.train)
    report = evaluate(artifact, config)
    assert report.configuration == "C1"
    assert 0.0 <= report.accuracy <= 100.0
    assert report.confusion.total == len(config.test)


def test_evaluate_same_artifact_two_configs_distinct_reports():
    coaid = synthetic_corpus(40, 12, seed=63, name="coaid")
    c19 = synthetic_corpus(10, 36, seed=64, name="c19")
    c5 = build_configuration("C5", coaid, c19, seed=4)
    c6 = build_configuration("C6", coaid, c19, seed=4)
    artifact = train_naive_bayes(c5.train)
    r5, r6 = evaluate(artifact, c5), evaluate(artifact, c6)
    assert r5.configuration == "C5" and r6.configuration == "C6"
    assert r5.confusion.total != r6.confusion.total or r5 != r6


def test_probability_exactly_half_classifies_fake():
    # balanced training prior puts an all-out-of-vocabulary test item at
    # exactly p_fake = 0.5; the tie must resolve to fake
    from fakenewskit.configs import DatasetConfiguration
    from fakenewskit.models import predict_proba
    from fakenewskit.features import build_vocabulary
    train = make_corpus([("hoax cure", Label.FAKE), ("study data", Label.REAL)],
                        name="tie-train")
    test = make_corpus([("zebra quark", Label.REAL)], name="tie-test")
    artifact = train_naive_bayes(train, build_vocabulary(train, min_df=1))
    assert predict_proba(artifact, "zebra quark") == 0.5
    config = DatasetConfiguration(name="C1", train=train, validation=test,
                                  test=test, seed=0, provenance="")
    report = evaluate(artifact, config)
    assert report.confusion.fp_real == 1  # predicted fake on the real tie item


def test_evaluate_empty_test_split_errors(nb_artifact, toy_train):
    from fakenewskit.configs import DatasetConfiguration
    from fakenewskit.corpus import Corpus
    config = DatasetConfiguration(name="C1", train=toy_train, validation=toy_train,
                                  test=Corpus(name="empty", items=()), seed=0,
                                  provenance="")
    with pytest.raises(EvaluationError):
        evaluate(nb_artifact, config)


def test_term_cloud_counts():
    corpus = make_corpus([("covid covid vaccine", Label.REAL),
                          ("covid test", Label.REAL)])
    cloud = term_cloud(corpus, Label.REAL, top_k=1)
    assert cloud.entries == (("covid", 3),)


def test_term_cloud_stopwords_removed():
    corpus = make_corpus([("the of covid", Label.REAL)])
    cloud = term_cloud(corpus, Label.REAL, top_k=5, stopwords=load_stopwords())
    assert cloud.entries == (("covid", 1),)


def test_term_cloud_tie_breaks_lexicographically():
    corpus = make_corpus([("beta alpha", Label.FAKE)])
    cloud = term_cloud(corpus, Label.FAKE, top_k=1)
    assert cloud.entries == (("alpha", 1),)


def test_term_cloud_fixture_fake_class_vocabulary(c19_corpus):
    cloud = term_cloud(c19_corpus, Label.FAKE, top_k=20, stopwords=load_stopwords())
    terms = {term for term, _ in cloud.entries}
    assert {"wuhan", "outbreak"} <= terms
    counts = [count for _, count in cloud.entries]
    assert counts == sorted(counts, reverse=True)


def test_term_cloud_requires_positive_k(c19_corpus):
    with pytest.raises(ValueError):
        term_cloud(c19_corpus, Label.FAKE, top_k=0)


def test_csv_emission():
    corpus = make_corpus([("covid covid vaccine", Label.REAL)])
    cloud = term_cloud(corpus, Label.REAL, top_k=2)
    assert cloud_to_csv(cloud).splitlines()[0] == "term,count"
    cm = ConfusionMatrix(1, 2, 3, 4)
    lines = confusion_to_csv(cm).splitlines()
    assert lines[1] == "fake,1,4" and lines[2] == "real,2,3"
