import random

import pytest

from codemix.errors import LengthMismatch, UnknownLabel
from codemix.metrics import evaluate
from helpers import brute_force_metrics


def test_perfect_prediction():
    report = evaluate(["a", "b", "c", "a"], ["a", "b", "c", "a"], ["a", "b", "c"])
    assert report.accuracy == 1.0
    assert report.macro_f1 == 1.0
    assert report.macro_precision == 1.0
    assert report.macro_recall == 1.0


def test_worked_two_class_example():
    report = evaluate(["A", "A", "B", "B"], ["A", "B", "B", "B"], ["A", "B"])
    assert report.accuracy == pytest.approx(0.75)
    a, b = report.per_class["A"], report.per_class["B"]
    assert a.precision == pytest.approx(1.0)
    assert a.recall == pytest.approx(0.5)
    assert a.f1 == pytest.approx(2 / 3)
    assert b.precision == pytest.approx(2 / 3)
    assert b.recall == pytest.approx(1.0)
    assert b.f1 == pytest.approx(0.8)
    assert report.macro_f1 == pytest.approx(11 / 15)  # 0.7333...


def test_zero_division_convention():
    report = evaluate(["A", "B"], ["A", "A"], ["A", "B"])
    assert report.per_class["A"].f1 == pytest.approx(2 / 3)
    assert report.per_class["B"].f1 == 0.0
    assert report.macro_f1 == pytest.approx(1 / 3)


def test_absent_class_contributes_zero():
    report = evaluate(["A", "A"], ["A", "A"], ["A", "B", "C"])
    assert report.per_class["B"].f1 == 0.0
    assert report.per_class["C"].precision == 0.0
    assert report.macro_f1 == pytest.approx(1 / 3)


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        evaluate(["A"], ["A", "B"], ["A", "B"])


def test_unknown_label():
    with pytest.raises(UnknownLabel):
        evaluate(["A", "Z"], ["A", "A"], ["A", "B"])
    with pytest.raises(UnknownLabel):
        evaluate(["A", "A"], ["A", "Z"], ["A", "B"])


def test_empty_input():
    with pytest.raises(ValueError):
        evaluate([], [], ["A"])


def _random_case(rng):
    k = rng.randint(2, 6)
    labels = [f"c{i}" for i in range(k)]
    n = rng.randint(1, 60)
    y_true = [rng.choice(labels) for _ in range(n)]
    y_pred = [rng.choice(labels) for _ in range(n)]
    return y_true, y_pred, labels


def test_matches_brute_force_oracle():
    rng = random.Random(123)
    for _ in range(300):
        y_true, y_pred, labels = _random_case(rng)
        report = evaluate(y_true, y_pred, labels)
        acc, per_class, macro_p, macro_r, macro_f1 = brute_force_metrics(y_true, y_pred, labels)
        assert abs(report.accuracy - acc) < 1e-12
        assert abs(report.macro_precision - macro_p) < 1e-12
        assert abs(report.macro_recall - macro_r) < 1e-12
        assert abs(report.macro_f1 - macro_f1) < 1e-12
        for label in labels:
            m = report.per_class[label]
            assert abs(m.precision - per_class[label][0]) < 1e-12
            assert abs(m.recall - per_class[label][1]) < 1e-12
            assert abs(m.f1 - per_class[label][2]) < 1e-12


def test_ranges_and_confusion_conservation():
    rng = random.Random(77)
    for _ in range(100):
        y_true, y_pred, labels = _random_case(rng)
        report = evaluate(y_true, y_pred, labels)
        values = [report.accuracy, report.macro_precision, report.macro_recall, report.macro_f1]
        values += [x for m in report.per_class.values() for x in (m.precision, m.recall, m.f1)]
        assert all(0.0 <= v <= 1.0 for v in values)
        assert sum(sum(row) for row in report.confusion) == report.n == len(y_true)
        trace = sum(report.confusion[i][i] for i in range(len(labels)))
        assert report.accuracy == trace / report.n


def test_label_permutation_invariance():
    rng = random.Random(5)
    y_true, y_pred, labels = _random_case(rng)
    base = evaluate(y_true, y_pred, labels)
    permuted_labels = list(labels)
    rng.shuffle(permuted_labels)
    perm = evaluate(y_true, y_pred, permuted_labels)
    assert perm.accuracy == base.accuracy
    assert perm.macro_precision == pytest.approx(base.macro_precision, abs=1e-15)
    assert perm.macro_f1 == pytest.approx(base.macro_f1, abs=1e-15)
    for label in labels:
        assert perm.per_class[label] == base.per_class[label]


def test_report_dict_round_trip():
    report = evaluate(["A", "B"], ["A", "B"], ["A", "B"])
    doc = report.to_dict()
    assert set(doc) == {
        "accuracy", "per_class", "macro_precision", "macro_recall",
        "macro_f1", "confusion", "labels", "n",
    }
    assert doc["per_class"]["A"] == {"precision": 1.0, "recall": 1.0, "f1": 1.0}
    assert doc["confusion"] == [[1, 0], [0, 1]]
    assert report.to_json() == report.to_json()
