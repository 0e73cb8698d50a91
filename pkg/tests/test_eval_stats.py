import math

import numpy as np
import pytest
from scipy import integrate

from speechact import eval_stats
from speechact.errors import DataError
from speechact.eval_stats import (cross_validate, metrics_from_confusion,
                                  stratified_kfold, t_cdf, t_test)
from speechact.features import FeatureSchema, FeatureVector


def test_balanced_folds_exact_split():
    labels = ["A"] * 5 + ["B"] * 5
    folds = stratified_kfold(labels, k=5, seed=0)
    for fold in folds:
        assert len(fold) == 2
        assert sorted(labels[i] for i in fold) == ["A", "B"]


def test_folds_partition_fuzz():
    rng = np.random.default_rng(3)
    for _ in range(100):
        n = int(rng.integers(6, 40))
        labels = [("A", "B", "C")[int(rng.integers(0, 3))] for _ in range(n)]
        k = int(rng.integers(2, min(n, 8) + 1))
        folds = stratified_kfold(labels, k, seed=int(rng.integers(0, 100)))
        flat = [i for fold in folds for i in fold]
        assert sorted(flat) == list(range(n))          # union + disjoint
        for label in set(labels):
            counts = [sum(labels[i] == label for i in fold) for fold in folds]
            assert max(counts) - min(counts) <= 1      # stratification


def test_leave_one_out_boundary():
    labels = ["A", "B", "A", "B"]
    folds = stratified_kfold(labels, k=4, seed=1)
    assert all(len(f) == 1 for f in folds)


def test_fold_errors():
    with pytest.raises(DataError):
        stratified_kfold(["A", "B"], k=3, seed=0)
    with pytest.raises(DataError):
        stratified_kfold(["A", "B"], k=1, seed=0)


def _schema(d):
    return FeatureSchema(tuple(f"f{i}" for i in range(d)), tuple(["count"] * d))


def _separable_dataset(n_per_class=8):
    s = _schema(3)
    data = []
    for i in range(n_per_class):
        data.append((FeatureVector(s, np.array([3.0 + i % 2, 0.0, 1.0])), "A"))
        data.append((FeatureVector(s, np.array([0.0, 3.0 + i % 2, 1.0])), "B"))
        data.append((FeatureVector(s, np.array([0.0, 0.0, 4.0 + i % 2])), "C"))
    return data


def test_separable_fixture_reaches_perfect_macro_f1():
    report = cross_validate("nb", _separable_dataset(), k=4, seed=0)
    assert report.macro_f1 == 1.0
    assert report.accuracy == 1.0


def test_constant_prediction_recall_profile():
    # all vectors identical, label A in the majority: every prediction is A
    s = _schema(2)
    data = [(FeatureVector(s, np.array([1.0, 1.0])), "A") for _ in range(8)]
    data += [(FeatureVector(s, np.array([1.0, 1.0])), "B") for _ in range(4)]
    report = cross_validate("nb", data, k=4, seed=0)
    assert report.recall["A"] == 1.0
    assert report.recall["B"] == 0.0
    assert report.precision["B"] == 0.0


def test_metrics_match_hand_computed_confusion():
    confusion = np.array([[3, 1, 0],
                          [0, 4, 0],
                          [1, 1, 2]])
    precision, recall, f1, accuracy = metrics_from_confusion(
        confusion, ("A", "B", "C"))
    assert precision["A"] == pytest.approx(3 / 4)
    assert precision["B"] == pytest.approx(4 / 6)
    assert precision["C"] == pytest.approx(2 / 2)
    assert recall["A"] == pytest.approx(3 / 4)
    assert recall["B"] == pytest.approx(4 / 4)
    assert recall["C"] == pytest.approx(2 / 4)
    assert f1["A"] == pytest.approx(2 * (3 / 4) * (3 / 4) / (3 / 4 + 3 / 4))
    assert accuracy == pytest.approx(9 / 12)


def test_micro_f1_equals_accuracy_identity():
    report = cross_validate("nb", _separable_dataset(), k=3, seed=2)
    assert report.micro_f1 == report.accuracy
    # pooled confusion covers the whole dataset exactly once
    assert report.confusion.sum() == len(_separable_dataset())


def test_report_confusion_row_sums_are_supports():
    data = _separable_dataset()
    report = cross_validate("nb", data, k=4, seed=1)
    for i, label in enumerate(report.labels):
        support = sum(1 for _, l in data if l == label)
        assert report.confusion[i].sum() == support


def test_identical_seeds_identical_folds():
    labels = [("A", "B")[i % 2] for i in range(20)]
    assert stratified_kfold(labels, 5, 7) == stratified_kfold(labels, 5, 7)
    assert stratified_kfold(labels, 5, 7) != stratified_kfold(labels, 5, 8)


# --- t machinery -----------------------------------------------------------

def _t_pdf(x, df):
    log_pdf = (math.lgamma((df + 1) / 2) - math.lgamma(df / 2)
               - 0.5 * math.log(df * math.pi)
               - (df + 1) / 2 * math.log1p(x * x / df))
    return math.exp(log_pdf)


def _t_cdf_quadrature(t, df):
    value, _ = integrate.quad(_t_pdf, -np.inf, t, args=(df,))
    return value


def test_t_cdf_at_zero():
    assert t_cdf(0.0, 5) == 0.5


def test_t_cdf_tail_limit():
    assert t_cdf(50.0, 10) >= 1 - 1e-9


def test_t_cdf_against_quadrature_grid():
    for df in (1, 2, 5, 10, 30, 100, 1000):
        for t10 in range(-50, 55, 5):
            t = t10 / 10.0
            assert t_cdf(t, df) == pytest.approx(
                _t_cdf_quadrature(t, df), abs=1e-6), (t, df)


def test_t_cdf_1960_df1000():
    assert t_cdf(1.96, 1000) == pytest.approx(_t_cdf_quadrature(1.96, 1000),
                                              abs=1e-4)
    assert abs(t_cdf(1.96, 1000) - 0.9750) < 2e-4


def test_t_cdf_monotone_and_symmetric():
    for df in (1.0, 3.7, 42.0):
        prev = 0.0
        for t10 in range(-80, 81, 4):
            t = t10 / 10.0
            value = t_cdf(t, df)
            assert value >= prev
            prev = value
            assert abs(t_cdf(t, df) + t_cdf(-t, df) - 1.0) < 1e-12


def test_t_test_identical_samples():
    result = t_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert result.t_statistic == 0.0
    assert result.p_value == 1.0


def test_pooled_equals_welch_for_equal_n_equal_variance():
    a = [1.0, 2.0, 3.0]
    b = [4.0, 5.0, 6.0]
    pooled = t_test(a, b, variant="pooled")
    welch = t_test(a, b, variant="welch")
    assert pooled.t_statistic == welch.t_statistic
    assert pooled.degrees_of_freedom == welch.degrees_of_freedom


def test_t_test_123_456_against_quadrature():
    result = t_test([1.0, 2.0, 3.0], [4.0, 5.0, 6.0], variant="pooled")
    # hand algebra: means 2 and 5, both variances 1, pooled se = sqrt(2/3)
    want_t = -3.0 / math.sqrt(2.0 / 3.0)
    assert result.t_statistic == pytest.approx(want_t, abs=1e-12)
    assert result.degrees_of_freedom == 4
    want_p = 2.0 * _t_cdf_quadrature(-abs(want_t), 4)
    assert result.p_value == pytest.approx(want_p, abs=1e-6)


def test_t_test_antisymmetry():
    rng = np.random.default_rng(5)
    for variant in ("pooled", "welch"):
        for _ in range(50):
            a = rng.normal(size=rng.integers(2, 10)).tolist()
            b = rng.normal(loc=0.5, size=rng.integers(2, 10)).tolist()
            fwd = t_test(a, b, variant)
            rev = t_test(b, a, variant)
            assert fwd.t_statistic == pytest.approx(-rev.t_statistic, rel=1e-12)
            assert fwd.p_value == pytest.approx(rev.p_value, rel=1e-9)


def test_t_test_zero_variance_paths():
    with pytest.raises(DataError, match="zero variance"):
        t_test([2.0, 2.0], [2.0, 2.0])
    with pytest.warns(UserWarning, match="zero variance"):
        result = t_test([2.0, 2.0], [3.0, 3.0])
    assert result.p_value == 0.0
    assert result.t_statistic == -math.inf


def test_t_test_small_samples_rejected():
    with pytest.raises(DataError):
        t_test([1.0], [2.0, 3.0])


def test_report_formatting_layout():
    report = cross_validate("nb", _separable_dataset(), k=3, seed=0)
    text = eval_stats.format_report(report)
    lines = text.splitlines()
    header = next(l for l in lines if l.startswith("metric"))
    assert header.split("\t") == ["metric", "A", "B", "C", "Avg"]
    assert any(l.startswith("precision\t") for l in lines)
    assert any(l.startswith("confusion\t") for l in lines)
    assert f"# fold_hash={report.fold_hash}" in lines
