"""Stratified cross-validation, per-class metrics, and two-sample t-tests.

The t CDF is computed from the regularized incomplete beta function
(continued-fraction evaluation), so p-values need no external tables.
Cross-validation pools one confusion matrix over all folds; per-fold models
never leak into each other.
"""

from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import classifiers
from .errors import DataError
from .features import FeatureVector


@dataclass(frozen=True)
class EvalReport:
    labels: tuple[str, ...]
    confusion: np.ndarray               # rows = true label, cols = predicted
    precision: Mapping[str, float]
    recall: Mapping[str, float]
    f1: Mapping[str, float]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    accuracy: float
    micro_f1: float
    folds: tuple[tuple[int, ...], ...]
    fold_hash: str
    config: Mapping[str, object]


@dataclass(frozen=True)
class TTestResult:
    t_statistic: float
    degrees_of_freedom: float
    p_value: float
    variant: str
    mean_a: float
    mean_b: float
    n_a: int
    n_b: int


def stratified_kfold(labels: Sequence[str], k: int, seed: int) -> tuple[tuple[int, ...], ...]:
    """Partition indices into k folds with per-class imbalance at most 1."""
    n = len(labels)
    if k < 2:
        raise DataError("k-fold needs k >= 2")
    if k > n:
        raise DataError(f"k={k} exceeds dataset size {n}")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    offset = 0
    for label in sorted(set(labels)):
        idxs = np.array([i for i, l in enumerate(labels) if l == label])
        rng.shuffle(idxs)
        # the start fold rotates between classes so overall fold sizes stay
        # balanced too (per-class imbalance <= 1 either way)
        for pos, i in enumerate(idxs):
            folds[(offset + pos) % k].append(int(i))
        offset = (offset + len(idxs)) % k
    return tuple(tuple(sorted(f)) for f in folds)


def fold_hash(folds: Sequence[Sequence[int]]) -> str:
    canon = ";".join(",".join(str(i) for i in fold) for fold in folds)
    return hashlib.sha256(canon.encode("ascii")).hexdigest()


def metrics_from_confusion(confusion: np.ndarray, labels: Sequence[str]):
    """Per-class precision/recall/F1 (0/0 -> 0) plus macro and micro values."""
    precision, recall, f1 = {}, {}, {}
    for i, label in enumerate(labels):
        tp = confusion[i, i]
        col = confusion[:, i].sum()
        row = confusion[i, :].sum()
        p = tp / col if col else 0.0
        r = tp / row if row else 0.0
        precision[label] = float(p)
        recall[label] = float(r)
        f1[label] = float(2 * p * r / (p + r)) if (p + r) else 0.0
    total = confusion.sum()
    accuracy = float(np.trace(confusion) / total) if total else 0.0
    return precision, recall, f1, accuracy


def cross_validate(kind: str,
                   dataset: Sequence[tuple[FeatureVector, str]],
                   k: int,
                   hyperparams: Mapping[str, float] | None = None,
                   seed: int = 0,
                   label_order: Sequence[str] | None = None) -> EvalReport:
    """Train on k-1 folds, test on the held-out fold, pool one confusion
    matrix, and derive metrics from it."""
    y = [label for _, label in dataset]
    folds = stratified_kfold(y, k, seed)
    labels = tuple(label_order) if label_order else tuple(sorted(set(y)))
    pos = {l: i for i, l in enumerate(labels)}
    confusion = np.zeros((len(labels), len(labels)), dtype=int)
    for held_out in folds:
        held = set(held_out)
        train_set = [dataset[i] for i in range(len(dataset)) if i not in held]
        model = classifiers.train(kind, train_set, hyperparams, seed=seed)
        for i in held_out:
            vec, true_label = dataset[i]
            pred = classifiers.predict(model, vec)
            confusion[pos[true_label], pos[pred.label]] += 1
    precision, recall, f1, accuracy = metrics_from_confusion(confusion, labels)
    return EvalReport(
        labels=labels, confusion=confusion,
        precision=precision, recall=recall, f1=f1,
        macro_precision=float(np.mean([precision[l] for l in labels])),
        macro_recall=float(np.mean([recall[l] for l in labels])),
        macro_f1=float(np.mean([f1[l] for l in labels])),
        accuracy=accuracy,
        micro_f1=accuracy,  # single-label multiclass: micro-F1 == accuracy
        folds=folds, fold_hash=fold_hash(folds),
        config={"kind": kind, "k": k, "seed": seed,
                "hyperparams": dict(hyperparams or {})})


# --- Student's t machinery -------------------------------------------------

def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (Lentz's method)."""
    max_iter = 300
    eps = 3e-16
    fpmin = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    return h


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_cdf(t: float, df: float) -> float:
    """CDF of Student's t distribution with ``df`` degrees of freedom."""
    if df <= 0:
        raise DataError("t distribution needs df > 0")
    if t == 0.0:
        return 0.5
    x = df / (df + t * t)
    tail = 0.5 * reg_inc_beta(df / 2.0, 0.5, x)
    return 1.0 - tail if t > 0 else tail


def t_test(sample_a: Sequence[float], sample_b: Sequence[float],
           variant: str = "welch") -> TTestResult:
    """Independent two-sample t-test, two-sided.

    ``pooled`` uses the classical pooled-variance form with n_a+n_b-2
    degrees of freedom; ``welch`` uses the Welch-Satterthwaite correction.
    Zero variance in both samples is degenerate: equal means raise, unequal
    means return p=0 with a warning.
    """
    if variant not in ("pooled", "welch"):
        raise DataError(f"unknown t-test variant {variant!r}")
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if len(a) < 2 or len(b) < 2:
        raise DataError("t-test needs at least two observations per group")
    na, nb = len(a), len(b)
    ma, mb = float(a.mean()), float(b.mean())
    va = float(a.var(ddof=1))
    vb = float(b.var(ddof=1))
    if va == 0.0 and vb == 0.0:
        if ma == mb:
            raise DataError("t statistic undefined: zero variance, equal means")
        warnings.warn("zero variance in both samples; p-value set to 0",
                      stacklevel=2)
        t_stat = math.inf if ma > mb else -math.inf
        df = float(na + nb - 2)
        return TTestResult(t_statistic=t_stat, degrees_of_freedom=df,
                           p_value=0.0, variant=variant, mean_a=ma, mean_b=mb,
                           n_a=na, n_b=nb)
    if variant == "pooled":
        sp2 = ((na - 1) * va + (nb - 1) * vb) / (na + nb - 2)
        se = math.sqrt(sp2 * (1.0 / na + 1.0 / nb))
        df = float(na + nb - 2)
    else:
        se = math.sqrt(va / na + vb / nb)
        df = ((va / na + vb / nb) ** 2
              / ((va / na) ** 2 / (na - 1) + (vb / nb) ** 2 / (nb - 1)))
    t_stat = (ma - mb) / se
    p = 2.0 * (1.0 - t_cdf(abs(t_stat), df))
    p = min(max(p, 0.0), 1.0)
    return TTestResult(t_statistic=t_stat, degrees_of_freedom=df, p_value=p,
                       variant=variant, mean_a=ma, mean_b=mb, n_a=na, n_b=nb)


# --- report formatting -----------------------------------------------------

def format_report(report: EvalReport) -> str:
    """Per-class columns plus Avg, then the pooled confusion matrix."""
    cols = list(report.labels) + ["Avg"]
    lines = ["# speech-act evaluation report"]
    for key, value in sorted(report.config.items()):
        lines.append(f"# {key}={value}")
    lines.append(f"# fold_hash={report.fold_hash}")
    lines.append("metric\t" + "\t".join(cols))
    for metric, per_class, avg in (
            ("precision", report.precision, report.macro_precision),
            ("recall", report.recall, report.macro_recall),
            ("f1", report.f1, report.macro_f1)):
        row = [f"{per_class[l]:.6f}" for l in report.labels] + [f"{avg:.6f}"]
        lines.append(metric + "\t" + "\t".join(row))
    lines.append(f"accuracy\t{report.accuracy:.6f}")
    lines.append(f"micro_f1\t{report.micro_f1:.6f}")
    lines.append("confusion\t" + "\t".join(report.labels))
    for i, label in enumerate(report.labels):
        row = "\t".join(str(int(v)) for v in report.confusion[i])
        lines.append(f"{label}\t{row}")
    return "\n".join(lines) + "\n"


def write_report(report: EvalReport, path: str | Path) -> None:
    Path(path).write_text(format_report(report), encoding="utf-8")
