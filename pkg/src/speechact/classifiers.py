"""Four from-scratch supervised classifiers behind one train/predict contract.

* Multinomial Naive Bayes with Laplace smoothing over non-negative features.
* K-Nearest Neighbors on L2-normalized vectors with cosine-weighted votes.
* Random Forest: bootstrap samples, Gini splits over sqrt(d) candidate
  features per node, trees grown to purity, every random draw derived from
  (seed, tree index) so trees could be built in any order with identical
  results.
* Linear SVM, one-vs-rest, trained with the Pegasos stochastic subgradient
  schedule; all one-vs-rest subproblems share the same per-epoch shuffles, so
  relabeling a binary problem exactly mirrors the decision values.

All tie-breaks resolve toward the earlier label in the model's sorted label
order, making predictions deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import DataError, SchemaMismatchError
from .features import FeatureSchema, FeatureVector, align_to_schema

KINDS = ("nb", "knn", "rf", "svm")

HYPERPARAM_DEFAULTS: dict[str, float] = {
    "alpha": 1.0,     # nb Laplace smoothing
    "k": 5,           # knn neighbors
    "trees": 100,     # rf ensemble size
    "lambda": 1e-3,   # svm regularization
    "epochs": 50,     # svm passes
}


@dataclass(frozen=True)
class Prediction:
    label: str
    scores: dict[str, float]


@dataclass
class Model:
    kind: str
    labels: tuple[str, ...]
    schema: FeatureSchema
    params: dict[str, Any]
    resource_fingerprints: dict[str, str] = field(default_factory=dict)

    def to_payload(self) -> dict[str, Any]:
        p = self.params
        if self.kind == "nb":
            return {"alpha": p["alpha"],
                    "log_priors": p["log_priors"].tolist(),
                    "log_likelihoods": p["log_likelihoods"].tolist()}
        if self.kind == "knn":
            return {"k": p["k"],
                    "vectors": p["vectors"].tolist(),
                    "label_idx": p["label_idx"].tolist()}
        if self.kind == "rf":
            return {"n_trees": p["n_trees"], "seed": p["seed"],
                    "trees": p["trees"]}
        if self.kind == "svm":
            return {"lambda": p["lambda"], "epochs": p["epochs"],
                    "seed": p["seed"], "weights": p["weights"].tolist(),
                    "bias": p["bias"].tolist()}
        raise DataError(f"unknown model kind {self.kind}")


def model_from_archive(archive: Mapping[str, Any]) -> Model:
    kind = archive["model_kind"]
    if kind not in KINDS:
        raise DataError(f"unknown model kind {kind}")
    schema = FeatureSchema(names=tuple(archive["feature_schema"]["names"]),
                           kinds=tuple(archive["feature_schema"]["kinds"]))
    payload = archive["payload"]
    if kind == "nb":
        params = {"alpha": payload["alpha"],
                  "log_priors": np.array(payload["log_priors"], dtype=float),
                  "log_likelihoods": np.array(payload["log_likelihoods"], dtype=float)}
    elif kind == "knn":
        params = {"k": payload["k"],
                  "vectors": np.array(payload["vectors"], dtype=float),
                  "label_idx": np.array(payload["label_idx"], dtype=int)}
    elif kind == "rf":
        params = {"n_trees": payload["n_trees"], "seed": payload["seed"],
                  "trees": payload["trees"]}
    else:
        params = {"lambda": payload["lambda"], "epochs": payload["epochs"],
                  "seed": payload["seed"],
                  "weights": np.array(payload["weights"], dtype=float),
                  "bias": np.array(payload["bias"], dtype=float)}
    return Model(kind=kind, labels=tuple(archive["labels"]), schema=schema,
                 params=params,
                 resource_fingerprints=dict(archive.get("resource_fingerprints", {})))


def _as_matrix(dataset: Sequence[tuple[FeatureVector, str]]):
    if not dataset:
        raise DataError("cannot train on an empty dataset")
    schema = dataset[0][0].schema
    rows = []
    for vec, _ in dataset:
        rows.append(align_to_schema(vec, schema).values)
    X = np.vstack(rows).astype(float)
    labels = tuple(sorted({label for _, label in dataset}))
    if len(labels) < 2:
        raise DataError("training data must contain at least two labels")
    label_pos = {l: i for i, l in enumerate(labels)}
    y = np.array([label_pos[label] for _, label in dataset], dtype=int)
    return X, y, labels, schema


def train(kind: str, dataset: Sequence[tuple[FeatureVector, str]],
          hyperparams: Mapping[str, float] | None = None,
          seed: int = 0) -> Model:
    if kind not in KINDS:
        raise DataError(f"unknown classifier kind {kind}")
    hp = dict(HYPERPARAM_DEFAULTS)
    hp.update(hyperparams or {})
    X, y, labels, schema = _as_matrix(dataset)
    if kind == "nb":
        params = _train_nb(X, y, len(labels), float(hp["alpha"]))
    elif kind == "knn":
        params = _train_knn(X, y, int(hp["k"]))
    elif kind == "rf":
        params = _train_rf(X, y, labels, int(hp["trees"]), int(seed))
    else:
        params = _train_svm(X, y, len(labels), float(hp["lambda"]),
                            int(hp["epochs"]), int(seed))
    return Model(kind=kind, labels=labels, schema=schema, params=params)


def predict(model: Model, vector: FeatureVector) -> Prediction:
    x = align_to_schema(vector, model.schema).values
    if model.kind == "nb":
        return _predict_nb(model, x)
    if model.kind == "knn":
        return _predict_knn(model, x)
    if model.kind == "rf":
        return _predict_rf(model, x)
    if model.kind == "svm":
        return _predict_svm(model, x)
    raise DataError(f"unknown model kind {model.kind}")


# --- Naive Bayes ---------------------------------------------------------

def _train_nb(X, y, n_labels, alpha):
    if np.any(X < 0):
        raise DataError("multinomial NB requires non-negative features")
    n, d = X.shape
    class_counts = np.bincount(y, minlength=n_labels)
    log_priors = np.log(class_counts / n)
    log_lik = np.empty((n_labels, d))
    for c in range(n_labels):
        counts = X[y == c].sum(axis=0)
        log_lik[c] = np.log((alpha + counts) / (alpha * d + counts.sum()))
    return {"alpha": alpha, "log_priors": log_priors, "log_likelihoods": log_lik}


def _predict_nb(model, x):
    p = model.params
    log_post = p["log_priors"] + p["log_likelihoods"] @ x
    shifted = np.exp(log_post - log_post.max())
    probs = shifted / shifted.sum()
    best = int(np.argmax(probs))
    return Prediction(label=model.labels[best],
                      scores={l: float(probs[i]) for i, l in enumerate(model.labels)})


# --- K-Nearest Neighbors -------------------------------------------------

def _normalize_rows(X):
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    safe = np.where(norms == 0, 1.0, norms)
    return X / safe


def _train_knn(X, y, k):
    if k < 1:
        raise DataError("knn needs k >= 1")
    return {"k": k, "vectors": _normalize_rows(X), "label_idx": y}


def _predict_knn(model, x):
    p = model.params
    norm = np.linalg.norm(x)
    xn = x / norm if norm > 0 else x
    sims = p["vectors"] @ xn
    n = len(sims)
    k = min(int(p["k"]), n)
    order = np.argsort(-sims, kind="stable")[:k]
    n_labels = len(model.labels)
    votes = np.zeros(n_labels)
    dist_sum = np.full(n_labels, np.inf)
    for i in order:
        li = int(p["label_idx"][i])
        votes[li] += sims[i]
        if not np.isfinite(dist_sum[li]):
            dist_sum[li] = 0.0
        dist_sum[li] += 1.0 - sims[i]
    best = min(range(n_labels), key=lambda l: (-votes[l], dist_sum[l], l))
    return Prediction(label=model.labels[best],
                      scores={l: float(votes[i]) for i, l in enumerate(model.labels)})


# --- Random Forest -------------------------------------------------------

def _gini_best_split(X, y, idx, feats, n_labels):
    """Best (weighted_gini, feature, threshold) over candidate features, or
    None when every candidate is constant. Ties keep the lowest feature
    index, then the lowest threshold."""
    n = len(idx)
    best = None
    onehot = np.zeros((n, n_labels))
    onehot[np.arange(n), y[idx]] = 1.0
    for f in sorted(int(f) for f in feats):
        xs = X[idx, f]
        order = np.argsort(xs, kind="stable")
        xs_sorted = xs[order]
        boundaries = np.nonzero(xs_sorted[1:] != xs_sorted[:-1])[0]
        if boundaries.size == 0:
            continue
        prefix = np.cumsum(onehot[order], axis=0)
        nl = boundaries + 1
        nr = n - nl
        left = prefix[boundaries]
        right = prefix[-1] - left
        gini_l = 1.0 - ((left / nl[:, None]) ** 2).sum(axis=1)
        gini_r = 1.0 - ((right / nr[:, None]) ** 2).sum(axis=1)
        weighted = (nl * gini_l + nr * gini_r) / n
        j = int(np.argmin(weighted))
        if best is None or weighted[j] < best[0]:
            thr = float((xs_sorted[boundaries[j]] + xs_sorted[boundaries[j] + 1]) / 2.0)
            best = (float(weighted[j]), f, thr)
    return best


def _grow_tree(X, y, labels, rng):
    n, d = X.shape
    m = max(1, int(math.floor(math.sqrt(d))))
    boot = rng.integers(0, n, size=n)
    root: dict[str, Any] = {}
    stack = [(root, boot)]
    while stack:
        node, idx = stack.pop()
        counts = np.bincount(y[idx], minlength=len(labels))
        majority = int(np.argmax(counts))
        if counts[majority] == len(idx):
            node["leaf"] = labels[majority]
            continue
        feats = rng.choice(d, size=m, replace=False)
        best = _gini_best_split(X, y, idx, feats, len(labels))
        if best is None:
            node["leaf"] = labels[majority]
            continue
        _, f, thr = best
        mask = X[idx, f] < thr
        node["feature"] = f
        node["threshold"] = thr
        node["left"] = {}
        node["right"] = {}
        stack.append((node["right"], idx[~mask]))
        stack.append((node["left"], idx[mask]))
    return root


def _train_rf(X, y, labels, n_trees, seed):
    if n_trees < 1:
        raise DataError("random forest needs at least one tree")
    trees = []
    for t in range(n_trees):
        rng = np.random.default_rng([seed, t])
        trees.append(_grow_tree(X, y, list(labels), rng))
    return {"n_trees": n_trees, "seed": seed, "trees": trees}


def _tree_vote(tree, x):
    node = tree
    while "leaf" not in node:
        node = node["left"] if x[node["feature"]] < node["threshold"] else node["right"]
    return node["leaf"]


def rf_tree_votes(model: Model, vector: FeatureVector) -> list[str]:
    """Per-tree leaf labels, in tree order."""
    if model.kind != "rf":
        raise DataError("per-tree votes only exist for random forests")
    x = align_to_schema(vector, model.schema).values
    return [_tree_vote(tree, x) for tree in model.params["trees"]]


def _predict_rf(model, x):
    votes = {l: 0 for l in model.labels}
    for tree in model.params["trees"]:
        votes[_tree_vote(tree, x)] += 1
    n = model.params["n_trees"]
    shares = {l: votes[l] / n for l in model.labels}
    best = max(model.labels, key=lambda l: (shares[l], -model.labels.index(l)))
    return Prediction(label=best, scores=shares)


# --- Linear SVM (Pegasos, one-vs-rest) ------------------------------------

def _train_svm(X, y, n_labels, lam, epochs, seed):
    if lam <= 0:
        raise DataError("svm lambda must be positive")
    n, d = X.shape
    perms = [np.random.default_rng([seed, 7919, e]).permutation(n)
             for e in range(epochs)]
    W = np.zeros((n_labels, d))
    B = np.zeros(n_labels)
    for li in range(n_labels):
        target = np.where(y == li, 1.0, -1.0)
        w = np.zeros(d)
        b = 0.0
        t = 0
        for e in range(epochs):
            for i in perms[e]:
                t += 1
                eta = 1.0 / (lam * t)
                margin = target[i] * (w @ X[i] + b)
                w *= 1.0 - eta * lam
                if margin < 1.0:
                    w += eta * target[i] * X[i]
                    b += eta * target[i]
        if not np.all(np.isfinite(w)):
            raise DataError("svm training diverged to non-finite weights")
        W[li] = w
        B[li] = b
    return {"lambda": lam, "epochs": epochs, "seed": seed, "weights": W, "bias": B}


def _predict_svm(model, x):
    p = model.params
    decisions = p["weights"] @ x + p["bias"]
    best = int(np.argmax(decisions))
    return Prediction(label=model.labels[best],
                      scores={l: float(decisions[i])
                              for i, l in enumerate(model.labels)})
