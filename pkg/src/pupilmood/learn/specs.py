"""Base-learner zoo: seven pluggable probability producers.

Six learners wrap scikit-learn estimators behind one fit/predict_proba
surface; the seventh is the in-package boosted-tree model. Each spec's seed
fully determines any stochastic behavior. Learners whose training fold
contains a single class degrade to a constant-prior model instead of
failing, so inner-fold stacking never aborts on unlucky splits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np
from sklearn.ensemble import RandomForestClassifier
from sklearn.linear_model import LogisticRegression, SGDClassifier
from sklearn.naive_bayes import GaussianNB
from sklearn.neighbors import KNeighborsClassifier
from sklearn.preprocessing import StandardScaler
from sklearn.tree import DecisionTreeClassifier

from ..errors import DimensionMismatch, LearnError
from .gbdt import GbdtParams, fit_gbdt

KINDS = (
    "logistic_regression",
    "decision_tree",
    "random_forest",
    "knn",
    "gaussian_nb",
    "linear_svm_sgd",
    "gbdt",
)

# documented hyperparameter sets per kind (keys allowed in LearnerSpec)
ALLOWED_KEYS = {
    "logistic_regression": {"C"},
    "decision_tree": {"max_depth", "min_samples_leaf"},
    "random_forest": {"n_estimators", "max_depth"},
    "knn": {"n_neighbors"},
    "gaussian_nb": {"var_smoothing"},
    "linear_svm_sgd": {"alpha"},
    "gbdt": {"n_trees", "learning_rate", "max_depth", "min_samples_leaf", "l2_lambda", "gain_gamma"},
}

# small search grids (values enumerated in lexicographic candidate order)
DEFAULT_GRIDS = {
    "logistic_regression": {"C": [0.1, 1.0, 10.0]},
    "decision_tree": {"max_depth": [2, 4, 8], "min_samples_leaf": [1, 5]},
    "random_forest": {"n_estimators": [50], "max_depth": [4, 8]},
    "knn": {"n_neighbors": [3, 5, 11]},
    "gaussian_nb": {"var_smoothing": [1e-9, 1e-6]},
    "linear_svm_sgd": {"alpha": [1e-4, 1e-3, 1e-2]},
    "gbdt": {"n_trees": [50], "learning_rate": [0.1, 0.3], "max_depth": [2, 3]},
}

DEFAULT_HYPERPARAMS = {
    "logistic_regression": {"C": 1.0},
    "decision_tree": {"max_depth": 4, "min_samples_leaf": 5},
    "random_forest": {"n_estimators": 50, "max_depth": 8},
    "knn": {"n_neighbors": 5},
    "gaussian_nb": {"var_smoothing": 1e-9},
    "linear_svm_sgd": {"alpha": 1e-3},
    "gbdt": {"n_trees": 50, "learning_rate": 0.1, "max_depth": 3},
}

_SCALED_KINDS = {"logistic_regression", "knn", "linear_svm_sgd"}


@dataclass(frozen=True)
class LearnerSpec:
    kind: str
    hyperparams: Mapping[str, float] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise LearnError(f"unknown learner kind {self.kind!r}")
        unknown = set(self.hyperparams) - ALLOWED_KEYS[self.kind]
        if unknown:
            raise LearnError(f"{self.kind}: unknown hyperparameters {sorted(unknown)}")
        object.__setattr__(self, "hyperparams", dict(self.hyperparams))

    def resolved(self) -> dict:
        merged = dict(DEFAULT_HYPERPARAMS[self.kind])
        merged.update(self.hyperparams)
        return merged

    def with_hyperparams(self, hp: Mapping[str, float]) -> "LearnerSpec":
        return LearnerSpec(self.kind, dict(hp), self.seed)


class ConstantModel:
    """Predicts a fixed probability; stands in when a fold has one class."""

    def __init__(self, prior: float, n_features: int):
        self.prior = float(prior)
        self.n_features = n_features

    def predict_proba_high(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(self.n_features, X.shape[1])
        return np.full(X.shape[0], self.prior)


class FittedLearner:
    """One fitted base learner: spec + estimator (+ optional scaler)."""

    def __init__(self, spec: LearnerSpec, estimator, scaler=None, n_features: int = 0):
        self.spec = spec
        self.estimator = estimator
        self.scaler = scaler
        self.n_features = n_features

    def predict_proba_high(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DimensionMismatch(self.n_features, X.shape[1] if X.ndim == 2 else -1)
        if isinstance(self.estimator, ConstantModel):
            return self.estimator.predict_proba_high(X)
        if self.spec.kind == "gbdt":
            return self.estimator.predict_proba(X)
        Xt = self.scaler.transform(X) if self.scaler is not None else X
        proba = self.estimator.predict_proba(Xt)
        high_col = list(self.estimator.classes_).index(1)
        return proba[:, high_col]


def _make_estimator(spec: LearnerSpec):
    hp = spec.resolved()
    kind = spec.kind
    if kind == "logistic_regression":
        return LogisticRegression(C=hp["C"], max_iter=2000, solver="lbfgs")
    if kind == "decision_tree":
        return DecisionTreeClassifier(
            max_depth=hp["max_depth"], min_samples_leaf=hp["min_samples_leaf"], random_state=spec.seed
        )
    if kind == "random_forest":
        return RandomForestClassifier(
            n_estimators=int(hp["n_estimators"]), max_depth=hp["max_depth"], random_state=spec.seed
        )
    if kind == "knn":
        return KNeighborsClassifier(n_neighbors=int(hp["n_neighbors"]))
    if kind == "gaussian_nb":
        return GaussianNB(var_smoothing=hp["var_smoothing"])
    if kind == "linear_svm_sgd":
        # modified_huber keeps a linear margin loss while exposing probabilities
        return SGDClassifier(
            loss="modified_huber", alpha=hp["alpha"], random_state=spec.seed, max_iter=2000, tol=1e-4
        )
    raise LearnError(f"unhandled kind {kind}")


def gbdt_params_from(hp: Mapping[str, float]) -> GbdtParams:
    merged = dict(DEFAULT_HYPERPARAMS["gbdt"])
    merged.update(hp)
    return GbdtParams(
        n_trees=int(merged.get("n_trees", 100)),
        learning_rate=float(merged.get("learning_rate", 0.1)),
        max_depth=int(merged.get("max_depth", 3)),
        min_samples_leaf=int(merged.get("min_samples_leaf", 1)),
        l2_lambda=float(merged.get("l2_lambda", 1.0)),
        gain_gamma=float(merged.get("gain_gamma", 0.0)),
    )


def fit_learner(spec: LearnerSpec, X, y) -> FittedLearner:
    """Fit one base learner; single-class folds yield a constant model."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.shape[0] == 0:
        raise LearnError("cannot fit on an empty training set")
    classes = np.unique(y)
    if classes.size < 2:
        return FittedLearner(spec, ConstantModel(float(np.mean(y)), X.shape[1]), None, X.shape[1])
    if spec.kind == "gbdt":
        model = fit_gbdt(X, y, gbdt_params_from(spec.resolved()))
        return FittedLearner(spec, model, None, X.shape[1])
    scaler = None
    Xt = X
    if spec.kind in _SCALED_KINDS:
        scaler = StandardScaler()
        Xt = scaler.fit_transform(X)
    est = _make_estimator(spec)
    est.fit(Xt, y)
    return FittedLearner(spec, est, scaler, X.shape[1])


def grid_candidates(kind: str, grid: Optional[Mapping[str, list]] = None) -> list[dict]:
    """Enumerate a grid in lexicographic (key-sorted, value-order) order."""
    grid = dict(DEFAULT_GRIDS[kind]) if grid is None else dict(grid)
    keys = sorted(grid)
    combos = [{}]
    for key in keys:
        combos = [dict(c, **{key: v}) for c in combos for v in grid[key]]
    return combos
