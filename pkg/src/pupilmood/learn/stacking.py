"""Stacking ensemble: out-of-fold base-learner probabilities plus selected
raw features feed a boosted-tree meta learner.

Out-of-fold discipline: the probability recorded for a training row always
comes from a base model that never saw any row of that row's participant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import DimensionMismatch, TooFewGroups
from ..folds import FoldPlan, make_fold_plan
from .gbdt import GbdtModel, GbdtParams, fit_gbdt
from .specs import FittedLearner, LearnerSpec, fit_learner

HARD_LABEL_THRESHOLD = 0.5


@dataclass
class StackedEnsemble:
    base_models: list[FittedLearner]
    selected_feature_indices: list[int]
    meta_model: GbdtModel
    oof_plan: FoldPlan
    n_features: int
    base_specs: list[LearnerSpec]
    meta_params: GbdtParams
    seed: int

    @property
    def meta_dim(self) -> int:
        return len(self.base_models) + len(self.selected_feature_indices)


def _oof_probabilities(
    X: np.ndarray,
    y: np.ndarray,
    fold_idx: np.ndarray,
    specs: Sequence[LearnerSpec],
    k: int,
) -> np.ndarray:
    oof = np.zeros((X.shape[0], len(specs)))
    for fold in range(k):
        test_mask = fold_idx == fold
        train_mask = ~test_mask
        if not test_mask.any():
            continue
        for b, spec in enumerate(specs):
            model = fit_learner(spec, X[train_mask], y[train_mask])
            oof[test_mask, b] = model.predict_proba_high(X[test_mask])
    return oof


def fit_stacked(
    X,
    y,
    groups: Sequence[str],
    base_specs: Sequence[LearnerSpec],
    meta_params: GbdtParams,
    top_k: int = 10,
    inner_k: int = 3,
    seed: int = 0,
) -> StackedEnsemble:
    """Fit the full stacking ensemble on one training set.

    Base learners are refit on all rows for inference after their
    out-of-fold columns are collected.
    """
    from .gbdt import select_features  # local to keep module surface tidy

    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    groups = list(groups)
    if inner_k < 2:
        raise TooFewGroups(len(set(groups)), max(inner_k, 2))
    plan = make_fold_plan(groups, inner_k, seed)
    fold_idx = np.array([plan.fold_of(g) for g in groups])

    oof = _oof_probabilities(X, y, fold_idx, base_specs, inner_k)
    selected = select_features(X, y, meta_params, top_k)
    meta_X = np.hstack([oof, X[:, selected]])
    meta_model = fit_gbdt(meta_X, y, meta_params)
    base_models = [fit_learner(spec, X, y) for spec in base_specs]
    return StackedEnsemble(
        base_models=base_models,
        selected_feature_indices=list(selected),
        meta_model=meta_model,
        oof_plan=plan,
        n_features=X.shape[1],
        base_specs=list(base_specs),
        meta_params=meta_params,
        seed=seed,
    )


def predict_stacked(model: StackedEnsemble, X) -> np.ndarray:
    """Probability of class `high` for each row."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise DimensionMismatch(model.n_features, X.shape[1] if X.ndim == 2 else -1)
    cols = [m.predict_proba_high(X) for m in model.base_models]
    meta_X = np.column_stack(cols + [X[:, model.selected_feature_indices]])
    return model.meta_model.predict_proba(meta_X)


def predict_stacked_labels(model: StackedEnsemble, X) -> np.ndarray:
    return (predict_stacked(model, X) >= HARD_LABEL_THRESHOLD).astype(np.int64)
