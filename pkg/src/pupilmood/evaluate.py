"""Grouped cross-validation harness with nested hyperparameter search.

The outer loop is k-fold leave-subject-out CV by participant; each outer
fold picks hyperparameters by grouped inner CV over the outer-training
participants (maximizing inner pooled MCC, ties broken by higher BA, then
by lexicographically earlier grid candidate), refits, and predicts the
held-out participants. Pooled and per-fold BA/MCC are both reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Protocol, Sequence

import numpy as np

from .errors import SingleClassDataset, TooFewGroups
from .features import DayFeatureRow
from .folds import FoldPlan, make_fold_plan
from .learn.gbdt import GbdtParams
from .learn.specs import LearnerSpec, fit_learner, grid_candidates
from .learn.stacking import fit_stacked, predict_stacked
from .metrics import ConfusionMatrix, balanced_accuracy, confusion, mcc

SCHEMA_VERSION = "eval-report-v1"
HARD_LABEL_THRESHOLD = 0.5

VALENCE, AROUSAL = "valence", "arousal"


def training_arrays(rows: Sequence[DayFeatureRow], target: str):
    """Stack labeled rows into (X, y, groups) for one target."""
    if target not in (VALENCE, AROUSAL):
        raise ValueError(f"unknown target {target!r}")
    labeled = [r for r in rows if r.labeled]
    X = np.array([r.features for r in labeled], dtype=np.float64)
    y = np.array(
        [r.valence_label if target == VALENCE else r.arousal_label for r in labeled],
        dtype=np.int64,
    )
    groups = [r.key.participant_id for r in labeled]
    return X, y, groups


class ModelFamily(Protocol):
    """One tunable model: a named grid plus fit/predict against one candidate."""

    name: str

    def candidates(self) -> list[dict]: ...

    def fit(self, X, y, groups, hyperparams: dict): ...

    def predict_proba(self, model, X) -> np.ndarray: ...


@dataclass
class BaselineFamily:
    """A single base learner tuned over its documented grid."""

    spec: LearnerSpec
    grid: Optional[dict] = None

    @property
    def name(self) -> str:
        return self.spec.kind

    def candidates(self) -> list[dict]:
        return grid_candidates(self.spec.kind, self.grid)

    def fit(self, X, y, groups, hyperparams):
        return fit_learner(self.spec.with_hyperparams(hyperparams), X, y)

    def predict_proba(self, model, X):
        return model.predict_proba_high(X)


@dataclass
class EnsembleFamily:
    """The stacking ensemble; the search grid tunes the meta learner."""

    base_specs: Sequence[LearnerSpec]
    meta_grid: Sequence[dict] = field(default_factory=lambda: [{}])
    top_k: int = 10
    inner_k: int = 3
    seed: int = 0
    name: str = "stacked_ensemble"

    def candidates(self) -> list[dict]:
        return [dict(c) for c in self.meta_grid]

    def fit(self, X, y, groups, hyperparams):
        from .learn.specs import gbdt_params_from

        return fit_stacked(
            X,
            y,
            groups,
            base_specs=list(self.base_specs),
            meta_params=gbdt_params_from(hyperparams),
            top_k=self.top_k,
            inner_k=self.inner_k,
            seed=self.seed,
        )

    def predict_proba(self, model, X):
        return predict_stacked(model, X)


@dataclass
class FoldResult:
    fold: int
    ba: float
    mcc: float
    cm: ConfusionMatrix
    chosen_hyperparams: dict


@dataclass
class EvalReport:
    model: str
    target: str
    pooled_ba: float
    pooled_mcc: float
    pooled_cm: ConfusionMatrix
    per_fold: list[FoldResult]
    fold_plan: FoldPlan
    seed: int
    schema_version: str = SCHEMA_VERSION
    provenance: dict = field(default_factory=dict)

    def fold_mean_std(self) -> tuple[float, float, float, float]:
        bas = [f.ba for f in self.per_fold]
        mccs = [f.mcc for f in self.per_fold]
        return (
            float(np.mean(bas)),
            float(np.std(bas)),
            float(np.mean(mccs)),
            float(np.std(mccs)),
        )

    def csv_rows(self) -> list[str]:
        rows = []
        for f in self.per_fold:
            rows.append(
                f"{self.model},{self.target},{f.fold},{f.ba:.6f},{f.mcc:.6f},"
                f"{f.cm.tp},{f.cm.fp},{f.cm.tn},{f.cm.fn}"
            )
        cm = self.pooled_cm
        rows.append(
            f"{self.model},{self.target},pooled,{self.pooled_ba:.6f},{self.pooled_mcc:.6f},"
            f"{cm.tp},{cm.fp},{cm.tn},{cm.fn}"
        )
        return rows


EVAL_CSV_HEADER = "model,target,fold,ba,mcc,tp,fp,tn,fn"


def _pick_hyperparams(
    family: ModelFamily,
    X,
    y,
    groups: list[str],
    inner_k: int,
    seed: int,
) -> dict:
    candidates = family.candidates()
    if len(candidates) == 1:
        return candidates[0]
    plan = make_fold_plan(groups, inner_k, seed)
    fold_idx = np.array([plan.fold_of(g) for g in groups])
    best = None  # (mcc, ba, -index) maximized
    for ci, hp in enumerate(candidates):
        preds = np.zeros(len(y), dtype=np.int64)
        for fold in range(inner_k):
            test_mask = fold_idx == fold
            train_mask = ~test_mask
            tr_groups = [g for g, m in zip(groups, train_mask) if m]
            assert not (set(tr_groups) & {g for g, m in zip(groups, test_mask) if m})
            model = family.fit(X[train_mask], y[train_mask], tr_groups, hp)
            proba = family.predict_proba(model, X[test_mask])
            preds[test_mask] = (proba >= HARD_LABEL_THRESHOLD).astype(np.int64)
        cm = confusion(y, preds)
        key = (mcc(cm), balanced_accuracy(cm), -ci)
        if best is None or key > best[0]:
            best = (key, hp)
    return best[1]


def run_model(
    rows: Sequence[DayFeatureRow],
    target: str,
    family: ModelFamily,
    k: int = 5,
    inner_k: int = 3,
    seed: int = 0,
    fold_plan: Optional[FoldPlan] = None,
) -> EvalReport:
    """Nested leave-subject-out evaluation of one model family."""
    X, y, groups = training_arrays(rows, target)
    if X.shape[0] == 0 or np.unique(y).size < 2:
        raise SingleClassDataset(f"target {target}: need labeled rows of both classes")
    unique_groups = sorted(set(groups))
    if len(unique_groups) < k:
        raise TooFewGroups(len(unique_groups), k)
    plan = fold_plan if fold_plan is not None else make_fold_plan(unique_groups, k, seed)
    fold_idx = np.array([plan.fold_of(g) for g in groups])

    per_fold: list[FoldResult] = []
    pooled_true: list[np.ndarray] = []
    pooled_pred: list[np.ndarray] = []
    for fold in range(plan.k):
        test_mask = fold_idx == fold
        train_mask = ~test_mask
        tr_groups = [g for g, m in zip(groups, train_mask) if m]
        te_groups = {g for g, m in zip(groups, test_mask) if m}
        if set(tr_groups) & te_groups:
            raise AssertionError("participant leak across outer split")
        chosen = _pick_hyperparams(family, X[train_mask], y[train_mask], tr_groups, inner_k, seed)
        model = family.fit(X[train_mask], y[train_mask], tr_groups, chosen)
        proba = family.predict_proba(model, X[test_mask])
        pred = (proba >= HARD_LABEL_THRESHOLD).astype(np.int64)
        cm = confusion(y[test_mask], pred)
        per_fold.append(
            FoldResult(fold=fold, ba=balanced_accuracy(cm), mcc=mcc(cm), cm=cm, chosen_hyperparams=chosen)
        )
        pooled_true.append(y[test_mask])
        pooled_pred.append(pred)

    pooled_cm = confusion(np.concatenate(pooled_true), np.concatenate(pooled_pred))
    assert pooled_cm == sum((f.cm for f in per_fold), ConfusionMatrix())
    return EvalReport(
        model=family.name,
        target=target,
        pooled_ba=balanced_accuracy(pooled_cm),
        pooled_mcc=mcc(pooled_cm),
        pooled_cm=pooled_cm,
        per_fold=per_fold,
        fold_plan=plan,
        seed=seed,
        provenance={"k": k, "inner_k": inner_k, "n_rows": int(X.shape[0])},
    )


def run_benchmark(
    rows: Sequence[DayFeatureRow],
    target: str,
    model_config: EnsembleFamily,
    k: int = 5,
    inner_k: int = 3,
    seed: int = 0,
    fold_plan: Optional[FoldPlan] = None,
) -> EvalReport:
    """Evaluate the stacking ensemble under nested leave-subject-out CV."""
    return run_model(rows, target, model_config, k, inner_k, seed, fold_plan)


def run_baseline_suite(
    rows: Sequence[DayFeatureRow],
    target: str,
    baseline_specs: Sequence[LearnerSpec],
    k: int = 5,
    inner_k: int = 3,
    seed: int = 0,
    fold_plan: Optional[FoldPlan] = None,
) -> list[EvalReport]:
    """Evaluate each single learner under one shared fold plan."""
    if not baseline_specs:
        return []
    X, y, groups = training_arrays(rows, target)
    unique_groups = sorted(set(groups))
    plan = fold_plan if fold_plan is not None else make_fold_plan(unique_groups, k, seed)
    return [
        run_model(rows, target, BaselineFamily(spec), k, inner_k, seed, fold_plan=plan)
        for spec in baseline_specs
    ]


def render_table(reports_by_target: dict[str, list[EvalReport]]) -> str:
    """Results table: one row per model, BA/MCC per target."""
    targets = [t for t in (VALENCE, AROUSAL) if t in reports_by_target]
    models: list[str] = []
    for t in targets:
        for rep in reports_by_target[t]:
            if rep.model not in models:
                models.append(rep.model)
    header = f"{'Model':<24}" + "".join(f"{t + ' BA':>12}{t + ' MCC':>13}" for t in targets)
    lines = [header, "-" * len(header)]
    for model in models:
        cells = [f"{model:<24}"]
        for t in targets:
            rep = next((r for r in reports_by_target[t] if r.model == model), None)
            if rep is None:
                cells.append(f"{'-':>12}{'-':>13}")
            else:
                cells.append(f"{rep.pooled_ba:>12.3f}{rep.pooled_mcc:>13.3f}")
        lines.append("".join(cells))
    return "\n".join(lines)
