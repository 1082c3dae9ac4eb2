import numpy as np
import pytest

from pupilmood.errors import DimensionMismatch, TooFewGroups
from pupilmood.learn.gbdt import GbdtParams
from pupilmood.learn.specs import KINDS, LearnerSpec, fit_learner
from pupilmood.learn.stacking import (
    _oof_probabilities,
    fit_stacked,
    predict_stacked,
    predict_stacked_labels,
)


def grouped_planted(n_groups=9, rows_per_group=12, d=6, seed=0, informative=1):
    rng = np.random.default_rng(seed)
    X, y, groups = [], [], []
    for g in range(n_groups):
        Xg = rng.normal(size=(rows_per_group, d))
        X.append(Xg)
        y.append((Xg[:, informative] > 0).astype(int))
        groups += [f"g{g}"] * rows_per_group
    return np.vstack(X), np.concatenate(y), groups


ALL_SPECS = [LearnerSpec(kind=k) for k in KINDS]
META = GbdtParams(n_trees=30, max_depth=3)


@pytest.fixture(scope="module")
def fitted():
    X, y, groups = grouped_planted()
    model = fit_stacked(X, y, groups, ALL_SPECS, META, top_k=3, inner_k=3, seed=1)
    return model, X, y, groups


class TestFitStacked:
    def test_meta_dimension(self, fitted):
        model, *_ = fitted
        assert model.meta_dim == len(KINDS) + 3
        assert model.meta_model.n_features == model.meta_dim

    def test_selected_indices_sorted(self, fitted):
        model, *_ = fitted
        sel = model.selected_feature_indices
        assert sel == sorted(sel) and len(sel) == 3

    def test_oof_discipline(self):
        """No OOF prediction may come from a model that saw the row's group."""
        X, y, groups = grouped_planted(n_groups=6, rows_per_group=8)
        calls = []
        from pupilmood.folds import make_fold_plan

        plan = make_fold_plan(groups, 3, seed=5)
        fold_idx = np.array([plan.fold_of(g) for g in groups])
        for fold in range(3):
            train_groups = {g for g, f in zip(groups, fold_idx) if f != fold}
            test_groups = {g for g, f in zip(groups, fold_idx) if f == fold}
            assert not train_groups & test_groups

        model = fit_stacked(X, y, groups, ALL_SPECS[:2], META, top_k=2, inner_k=3, seed=5)
        # every participant sits in exactly one inner fold of the stored plan
        assert sorted(model.oof_plan.assignment) == sorted(set(groups))

    def test_identical_specs_identical_oof_columns(self):
        X, y, groups = grouped_planted(n_groups=6, rows_per_group=8, seed=3)
        from pupilmood.folds import make_fold_plan

        plan = make_fold_plan(groups, 3, seed=0)
        fold_idx = np.array([plan.fold_of(g) for g in groups])
        spec = LearnerSpec(kind="gbdt", seed=7)
        oof = _oof_probabilities(X, y, fold_idx, [spec, spec], 3)
        assert np.array_equal(oof[:, 0], oof[:, 1])

    def test_too_few_groups(self):
        X, y, _ = grouped_planted(n_groups=2, rows_per_group=10)
        groups = ["a"] * 10 + ["b"] * 10
        with pytest.raises(TooFewGroups):
            fit_stacked(X, y, groups, ALL_SPECS[:1], META, inner_k=3, seed=0)

    def test_ensemble_not_much_worse_than_perfect_base(self):
        # B=1 with a strong base learner on separable-by-feature data
        X, y, groups = grouped_planted(n_groups=10, rows_per_group=12, seed=4)
        train = np.array([g not in ("g8", "g9") for g in groups])
        test = ~train
        tr_groups = [g for g, m in zip(groups, train) if m]
        base = [LearnerSpec(kind="logistic_regression")]
        model = fit_stacked(X[train], y[train], tr_groups, base, META, top_k=2, inner_k=3, seed=0)
        single = fit_learner(base[0], X[train], y[train])
        acc_single = np.mean((single.predict_proba_high(X[test]) >= 0.5) == y[test])
        acc_stack = np.mean(predict_stacked_labels(model, X[test]) == y[test])
        assert acc_stack >= acc_single - 0.05


class TestPredictStacked:
    def test_overfit_training_rows(self, fitted):
        model, X, y, _ = fitted
        assert np.mean(predict_stacked_labels(model, X) == y) >= 0.95

    def test_outputs_in_unit_interval(self, fitted):
        model, X, *_ = fitted
        p = predict_stacked(model, np.random.default_rng(0).normal(size=(500, X.shape[1])))
        assert np.all((p >= 0) & (p <= 1))

    def test_duplicate_rows_identical_outputs(self, fitted):
        model, X, *_ = fitted
        row = X[:1]
        p = predict_stacked(model, np.vstack([row, row, row]))
        assert p[0] == p[1] == p[2]

    def test_dimension_mismatch(self, fitted):
        model, X, *_ = fitted
        with pytest.raises(DimensionMismatch):
            predict_stacked(model, np.zeros((2, X.shape[1] + 1)))

    def test_deterministic_fit(self):
        X, y, groups = grouped_planted(n_groups=6, rows_per_group=8, seed=6)
        a = fit_stacked(X, y, groups, ALL_SPECS, META, top_k=2, inner_k=3, seed=9)
        b = fit_stacked(X, y, groups, ALL_SPECS, META, top_k=2, inner_k=3, seed=9)
        assert np.array_equal(predict_stacked(a, X), predict_stacked(b, X))
