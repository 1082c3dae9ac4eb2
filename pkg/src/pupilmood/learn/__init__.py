"""Model zoo: base learners, boosted trees, feature selection, stacking."""

from .backend import BACKEND
from .gbdt import GbdtModel, GbdtParams, fit_gbdt, select_features
from .specs import DEFAULT_GRIDS, KINDS, LearnerSpec, fit_learner
from .stacking import StackedEnsemble, fit_stacked, predict_stacked

__all__ = [
    "BACKEND",
    "GbdtModel",
    "GbdtParams",
    "fit_gbdt",
    "select_features",
    "DEFAULT_GRIDS",
    "KINDS",
    "LearnerSpec",
    "fit_learner",
    "StackedEnsemble",
    "fit_stacked",
    "predict_stacked",
]
