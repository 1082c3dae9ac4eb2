"""Text serialization of a fitted StackedEnsemble.

One versioned JSON document holds the base-learner specs, their fitted
parameters (tree structures included), the selected feature indices, the
meta model, and all seeds. Loading reconstructs estimators whose
predictions are bit-identical to the originals.
"""

from __future__ import annotations

import json

import numpy as np
from sklearn.ensemble import RandomForestClassifier
from sklearn.linear_model import LogisticRegression, SGDClassifier
from sklearn.naive_bayes import GaussianNB
from sklearn.neighbors import KNeighborsClassifier
from sklearn.preprocessing import StandardScaler
from sklearn.tree import DecisionTreeClassifier
from sklearn.tree._tree import Tree as SkTree

from ..errors import LearnError
from ..folds import FoldPlan
from .gbdt import GbdtModel, GbdtParams, Tree
from .specs import ConstantModel, FittedLearner, LearnerSpec, _make_estimator
from .stacking import StackedEnsemble

FORMAT_VERSION = "pupilmood-model-v1"


def _arr(a) -> list:
    return np.asarray(a).tolist()


# -- gbdt ---------------------------------------------------------------------

def _dump_gbdt(model: GbdtModel) -> dict:
    return {
        "params": model.params.as_dict(),
        "n_features": model.n_features,
        "prior": model.prior,
        "base_score": model.base_score,
        "feature_gains": _arr(model.feature_gains),
        "trees": [
            {
                "feature": _arr(t.feature),
                "threshold": _arr(t.threshold),
                "left": _arr(t.left),
                "right": _arr(t.right),
                "value": _arr(t.value),
            }
            for t in model.trees
        ],
    }


def _load_gbdt(doc: dict) -> GbdtModel:
    model = GbdtModel(
        params=GbdtParams(**doc["params"]),
        n_features=doc["n_features"],
        prior=doc["prior"],
        base_score=doc["base_score"],
        feature_gains=np.asarray(doc["feature_gains"]),
    )
    for t in doc["trees"]:
        model.trees.append(
            Tree(
                feature=np.asarray(t["feature"], dtype=np.int64),
                threshold=np.asarray(t["threshold"], dtype=np.float64),
                left=np.asarray(t["left"], dtype=np.int64),
                right=np.asarray(t["right"], dtype=np.int64),
                value=np.asarray(t["value"], dtype=np.float64),
            )
        )
    return model


# -- sklearn pieces -----------------------------------------------------------

def _node_dtype():
    ref = DecisionTreeClassifier(max_depth=1).fit([[0.0], [1.0]], [0, 1])
    return ref.tree_.__getstate__()["nodes"].dtype


def _dump_sk_tree(est: DecisionTreeClassifier) -> dict:
    state = est.tree_.__getstate__()
    nodes = state["nodes"]
    return {
        "max_depth": int(state["max_depth"]),
        "node_count": int(state["node_count"]),
        "nodes": {name: _arr(nodes[name]) for name in nodes.dtype.names},
        "values": _arr(state["values"]),
        "n_features": int(est.n_features_in_),
        "classes": _arr(est.classes_),
    }


def _load_sk_tree(doc: dict, params: dict | None = None) -> DecisionTreeClassifier:
    dtype = _node_dtype()
    n = doc["node_count"]
    nodes = np.zeros(n, dtype=dtype)
    for name in dtype.names:
        nodes[name] = np.asarray(doc["nodes"][name])
    classes = np.asarray(doc["classes"])
    tree = SkTree(doc["n_features"], np.array([classes.size], dtype=np.intp), 1)
    tree.__setstate__(
        {
            "max_depth": doc["max_depth"],
            "node_count": n,
            "nodes": nodes,
            "values": np.asarray(doc["values"]),
        }
    )
    est = DecisionTreeClassifier(**(params or {}))
    est.tree_ = tree
    est.classes_ = classes
    est.n_classes_ = classes.size
    est.n_outputs_ = 1
    est.n_features_in_ = doc["n_features"]
    return est


def _dump_scaler(scaler: StandardScaler | None) -> dict | None:
    if scaler is None:
        return None
    return {"mean": _arr(scaler.mean_), "scale": _arr(scaler.scale_)}


def _load_scaler(doc: dict | None) -> StandardScaler | None:
    if doc is None:
        return None
    scaler = StandardScaler()
    scaler.mean_ = np.asarray(doc["mean"])
    scaler.scale_ = np.asarray(doc["scale"])
    scaler.var_ = scaler.scale_**2
    scaler.n_features_in_ = scaler.mean_.size
    scaler.with_mean = scaler.with_std = True
    return scaler


def _dump_learner(fitted: FittedLearner) -> dict:
    spec = fitted.spec
    doc = {
        "spec": {"kind": spec.kind, "hyperparams": dict(spec.hyperparams), "seed": spec.seed},
        "n_features": fitted.n_features,
        "scaler": _dump_scaler(fitted.scaler),
    }
    est = fitted.estimator
    if isinstance(est, ConstantModel):
        doc["model"] = {"type": "constant", "prior": est.prior}
    elif spec.kind == "gbdt":
        doc["model"] = {"type": "gbdt", **_dump_gbdt(est)}
    elif isinstance(est, (LogisticRegression, SGDClassifier)):
        doc["model"] = {
            "type": "linear",
            "coef": _arr(est.coef_),
            "intercept": _arr(est.intercept_),
            "classes": _arr(est.classes_),
        }
    elif isinstance(est, GaussianNB):
        doc["model"] = {
            "type": "gaussian_nb",
            "theta": _arr(est.theta_),
            "var": _arr(est.var_),
            "class_prior": _arr(est.class_prior_),
            "class_count": _arr(est.class_count_),
            "classes": _arr(est.classes_),
            "epsilon": float(est.epsilon_),
        }
    elif isinstance(est, KNeighborsClassifier):
        # memory-based model: the training set is the fitted state
        doc["model"] = {
            "type": "knn",
            "X": _arr(est._fit_X),
            "y": _arr(est._y),
            "classes": _arr(est.classes_),
        }
    elif isinstance(est, DecisionTreeClassifier):
        doc["model"] = {"type": "decision_tree", "tree": _dump_sk_tree(est)}
    elif isinstance(est, RandomForestClassifier):
        doc["model"] = {
            "type": "random_forest",
            "trees": [_dump_sk_tree(t) for t in est.estimators_],
            "classes": _arr(est.classes_),
        }
    else:
        raise LearnError(f"cannot serialize estimator {type(est).__name__}")
    return doc


def _load_learner(doc: dict) -> FittedLearner:
    spec = LearnerSpec(**doc["spec"])
    scaler = _load_scaler(doc["scaler"])
    m = doc["model"]
    kind = m["type"]
    if kind == "constant":
        est = ConstantModel(m["prior"], doc["n_features"])
    elif kind == "gbdt":
        est = _load_gbdt(m)
    elif kind == "linear":
        est = _make_estimator(spec)
        est.coef_ = np.asarray(m["coef"])
        est.intercept_ = np.asarray(m["intercept"])
        est.classes_ = np.asarray(m["classes"])
        est.n_features_in_ = doc["n_features"]
    elif kind == "gaussian_nb":
        est = _make_estimator(spec)
        est.theta_ = np.asarray(m["theta"])
        est.var_ = np.asarray(m["var"])
        est.class_prior_ = np.asarray(m["class_prior"])
        est.class_count_ = np.asarray(m["class_count"])
        est.classes_ = np.asarray(m["classes"])
        est.epsilon_ = m["epsilon"]
        est.n_features_in_ = doc["n_features"]
    elif kind == "knn":
        # refitting on the stored training set reproduces the exact model
        est = _make_estimator(spec)
        est.fit(np.asarray(m["X"]), np.asarray(m["y"]))
    elif kind == "decision_tree":
        hp = spec.resolved()
        est = _load_sk_tree(
            m["tree"],
            {"max_depth": hp["max_depth"], "min_samples_leaf": hp["min_samples_leaf"], "random_state": spec.seed},
        )
    elif kind == "random_forest":
        est = _make_estimator(spec)
        est.estimators_ = [_load_sk_tree(t) for t in m["trees"]]
        est.classes_ = np.asarray(m["classes"])
        est.n_classes_ = est.classes_.size
        est.n_outputs_ = 1
        est.n_features_in_ = doc["n_features"]
    else:
        raise LearnError(f"unknown serialized model type {kind!r}")
    return FittedLearner(spec, est, scaler, doc["n_features"])


# -- ensemble -----------------------------------------------------------------

def dump_ensemble(model: StackedEnsemble, extra_provenance: dict | None = None) -> str:
    doc = {
        "format": FORMAT_VERSION,
        "seed": model.seed,
        "n_features": model.n_features,
        "selected_feature_indices": list(model.selected_feature_indices),
        "meta_params": model.meta_params.as_dict(),
        "meta_model": _dump_gbdt(model.meta_model),
        "base_models": [_dump_learner(b) for b in model.base_models],
        "oof_plan": {
            "k": model.oof_plan.k,
            "seed": model.oof_plan.seed,
            "assignment": dict(sorted(model.oof_plan.assignment.items())),
        },
        "provenance": extra_provenance or {},
    }
    return json.dumps(doc, indent=1, sort_keys=True)


def load_ensemble(text: str) -> StackedEnsemble:
    doc = json.loads(text)
    if doc.get("format") != FORMAT_VERSION:
        raise LearnError(f"unsupported model format {doc.get('format')!r}")
    base_models = [_load_learner(b) for b in doc["base_models"]]
    return StackedEnsemble(
        base_models=base_models,
        selected_feature_indices=list(doc["selected_feature_indices"]),
        meta_model=_load_gbdt(doc["meta_model"]),
        oof_plan=FoldPlan(
            k=doc["oof_plan"]["k"],
            assignment=dict(doc["oof_plan"]["assignment"]),
            seed=doc["oof_plan"]["seed"],
        ),
        n_features=doc["n_features"],
        base_specs=[b.spec for b in base_models],
        meta_params=GbdtParams(**doc["meta_params"]),
        seed=doc["seed"],
    )
