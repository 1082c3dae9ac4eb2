"""Second-order gradient-boosted decision trees for the logistic loss.

Depth-wise exact-greedy trees; split gain

    0.5 * [G_L^2/(H_L+l) + G_R^2/(H_R+l) - (G_L+G_R)^2/(H_L+H_R+l)] - gamma

with leaf value -G/(H+l), shrunk by the learning rate. Per-feature split
gains are accumulated for feature selection. Training asserts that the
logistic loss never increases between rounds (tolerance 1e-9).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..errors import DegenerateLabels, DimensionMismatch, EmptyMatrix, LearnError
from .backend import best_split_scan

LOSS_TOLERANCE = 1e-9


@dataclass(frozen=True)
class GbdtParams:
    n_trees: int = 100
    learning_rate: float = 0.1
    max_depth: int = 3
    min_samples_leaf: int = 1
    l2_lambda: float = 1.0
    gain_gamma: float = 0.0

    def __post_init__(self):
        if self.n_trees < 0:
            raise ValueError("n_trees must be >= 0")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")
        if self.l2_lambda < 0 or self.gain_gamma < 0:
            raise ValueError("l2_lambda and gain_gamma must be >= 0")

    def as_dict(self) -> dict:
        return {
            "n_trees": self.n_trees,
            "learning_rate": self.learning_rate,
            "max_depth": self.max_depth,
            "min_samples_leaf": self.min_samples_leaf,
            "l2_lambda": self.l2_lambda,
            "gain_gamma": self.gain_gamma,
        }


@dataclass
class Tree:
    """Flat array tree; feature == -1 marks a leaf. Leaf values carry the
    learning rate already folded in."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    def predict(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            internal = self.feature[node] >= 0
            if not internal.any():
                break
            rows = np.nonzero(internal)[0]
            nid = node[rows]
            go_left = X[rows, self.feature[nid]] <= self.threshold[nid]
            node[rows] = np.where(go_left, self.left[nid], self.right[nid])
        return self.value[node]


class _TreeBuilder:
    def __init__(self, X, g, h, params: GbdtParams):
        self.X = X
        self.g = g
        self.h = h
        self.p = params
        self.feature = []
        self.threshold = []
        self.left = []
        self.right = []
        self.value = []
        self.gain_by_feature = np.zeros(X.shape[1])
        self.update = np.zeros(X.shape[0])

    def _new_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return len(self.feature) - 1

    def _leaf(self, node: int, idx: np.ndarray) -> None:
        g_sum = float(np.sum(self.g[idx]))
        h_sum = float(np.sum(self.h[idx]))
        val = -g_sum / (h_sum + self.p.l2_lambda) * self.p.learning_rate
        self.value[node] = val
        self.update[idx] = val

    def build(self) -> tuple[Tree, np.ndarray]:
        root = self._new_node()
        frontier = [(root, np.arange(self.X.shape[0]), 0)]
        while frontier:
            node, idx, depth = frontier.pop()
            split = None
            if depth < self.p.max_depth and idx.size >= 2 * self.p.min_samples_leaf:
                split = self._best_split(idx)
            if split is None:
                self._leaf(node, idx)
                continue
            j, thr, gain, left_idx, right_idx = split
            self.gain_by_feature[j] += gain
            self.feature[node] = j
            self.threshold[node] = thr
            left = self._new_node()
            right = self._new_node()
            self.left[node] = left
            self.right[node] = right
            frontier.append((right, right_idx, depth + 1))
            frontier.append((left, left_idx, depth + 1))
        tree = Tree(
            feature=np.asarray(self.feature, dtype=np.int64),
            threshold=np.asarray(self.threshold, dtype=np.float64),
            left=np.asarray(self.left, dtype=np.int64),
            right=np.asarray(self.right, dtype=np.int64),
            value=np.asarray(self.value, dtype=np.float64),
        )
        return tree, self.update, self.gain_by_feature

    def _best_split(self, idx: np.ndarray):
        best = None  # (gain, j, pos, order)
        for j in range(self.X.shape[1]):
            x = self.X[idx, j]
            order = np.argsort(x, kind="stable")
            xs = np.ascontiguousarray(x[order])
            gs = np.ascontiguousarray(self.g[idx][order])
            hs = np.ascontiguousarray(self.h[idx][order])
            gain, pos = best_split_scan(
                xs, gs, hs, self.p.l2_lambda, self.p.gain_gamma, self.p.min_samples_leaf
            )
            if pos >= 0 and gain > 0.0 and (best is None or gain > best[0]):
                best = (gain, j, pos, order, xs)
        if best is None:
            return None
        gain, j, pos, order, xs = best
        thr = (xs[pos] + xs[pos + 1]) / 2.0
        left_idx = idx[order[: pos + 1]]
        right_idx = idx[order[pos + 1 :]]
        return j, float(thr), float(gain), left_idx, right_idx


def _logistic_loss(scores: np.ndarray, y: np.ndarray) -> float:
    # mean of log(1 + e^F) - y*F, numerically stable
    return float(np.mean(np.logaddexp(0.0, scores) - y * scores))


@dataclass
class GbdtModel:
    params: GbdtParams
    n_features: int
    prior: float
    base_score: float
    trees: list[Tree] = field(default_factory=list)
    feature_gains: np.ndarray = None
    loss_trace: list[float] = field(default_factory=list)

    def predict_raw(self, X) -> np.ndarray:
        X = _check_matrix(X, self.n_features)
        scores = np.full(X.shape[0], self.base_score)
        for tree in self.trees:
            scores += tree.predict(X)
        return scores

    def predict_proba(self, X) -> np.ndarray:
        X = _check_matrix(X, self.n_features)
        if not self.trees:
            return np.full(X.shape[0], self.prior)
        raw = self.predict_raw(X)
        return 1.0 / (1.0 + np.exp(-raw))

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(np.int64)


def _check_matrix(X, expected: Optional[int] = None) -> np.ndarray:
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise EmptyMatrix(f"expected a 2-d matrix, got ndim={X.ndim}")
    if expected is not None and X.shape[1] != expected:
        raise DimensionMismatch(expected, X.shape[1])
    return X


def fit_gbdt(X, y, params: GbdtParams) -> GbdtModel:
    """Fit a boosted model for binary labels y in {0, 1}."""
    X = _check_matrix(X)
    if X.shape[0] == 0:
        raise EmptyMatrix("no training rows")
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (X.shape[0],):
        raise LearnError(f"label vector shape {y.shape} does not match {X.shape[0]} rows")
    prior = float(np.mean(y))
    if params.n_trees > 0 and (prior == 0.0 or prior == 1.0):
        raise DegenerateLabels("boosting requires both classes in y")

    base_score = float(np.log(prior / (1.0 - prior))) if 0.0 < prior < 1.0 else 0.0
    model = GbdtModel(
        params=params,
        n_features=X.shape[1],
        prior=prior,
        base_score=base_score,
        feature_gains=np.zeros(X.shape[1]),
    )
    scores = np.full(X.shape[0], base_score)
    loss = _logistic_loss(scores, y)
    model.loss_trace.append(loss)
    for _ in range(params.n_trees):
        p = 1.0 / (1.0 + np.exp(-scores))
        g = p - y
        h = p * (1.0 - p)
        tree, update, gains = _TreeBuilder(X, g, h, params).build()
        model.trees.append(tree)
        model.feature_gains += gains
        scores = scores + update
        new_loss = _logistic_loss(scores, y)
        if new_loss > loss + LOSS_TOLERANCE:
            raise LearnError(
                f"training loss increased ({loss:.12g} -> {new_loss:.12g}); boosting diverged"
            )
        loss = new_loss
        model.loss_trace.append(loss)
    return model


def select_features(X, y, params: GbdtParams, top_k: int) -> list[int]:
    """Rank features by cumulative split gain and return the top_k indices.

    Ties break toward the lower index; if fewer than top_k features ever
    split, the result is padded with the lowest-index unused features.
    Returned indices are sorted ascending.
    """
    X = _check_matrix(X)
    d = X.shape[1]
    top_k = min(top_k, d)
    model = fit_gbdt(X, y, params)
    gains = model.feature_gains
    order = sorted(range(d), key=lambda j: (-gains[j], j))
    return sorted(order[:top_k])
