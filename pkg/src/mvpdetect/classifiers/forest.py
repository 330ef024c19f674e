"""Random forest of Gini decision trees grown to purity.

Tree ``t`` draws its bootstrap sample and its per-node feature subsets from
``numpy.random.default_rng([seed, t])``, so a forest is reproducible from
``(data, seed, n_trees)`` regardless of the order trees are built in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..features import SystemConfig
from .base import AE, Classifier, to_arrays

DEFAULT_SEED = 200
DEFAULT_TREES = 100


@dataclass
class Tree:
    """Flat array representation; ``feature == -1`` marks a leaf.

    ``value`` holds the fraction of ae samples reaching each node.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    def predict_value(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(len(X), dtype=int)
        active = self.feature[node] >= 0
        while active.any():
            idx = np.flatnonzero(active)
            cur = node[idx]
            go_left = X[idx, self.feature[cur]] <= self.threshold[cur]
            node[idx] = np.where(go_left, self.left[cur], self.right[cur])
            active = self.feature[node] >= 0
        return self.value[node]

    def to_dict(self):
        return {k: getattr(self, k).tolist() for k in ("feature", "threshold", "left", "right", "value")}

    @classmethod
    def from_dict(cls, d):
        return cls(
            np.asarray(d["feature"], dtype=int),
            np.asarray(d["threshold"], dtype=float),
            np.asarray(d["left"], dtype=int),
            np.asarray(d["right"], dtype=int),
            np.asarray(d["value"], dtype=float),
        )


def _best_split(x: np.ndarray, pos: np.ndarray):
    """Best Gini split of one feature; returns (weighted impurity, threshold) or None."""
    order = np.argsort(x, kind="stable")
    xs, ps = x[order], pos[order]
    n = len(xs)
    # candidate cut after position i (left = first i+1 samples) where values differ
    cut = np.flatnonzero(xs[:-1] < xs[1:])
    if len(cut) == 0:
        return None
    left_n = cut + 1.0
    right_n = n - left_n
    left_pos = np.cumsum(ps)[cut]
    right_pos = ps.sum() - left_pos
    left_gini = 1.0 - (left_pos / left_n) ** 2 - (1 - left_pos / left_n) ** 2
    right_gini = 1.0 - (right_pos / right_n) ** 2 - (1 - right_pos / right_n) ** 2
    weighted = (left_n * left_gini + right_n * right_gini) / n
    best = int(np.argmin(weighted))
    c = cut[best]
    thr = (xs[c] + xs[c + 1]) / 2.0
    # the midpoint can round up to the right value for adjacent floats
    if not thr < xs[c + 1]:
        thr = xs[c]
    return float(weighted[best]), float(thr)


def grow_tree(X: np.ndarray, y: np.ndarray, max_features: int, rng: np.random.Generator) -> Tree:
    pos = (y == AE).astype(float)
    feature, threshold, left, right, value = [], [], [], [], []

    def new_node(idx):
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(float(pos[idx].mean()))
        return len(feature) - 1

    root = new_node(np.arange(len(y)))
    stack = [(root, np.arange(len(y)))]
    n_features = X.shape[1]
    while stack:
        node, idx = stack.pop()
        p = pos[idx]
        if p.min() == p.max():
            continue
        order = rng.permutation(n_features)
        best = None
        # look at max_features candidates; keep going past them only while
        # none of the visited features admits a split
        for rank, f in enumerate(order):
            if rank >= max_features and best is not None:
                break
            res = _best_split(X[idx, f], p)
            if res is not None and (best is None or res[0] < best[0]):
                best = (res[0], res[1], int(f))
        if best is None:
            # identical inputs with mixed labels: leave an impure leaf
            continue
        _, thr, f = best
        mask = X[idx, f] <= thr
        li, ri = idx[mask], idx[~mask]
        ln, rn = new_node(li), new_node(ri)
        feature[node], threshold[node], left[node], right[node] = f, thr, ln, rn
        stack.append((rn, ri))
        stack.append((ln, li))

    return Tree(np.array(feature, dtype=int), np.array(threshold, dtype=float),
                np.array(left, dtype=int), np.array(right, dtype=int), np.array(value, dtype=float))


class ForestModel(Classifier):
    """Soft-voting forest: the decision value is the mean ae fraction of the
    leaves reached; 0.5 or more is ae."""

    kind = "forest"

    def __init__(self, trees, n_features, seed=DEFAULT_SEED, config: SystemConfig | None = None):
        super().__init__(n_features, config)
        self.trees = list(trees)
        self.seed = seed

    @property
    def n_trees(self) -> int:
        return len(self.trees)

    def decision_values(self, X):
        X = self._check(X)
        return np.mean([t.predict_value(X) for t in self.trees], axis=0)

    def _is_ae(self, values):
        return values >= 0.5

    def params(self):
        return {"seed": self.seed, "trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_params(cls, n_features, params, config=None):
        return cls([Tree.from_dict(t) for t in params["trees"]], n_features, params["seed"], config)


def train_forest(data, n_trees: int = DEFAULT_TREES, seed: int = DEFAULT_SEED,
                 config: SystemConfig | None = None) -> ForestModel:
    if n_trees < 1:
        raise ValueError("n_trees must be >= 1")
    X, y = to_arrays(data)
    n, d = X.shape
    max_features = max(1, int(math.sqrt(d)))
    trees = []
    for t in range(n_trees):
        rng = np.random.default_rng([seed, t])
        sample = rng.integers(0, n, size=n)
        trees.append(grow_tree(X[sample], y[sample], max_features, rng))
    return ForestModel(trees, d, seed, config)
