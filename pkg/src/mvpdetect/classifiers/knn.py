from __future__ import annotations

import numpy as np

from ..features import SystemConfig
from .base import AE, Classifier, to_arrays

DEFAULT_K = 10


class KnnModel(Classifier):
    """k-nearest-neighbour vote under Euclidean distance.

    The decision value is the fraction of neighbours labelled ae; a tied
    vote counts as ae.  With fewer than ``k`` stored points every point
    votes.  Distance ties are broken by training order.
    """

    kind = "knn"

    def __init__(self, X, y, k=DEFAULT_K, config: SystemConfig | None = None):
        X = np.asarray(X, dtype=float)
        super().__init__(X.shape[1], config)
        if k < 1:
            raise ValueError("k must be >= 1")
        self.X = X
        self.y = np.asarray(y, dtype=int)
        self.k = int(k)

    @property
    def effective_k(self) -> int:
        return min(self.k, len(self.y))

    def decision_values(self, X):
        X = self._check(X)
        k = self.effective_k
        d2 = ((X[:, None, :] - self.X[None, :, :]) ** 2).sum(axis=2)
        nearest = np.argsort(d2, axis=1, kind="stable")[:, :k]
        return (self.y[nearest] == AE).mean(axis=1)

    def _is_ae(self, values):
        return values >= 0.5

    def params(self):
        return {"k": self.k, "X": self.X.tolist(), "y": self.y.tolist()}

    @classmethod
    def from_params(cls, n_features, params, config=None):
        X = np.asarray(params["X"], dtype=float).reshape(-1, n_features)
        return cls(X, params["y"], params["k"], config)


def train_knn(data, k: int = DEFAULT_K, config: SystemConfig | None = None) -> KnnModel:
    X, y = to_arrays(data)
    return KnnModel(X, y, k, config)
