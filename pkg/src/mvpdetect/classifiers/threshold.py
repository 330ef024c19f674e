from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from ..errors import DegenerateTraining
from ..features import FeatureVector, SystemConfig
from .base import Classifier


class ThresholdModel(Classifier):
    """Flag an audio as ae when its similarity score is strictly below ``T``.

    For multi-auxiliary vectors the score is the minimum over auxiliaries:
    an AE that fools the target still leaves at least one auxiliary in
    disagreement.  The decision value is ``score - T``.
    """

    kind = "threshold"

    def __init__(self, T: float, n_features: int = 1, config: SystemConfig | None = None,
                 train_fpr: float | None = None):
        super().__init__(n_features, config)
        if not 0.0 <= T <= 1.0:
            raise ValueError(f"threshold must lie in [0, 1], got {T}")
        self.T = float(T)
        self.train_fpr = train_fpr

    @property
    def aggregation(self) -> str:
        return "single" if self.n_features == 1 else "min"

    def decision_values(self, X):
        X = self._check(X)
        return X.min(axis=1) - self.T

    def _is_ae(self, values):
        return values < 0

    def params(self):
        return {"T": self.T, "aggregation": self.aggregation, "train_fpr": self.train_fpr}

    @classmethod
    def from_params(cls, n_features, params, config=None):
        return cls(params["T"], n_features, config, params.get("train_fpr"))


def select_threshold(benign_scores: Sequence[float], max_fpr: float = 0.05,
                     n_features: int = 1, config: SystemConfig | None = None) -> ThresholdModel:
    """Largest ``T`` whose false-positive rate on ``benign_scores`` is at most ``max_fpr``.

    Candidates are the observed scores plus 0 and 1; an observed score
    counts as a false positive when it is strictly below ``T``.
    """
    if len(benign_scores) == 0:
        raise DegenerateTraining("threshold selection needs at least one benign score")
    if not 0 < max_fpr < 1:
        raise ValueError("max_fpr must be in (0, 1)")
    scores = np.sort(np.asarray(benign_scores, dtype=float))
    n = len(scores)
    allowed = math.floor(max_fpr * n + 1e-9)
    candidates = np.unique(np.concatenate([scores, [0.0, 1.0]]))[::-1]
    for T in candidates:
        below = int(np.searchsorted(scores, T, side="left"))
        if below <= allowed:
            return ThresholdModel(float(T), n_features, config, train_fpr=below / n)
    raise AssertionError("unreachable: T = 0 never has false positives")


def fit_threshold(data: Sequence[FeatureVector], max_fpr: float = 0.05,
                  config: SystemConfig | None = None) -> ThresholdModel:
    """Select a threshold from the benign vectors in ``data`` (others are ignored)."""
    benign = [v for v in data if v.label != "ae"]
    if not benign:
        raise DegenerateTraining("threshold selection needs benign samples")
    n = len(benign[0].scores)
    return select_threshold([min(v.scores) for v in benign], max_fpr, n, config)
