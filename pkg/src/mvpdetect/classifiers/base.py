from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateTraining, DimensionMismatch
from ..features import FeatureVector, SystemConfig

AE = 1
BENIGN = -1


@dataclass(frozen=True)
class DetectionResult:
    audio_id: str
    verdict: str
    decision_value: float

    @property
    def is_ae(self) -> bool:
        return self.verdict == "ae"


def to_arrays(data: Sequence[FeatureVector], require_labels: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Stack feature vectors into ``X`` and labels into ``y`` (+1 ae, -1 benign)."""
    if not data:
        raise DegenerateTraining("no training data")
    dims = {len(v.scores) for v in data}
    if len(dims) != 1:
        raise DegenerateTraining(f"feature vectors have mixed lengths {sorted(dims)}")
    X = np.array([v.scores for v in data], dtype=float)
    if require_labels and any(v.label is None for v in data):
        raise DegenerateTraining("training data contains unlabeled vectors")
    y = np.array([AE if v.label == "ae" else BENIGN for v in data], dtype=int)
    return X, y


class Classifier:
    """Common surface of the trained models.

    Subclasses implement :meth:`decision_values` and :meth:`_is_ae`; the
    verdict is always a fixed function of the decision value.
    """

    kind = "base"

    def __init__(self, n_features: int, config: SystemConfig | None = None):
        self.n_features = int(n_features)
        self.config = config

    def decision_values(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _is_ae(self, values: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _check(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(self.n_features, X.shape[1])
        return X

    def predict_many(self, vectors: Sequence[FeatureVector]) -> list[DetectionResult]:
        if not vectors:
            return []
        for v in vectors:
            if len(v.scores) != self.n_features:
                raise DimensionMismatch(self.n_features, len(v.scores))
        X = np.array([v.scores for v in vectors], dtype=float)
        values = self.decision_values(X)
        flags = self._is_ae(values)
        return [DetectionResult(v.audio_id, "ae" if f else "benign", float(d))
                for v, d, f in zip(vectors, values, flags)]

    def predict(self, fv: FeatureVector) -> DetectionResult:
        return self.predict_many([fv])[0]

    def params(self) -> dict:
        raise NotImplementedError

    @classmethod
    def from_params(cls, n_features: int, params: dict, config: SystemConfig | None = None):
        raise NotImplementedError


def predict(model: Classifier, fv: FeatureVector) -> DetectionResult:
    return model.predict(fv)
