"""Binary classifiers over similarity feature vectors, plus JSON persistence."""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import ModelMismatch, ParseError
from ..features import SystemConfig
from .base import AE, BENIGN, Classifier, DetectionResult, predict, to_arrays
from .forest import ForestModel, train_forest
from .knn import KnnModel, train_knn
from .svm import SvmModel, train_svm
from .threshold import ThresholdModel, fit_threshold, select_threshold

__all__ = [
    "AE", "BENIGN", "Classifier", "DetectionResult", "ForestModel", "KnnModel", "SvmModel",
    "ThresholdModel", "fit_threshold", "load_model", "model_from_dict", "model_to_dict",
    "predict", "save_model", "select_threshold", "to_arrays", "train", "train_forest",
    "train_knn", "train_svm", "MODEL_KINDS",
]

MODEL_FORMAT = "mvpdetect.model"
MODEL_VERSION = 1

_CLASSES = {cls.kind: cls for cls in (SvmModel, KnnModel, ForestModel, ThresholdModel)}
MODEL_KINDS = tuple(_CLASSES)


def train(kind: str, data, config: SystemConfig | None = None, **hyper) -> Classifier:
    """Dispatch to the trainer for ``kind`` (svm, knn, forest or threshold)."""
    if kind == "svm":
        return train_svm(data, config=config, **hyper)
    if kind == "knn":
        return train_knn(data, config=config, **hyper)
    if kind == "forest":
        return train_forest(data, config=config, **hyper)
    if kind == "threshold":
        return fit_threshold(data, config=config, **hyper)
    raise ValueError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")


def model_to_dict(model: Classifier) -> dict:
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "kind": model.kind,
        "n_features": model.n_features,
        "system": model.config.to_dict() if model.config is not None else None,
        "params": model.params(),
    }


def model_from_dict(doc: dict, expected: SystemConfig | None = None) -> Classifier:
    if doc.get("format") != MODEL_FORMAT:
        raise ParseError(f"not a {MODEL_FORMAT} document")
    if doc.get("version") != MODEL_VERSION:
        raise ParseError(f"unsupported model version {doc.get('version')!r}")
    kind = doc.get("kind")
    if kind not in _CLASSES:
        raise ParseError(f"unknown model kind {kind!r}")
    n = int(doc["n_features"])
    config = SystemConfig.from_dict(doc["system"]) if doc.get("system") else None
    if config is not None and config.n != n:
        raise ModelMismatch(f"model has {n} features but its system declares {config.n} auxiliaries")
    if expected is not None:
        if expected.n != n:
            raise ModelMismatch(f"model expects {n} auxiliaries, system has {expected.n}")
        if config is not None and (config.auxiliary_asrs != expected.auxiliary_asrs
                                   or config.method != expected.method
                                   or config.target_asr != expected.target_asr):
            raise ModelMismatch(
                f"model was trained for {config.describe()} with {config.method.name}, "
                f"not {expected.describe()} with {expected.method.name}")
    return _CLASSES[kind].from_params(n, doc["params"], config)


def save_model(model: Classifier, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh)
        fh.write("\n")


def load_model(path: str | Path, expected: SystemConfig | None = None) -> Classifier:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"model file is not valid JSON: {exc.msg}", line=exc.lineno) from None
    return model_from_dict(doc, expected)
