"""Experiment configuration files.

A config is a JSON document validated against :data:`CONFIG_SCHEMA` before
anything else runs.  Relative paths inside ``backends`` are resolved
against the directory holding the config file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from .errors import ConfigError
from .features import SystemConfig
from .ingest import BackendConfig
from .similarity import METHODS

_BACKEND_SCHEMA = {
    "type": "object",
    "required": ["asr_id", "kind"],
    "properties": {
        "asr_id": {"type": "string", "minLength": 1},
        "kind": {"enum": ["file", "http", "mock"]},
        "path": {"type": "string"},
        "endpoint": {"type": "string"},
        "auth_header": {"type": "string"},
        "auth_value": {"type": "string"},
        "timeout_s": {"type": "number", "exclusiveMinimum": 0},
        "retries": {"type": "integer", "minimum": 0},
        "backoff_s": {"type": "number", "minimum": 0},
        "reference": {"type": "string"},
        "reference_asr": {"type": "string"},
        "wer": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
        "seed": {"type": "integer"},
        "latency_s": {"type": "number", "minimum": 0},
    },
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"kind": {"const": "file"}}}, "then": {"required": ["path"]}},
        {"if": {"properties": {"kind": {"const": "http"}}}, "then": {"required": ["endpoint"]}},
        {"if": {"properties": {"kind": {"const": "mock"}}}, "then": {"required": ["reference"]}},
    ],
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "mvpdetect experiment config",
    "type": "object",
    "required": ["target_asr", "auxiliary_asrs"],
    "properties": {
        "target_asr": {"type": "string", "minLength": 1},
        "auxiliary_asrs": {
            "type": "array",
            "items": {"type": "string", "minLength": 1},
            "minItems": 1,
            "uniqueItems": True,
        },
        "method": {"enum": [m.name for m in METHODS]},
        "seed": {"type": "integer"},
        "backends": {"type": "array", "items": _BACKEND_SCHEMA},
        "classifiers": {
            "type": "object",
            "properties": {
                "svm": {
                    "type": "object",
                    "properties": {"C": {"type": "number", "exclusiveMinimum": 0},
                                   "tol": {"type": "number", "exclusiveMinimum": 0}},
                    "additionalProperties": False,
                },
                "knn": {
                    "type": "object",
                    "properties": {"k": {"type": "integer", "minimum": 1}},
                    "additionalProperties": False,
                },
                "forest": {
                    "type": "object",
                    "properties": {"n_trees": {"type": "integer", "minimum": 1},
                                   "seed": {"type": "integer"}},
                    "additionalProperties": False,
                },
                "threshold": {
                    "type": "object",
                    "properties": {"max_fpr": {"type": "number", "exclusiveMinimum": 0,
                                               "exclusiveMaximum": 1}},
                    "additionalProperties": False,
                },
            },
            "additionalProperties": False,
        },
        "eval": {
            "type": "object",
            "properties": {"k": {"type": "integer", "minimum": 2}, "seed": {"type": "integer"}},
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

DEFAULT_HYPER = {
    "svm": {"C": 1.0, "tol": 1e-3},
    "knn": {"k": 10},
    "forest": {"n_trees": 100, "seed": 200},
    "threshold": {"max_fpr": 0.05},
}


@dataclass
class ExperimentConfig:
    system: SystemConfig
    backends: list[BackendConfig] = field(default_factory=list)
    seed: int = 0
    classifiers: dict = field(default_factory=dict)
    eval: dict = field(default_factory=dict)

    def hyper(self, kind: str) -> dict:
        return {**DEFAULT_HYPER.get(kind, {}), **self.classifiers.get(kind, {})}


def parse_config(doc: dict, base_dir: str | Path = ".") -> ExperimentConfig:
    try:
        jsonschema.validate(doc, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {where}: {exc.message}") from None
    system = SystemConfig.from_dict(doc)
    base = Path(base_dir)
    backends = []
    for b in doc.get("backends", []):
        b = dict(b)
        for key in ("path", "reference"):
            if key in b and not Path(b[key]).is_absolute():
                b[key] = str(base / b[key])
        backends.append(BackendConfig.from_dict(b))
    ids = [b.asr_id for b in backends]
    if len(set(ids)) != len(ids):
        raise ConfigError(f"duplicate backend asr_id in {ids}")
    return ExperimentConfig(system, backends, doc.get("seed", 0), doc.get("classifiers", {}),
                            doc.get("eval", {}))


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(doc, path.parent)
