"""Feature vectors: one similarity score per auxiliary ASR.

For a system ``target + {aux_1, ..., aux_n}`` the vector of an audio is
``[score(target, aux_1), ..., score(target, aux_n)]`` in the order the
auxiliaries were declared.
"""

from __future__ import annotations

import csv
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, MissingTranscript, ParseError
from .ingest import LABELS, Transcript, TranscriptStore
from .similarity import PE_JARO_WINKLER, SimilarityMethod, compare_prepared, prepare


@dataclass(frozen=True)
class SystemConfig:
    target_asr: str
    auxiliary_asrs: tuple[str, ...]
    method: SimilarityMethod = PE_JARO_WINKLER

    def __post_init__(self):
        aux = tuple(self.auxiliary_asrs)
        object.__setattr__(self, "auxiliary_asrs", aux)
        if isinstance(self.method, str):
            object.__setattr__(self, "method", SimilarityMethod.parse(self.method))
        if not aux:
            raise ConfigError("at least one auxiliary ASR is required")
        if len(set(aux)) != len(aux):
            raise ConfigError(f"duplicate auxiliary ASRs: {list(aux)}")
        if self.target_asr in aux:
            raise ConfigError(f"target ASR {self.target_asr!r} is also listed as auxiliary")

    @property
    def n(self) -> int:
        return len(self.auxiliary_asrs)

    @property
    def asr_ids(self) -> tuple[str, ...]:
        return (self.target_asr, *self.auxiliary_asrs)

    def describe(self) -> str:
        """``DS0+{DS1,GCS}`` style name."""
        return f"{self.target_asr}+{{{','.join(self.auxiliary_asrs)}}}"

    def to_dict(self) -> dict:
        return {
            "target_asr": self.target_asr,
            "auxiliary_asrs": list(self.auxiliary_asrs),
            "method": self.method.name,
        }

    @classmethod
    def from_dict(cls, obj: Mapping) -> "SystemConfig":
        try:
            method = SimilarityMethod.parse(obj.get("method", PE_JARO_WINKLER.name))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return cls(obj["target_asr"], tuple(obj["auxiliary_asrs"]), method)


@dataclass(frozen=True)
class FeatureVector:
    audio_id: str
    scores: tuple[float, ...]
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "scores", tuple(float(s) for s in self.scores))
        if self.label is not None and self.label not in LABELS:
            raise ValueError(f"label must be one of {LABELS}, got {self.label!r}")

    def __len__(self):
        return len(self.scores)


def _text(value: Transcript | str) -> str:
    return value.text if isinstance(value, Transcript) else value


def build_feature_vector(config: SystemConfig, transcripts: Mapping[str, Transcript | str],
                         audio_id: str | None = None, label: str | None = None) -> FeatureVector:
    """Score the target transcript against each auxiliary transcript.

    ``transcripts`` maps asr_id to a :class:`Transcript` or plain text.
    """
    if audio_id is None:
        audio_id = next((t.audio_id for t in transcripts.values() if isinstance(t, Transcript)), "")
    for asr in config.asr_ids:
        if asr not in transcripts:
            raise MissingTranscript(asr, audio_id)
    method = config.method
    target = prepare(method, _text(transcripts[config.target_asr]))
    scores = tuple(
        compare_prepared(method, target, prepare(method, _text(transcripts[aux])))
        for aux in config.auxiliary_asrs
    )
    return FeatureVector(audio_id, scores, label)


def build_dataset(config: SystemConfig, store: TranscriptStore,
                  manifest: Iterable[tuple[str, str]]) -> list[FeatureVector]:
    out = []
    for audio_id, label in manifest:
        per_asr = {}
        for asr in config.asr_ids:
            try:
                per_asr[asr] = store[(audio_id, asr)]
            except KeyError:
                raise MissingTranscript(asr, audio_id) from None
        out.append(build_feature_vector(config, per_asr, audio_id, label))
    return out


@dataclass
class FeatureTable:
    """Feature vectors plus the auxiliary ASR order they were built with."""

    auxiliary_asrs: tuple[str, ...]
    vectors: list[FeatureVector] = field(default_factory=list)


def write_features(path: str | Path, vectors: Sequence[FeatureVector],
                   auxiliary_asrs: Sequence[str]) -> None:
    """CSV with header ``audio_id,<aux_1>,...,<aux_n>[,label]``.

    Scores are written with ``repr`` so they round-trip exactly.
    """
    with_label = any(v.label is not None for v in vectors)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["audio_id", *auxiliary_asrs] + (["label"] if with_label else []))
        for v in vectors:
            if len(v.scores) != len(auxiliary_asrs):
                raise ValueError(f"vector {v.audio_id!r} has {len(v.scores)} scores, "
                                 f"header has {len(auxiliary_asrs)}")
            row = [v.audio_id, *(repr(s) for s in v.scores)]
            if with_label:
                row.append(v.label or "")
            writer.writerow(row)


def read_features(path: str | Path) -> FeatureTable:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "audio_id":
            raise ParseError("feature CSV must start with an 'audio_id' column", line=1)
        has_label = header[-1] == "label"
        aux = tuple(header[1:-1] if has_label else header[1:])
        if not aux:
            raise ParseError("feature CSV has no score columns", line=1)
        vectors = []
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(f"expected {len(header)} columns, got {len(row)}", line=lineno)
            try:
                scores = [float(x) for x in row[1:1 + len(aux)]]
            except ValueError:
                raise ParseError("non-numeric score", line=lineno) from None
            if any(not (0.0 <= s <= 1.0) or math.isnan(s) for s in scores):
                raise ParseError("score outside [0, 1]", line=lineno)
            label = (row[-1].strip() or None) if has_label else None
            if label is not None and label not in LABELS:
                raise ParseError(f"label must be one of {LABELS}, got {label!r}", line=lineno)
            vectors.append(FeatureVector(row[0], scores, label))
    return FeatureTable(aux, vectors)
