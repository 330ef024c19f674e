"""Transcript acquisition: JSONL stores, ASR backends and parallel fan-out.

Three backend kinds are supported:

* ``file``  -- transcripts precomputed into a JSONL store;
* ``http``  -- a provider-agnostic service taking
  ``{"audio_id": ..., "audio_b64": ...}`` and answering ``{"text": ...}``;
* ``mock``  -- a reference store perturbed at a word error rate, seeded per
  audio so that repeated queries agree.
"""

from __future__ import annotations

import base64
import csv
import json
import logging
import random
import time
from collections.abc import Iterable, Iterator, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import httpx

from .errors import (
    BackendTimeout,
    BadResponse,
    ConfigError,
    DuplicateTranscript,
    NotFound,
    ParseError,
    TranscriptionFailed,
)
from .textnorm import normalize

log = logging.getLogger(__name__)

LABELS = ("benign", "ae")

# Replacement words for simulated recognition errors.
VOCABULARY = (
    "about", "after", "again", "air", "all", "also", "always", "animal", "answer", "any",
    "around", "ask", "away", "back", "ball", "because", "been", "before", "began", "begin",
    "being", "below", "between", "big", "black", "blue", "boat", "body", "book", "both",
    "box", "boy", "bring", "brought", "build", "but", "call", "came", "can", "car",
    "carry", "change", "children", "city", "class", "close", "cold", "come", "common", "could",
    "country", "cover", "cross", "cut", "dark", "day", "deep", "did", "different", "dog",
    "door", "down", "draw", "drive", "during", "each", "early", "earth", "east", "eat",
    "end", "enough", "even", "every", "eye", "face", "fall", "family", "far", "farm",
    "fast", "father", "feel", "feet", "few", "field", "fill", "find", "fire", "fish",
    "five", "fly", "follow", "food", "foot", "form", "found", "four", "free", "friend",
    "front", "full", "game", "garden", "gave", "girl", "give", "glass", "gold", "good",
    "got", "great", "green", "ground", "group", "grow", "half", "hand", "hard", "head",
    "hear", "heart", "heavy", "help", "here", "high", "hill", "hold", "home", "horse",
    "hot", "hour", "house", "idea", "inch", "island", "just", "keep", "kind", "king",
    "knew", "know", "land", "large", "last", "late", "laugh", "learn", "leave", "left",
    "letter", "light", "line", "list", "little", "long", "look", "machine", "made", "main",
    "make", "man", "many", "map", "mark", "may", "mean", "men", "might", "mile",
    "mind", "money", "moon", "more", "morning", "most", "mother", "mountain", "move", "much",
    "music", "name", "near", "need", "never", "next", "night", "north", "note", "nothing",
    "number", "ocean", "often", "old", "once", "open", "order", "other", "over", "page",
    "paper", "part", "pass", "people", "picture", "piece", "place", "plain", "plant", "play",
    "point", "power", "pull", "quick", "rain", "read", "ready", "red", "river", "road",
    "rock", "room", "round", "rule", "run", "said", "same", "saw", "school", "sea",
    "second", "seem", "self", "ship", "short", "show", "side", "since", "sleep", "slow",
    "small", "snow", "song", "soon", "sound", "south", "space", "stand", "star", "start",
    "state", "still", "stone", "stood", "stop", "story", "street", "strong", "study", "sun",
    "table", "tail", "take", "talk", "teacher", "tell", "ten", "test", "thought", "three",
    "through", "time", "together", "told", "took", "top", "toward", "town", "travel", "tree",
    "true", "turn", "under", "until", "upon", "very", "voice", "walk", "wall", "want",
    "warm", "watch", "water", "week", "weight", "west", "wheel", "white", "whole", "wind",
    "window", "winter", "woman", "wood", "word", "work", "world", "write", "year", "young",
)


def perturb_words(text: str, wer: float, rng: random.Random) -> str:
    """Substitute each word of ``text`` with probability ``wer``.

    The text is normalized first.  Substitutes come from :data:`VOCABULARY`
    and never equal the word they replace.
    """
    tokens = normalize(text)
    if wer <= 0:
        return " ".join(tokens)
    out = []
    for tok in tokens:
        if rng.random() < wer:
            sub = rng.choice(VOCABULARY)
            while sub == tok:
                sub = rng.choice(VOCABULARY)
            out.append(sub)
        else:
            out.append(tok)
    return " ".join(out)


def derive_rng(seed: int, *parts: object) -> random.Random:
    """Independent generator for ``(seed, *parts)``, stable across processes."""
    key = "\x1f".join([str(seed), *map(str, parts)])
    return random.Random(key)


@dataclass(frozen=True)
class Transcript:
    audio_id: str
    asr_id: str
    text: str

    def to_json(self) -> str:
        return json.dumps({"audio_id": self.audio_id, "asr_id": self.asr_id, "text": self.text},
                          ensure_ascii=False)


class TranscriptStore(Mapping):
    """Immutable mapping ``(audio_id, asr_id) -> Transcript``."""

    def __init__(self, transcripts: Iterable[Transcript] = ()):
        data: dict[tuple[str, str], Transcript] = {}
        for tr in transcripts:
            key = (tr.audio_id, tr.asr_id)
            if key in data:
                raise DuplicateTranscript(tr.audio_id, tr.asr_id)
            data[key] = tr
        self._data = data

    def __getitem__(self, key: tuple[str, str]) -> Transcript:
        return self._data[key]

    def __iter__(self) -> Iterator[tuple[str, str]]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __eq__(self, other):
        if isinstance(other, TranscriptStore):
            return self._data == other._data
        return NotImplemented

    def __repr__(self):
        return f"TranscriptStore({len(self)} transcripts)"

    def for_audio(self, audio_id: str) -> dict[str, Transcript]:
        return {asr: tr for (aid, asr), tr in self._data.items() if aid == audio_id}

    def audio_ids(self) -> list[str]:
        seen = dict.fromkeys(aid for aid, _ in self._data)
        return list(seen)

    def transcripts(self) -> list[Transcript]:
        return list(self._data.values())


def load_store(path: str | Path) -> TranscriptStore:
    """Read a JSONL transcript file.

    Raises :class:`ParseError` (with a 1-based line number) on malformed
    lines and :class:`DuplicateTranscript` on a repeated key.
    """
    data: dict[tuple[str, str], Transcript] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", line=lineno) from None
            if not isinstance(obj, dict):
                raise ParseError("expected a JSON object", line=lineno)
            for key in ("audio_id", "asr_id", "text"):
                if not isinstance(obj.get(key), str):
                    raise ParseError(f"missing or non-string field {key!r}", line=lineno)
            tr = Transcript(obj["audio_id"], obj["asr_id"], obj["text"])
            if (tr.audio_id, tr.asr_id) in data:
                raise DuplicateTranscript(tr.audio_id, tr.asr_id, line=lineno)
            data[(tr.audio_id, tr.asr_id)] = tr
    return TranscriptStore(data.values())


def save_store(store: TranscriptStore | Iterable[Transcript], path: str | Path) -> None:
    items = store.transcripts() if isinstance(store, TranscriptStore) else list(store)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for tr in items:
            fh.write(tr.to_json() + "\n")


def read_manifest(path: str | Path) -> list[tuple[str, str]]:
    """Read an ``audio_id,label`` CSV (header row required)."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["audio_id", "label"]:
            raise ParseError("manifest header must be 'audio_id,label'", line=1)
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError("expected 2 columns", line=lineno)
            audio_id, label = row[0], row[1].strip()
            if label not in LABELS:
                raise ParseError(f"label must be one of {LABELS}, got {label!r}", line=lineno)
            rows.append((audio_id, label))
    return rows


def write_manifest(rows: Iterable[tuple[str, str]], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["audio_id", "label"])
        writer.writerows(rows)


@dataclass
class BackendConfig:
    """How to reach one ASR.

    ``latency_s`` adds an artificial delay to ``mock`` backends; it exists
    to exercise the parallel fan-out.
    """

    asr_id: str
    kind: str
    path: str | None = None
    endpoint: str | None = None
    auth_header: str | None = None
    auth_value: str | None = None
    timeout_s: float = 30.0
    retries: int = 2
    backoff_s: float = 0.25
    reference: str | None = None
    reference_asr: str = "reference"
    wer: float = 0.0
    seed: int = 0
    latency_s: float = 0.0
    store: TranscriptStore | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("file", "http", "mock"):
            raise ConfigError(f"backend {self.asr_id!r}: unknown kind {self.kind!r}")
        if self.timeout_s <= 0:
            raise ConfigError(f"backend {self.asr_id!r}: timeout must be > 0")
        if self.retries < 0:
            raise ConfigError(f"backend {self.asr_id!r}: retries must be >= 0")
        if not 0 <= self.wer < 1:
            raise ConfigError(f"backend {self.asr_id!r}: wer must be in [0, 1)")
        if self.kind == "http" and not self.endpoint:
            raise ConfigError(f"backend {self.asr_id!r}: http backend needs an endpoint")
        if self.kind == "file" and self.path is None and self.store is None:
            raise ConfigError(f"backend {self.asr_id!r}: file backend needs a path")
        if self.kind == "mock" and self.reference is None and self.store is None:
            raise ConfigError(f"backend {self.asr_id!r}: mock backend needs a reference store")

    @classmethod
    def from_dict(cls, obj: Mapping) -> "BackendConfig":
        known = {f for f in cls.__dataclass_fields__ if f != "store"}
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(f"unknown backend field(s): {sorted(unknown)}")
        return cls(**obj)

    def get_store(self) -> TranscriptStore:
        if self.store is None:
            self.store = load_store(self.path if self.kind == "file" else self.reference)
        return self.store


def _lookup(store: TranscriptStore, audio_id: str, asr_id: str) -> str:
    try:
        return store[(audio_id, asr_id)].text
    except KeyError:
        raise NotFound(f"no transcript for audio {audio_id!r} from {asr_id!r}") from None


def _transcribe_http(backend: BackendConfig, audio_id: str, audio_bytes: bytes | None) -> str:
    if audio_bytes is None:
        raise BadResponse(f"backend {backend.asr_id!r}: http backends need audio bytes")
    payload = {"audio_id": audio_id, "audio_b64": base64.b64encode(audio_bytes).decode("ascii")}
    headers = {}
    if backend.auth_header:
        headers[backend.auth_header] = backend.auth_value or ""

    last_error: Exception | None = None
    for attempt in range(backend.retries + 1):
        if attempt:
            delay = backend.backoff_s * 2 ** (attempt - 1)
            time.sleep(delay + random.uniform(0, delay / 2))
        try:
            resp = httpx.post(backend.endpoint, json=payload, headers=headers,
                              timeout=backend.timeout_s)
        except httpx.TimeoutException as exc:
            last_error = BackendTimeout(f"backend {backend.asr_id!r}: timed out ({exc})")
            continue
        except httpx.TransportError as exc:
            last_error = BadResponse(f"backend {backend.asr_id!r}: transport error ({exc})")
            continue
        if resp.status_code >= 500:
            last_error = BadResponse(f"backend {backend.asr_id!r}: HTTP {resp.status_code}")
            continue
        if not 200 <= resp.status_code < 300:
            raise BadResponse(f"backend {backend.asr_id!r}: HTTP {resp.status_code}")
        try:
            body = resp.json()
        except ValueError:
            raise BadResponse(f"backend {backend.asr_id!r}: response is not JSON") from None
        if not isinstance(body, dict) or not isinstance(body.get("text"), str):
            raise BadResponse(f"backend {backend.asr_id!r}: response lacks a string 'text'")
        return body["text"]
    log.warning("backend %s gave up after %d attempts", backend.asr_id, backend.retries + 1)
    assert last_error is not None
    raise last_error


def transcribe(backend: BackendConfig, audio_id: str, audio_bytes: bytes | None = None) -> Transcript:
    if backend.kind == "file":
        text = _lookup(backend.get_store(), audio_id, backend.asr_id)
    elif backend.kind == "mock":
        reference = _lookup(backend.get_store(), audio_id, backend.reference_asr)
        text = perturb_words(reference, backend.wer, derive_rng(backend.seed, audio_id))
        if backend.latency_s:
            time.sleep(backend.latency_s)
    else:
        text = _transcribe_http(backend, audio_id, audio_bytes)
    return Transcript(audio_id, backend.asr_id, text)


def transcribe_all(backends: list[BackendConfig], audio_id: str,
                   audio_bytes: bytes | None = None) -> dict[str, Transcript]:
    """Query every backend concurrently.

    If any backend fails, :class:`TranscriptionFailed` is raised carrying
    both the per-backend errors and the successful transcripts.
    """
    ids = [b.asr_id for b in backends]
    if len(set(ids)) != len(ids):
        raise ConfigError(f"duplicate asr_id among backends: {ids}")
    if not backends:
        return {}

    results: dict[str, Transcript] = {}
    failures: dict[str, Exception] = {}
    with ThreadPoolExecutor(max_workers=len(backends)) as pool:
        futures = {b.asr_id: pool.submit(transcribe, b, audio_id, audio_bytes) for b in backends}
        for asr_id, fut in futures.items():
            try:
                results[asr_id] = fut.result()
            except Exception as exc:  # noqa: BLE001 - reported per backend
                failures[asr_id] = exc
    if failures:
        raise TranscriptionFailed(failures, results)
    return results
