"""String similarity metrics and the six comparison methods.

``jaro`` and ``jaro_winkler`` are character-level; ``jaccard`` and
``cosine`` work on whitespace-separated words.  A :class:`SimilarityMethod`
pairs one metric with an optional phonetic-encoding step.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .textnorm import PhoneticEncoder, encode_transcript, normalize, soundex

__all__ = [
    "Metric",
    "SimilarityMethod",
    "METHODS",
    "PE_JARO_WINKLER",
    "jaro",
    "jaro_winkler",
    "jaccard",
    "cosine",
    "score",
]

WINKLER_P = 0.1
WINKLER_MAX_PREFIX = 4


def jaro(a: str, b: str) -> float:
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    if a == b:
        return 1.0

    la, lb = len(a), len(b)
    window = max(max(la, lb) // 2 - 1, 0)
    a_flags = [False] * la
    b_flags = [False] * lb

    m = 0
    for i, ch in enumerate(a):
        lo = max(0, i - window)
        hi = min(lb, i + window + 1)
        for j in range(lo, hi):
            if not b_flags[j] and b[j] == ch:
                a_flags[i] = b_flags[j] = True
                m += 1
                break
    if m == 0:
        return 0.0

    # half the number of matched characters that appear in a different order
    half_t = 0
    j = 0
    for i in range(la):
        if a_flags[i]:
            while not b_flags[j]:
                j += 1
            if a[i] != b[j]:
                half_t += 1
            j += 1
    t = half_t / 2
    return (m / la + m / lb + (m - t) / m) / 3


def jaro_winkler(a: str, b: str, p: float = WINKLER_P, max_prefix: int = WINKLER_MAX_PREFIX) -> float:
    """Jaro similarity plus the common-prefix bonus ``l * p * (1 - jaro)``.

    The bonus is applied unconditionally (no boost threshold).
    """
    sim = jaro(a, b)
    prefix = 0
    for x, y in zip(a[:max_prefix], b[:max_prefix]):
        if x != y:
            break
        prefix += 1
    return min(1.0, sim + prefix * p * (1.0 - sim))


def jaccard(a: str, b: str) -> float:
    wa, wb = set(a.split()), set(b.split())
    if not wa and not wb:
        return 1.0
    if not wa or not wb:
        return 0.0
    return len(wa & wb) / len(wa | wb)


def cosine(a: str, b: str) -> float:
    ca, cb = Counter(a.split()), Counter(b.split())
    if not ca and not cb:
        return 1.0
    if not ca or not cb:
        return 0.0
    dot = sum(n * cb[w] for w, n in ca.items())
    norm = math.sqrt(sum(n * n for n in ca.values()) * sum(n * n for n in cb.values()))
    return min(1.0, dot / norm)


class Metric(str, Enum):
    COSINE = "cosine"
    JACCARD = "jaccard"
    JARO_WINKLER = "jaro_winkler"


_METRIC_FUNCS = {
    Metric.COSINE: cosine,
    Metric.JACCARD: jaccard,
    Metric.JARO_WINKLER: jaro_winkler,
}
_DISPLAY = {
    Metric.COSINE: "Cosine",
    Metric.JACCARD: "Jaccard",
    Metric.JARO_WINKLER: "JaroWinkler",
}


@dataclass(frozen=True)
class SimilarityMethod:
    metric: Metric
    phonetic: bool

    @property
    def name(self) -> str:
        """Identifier used in configs and on the command line, e.g. ``pe_jaro_winkler``."""
        return ("pe_" if self.phonetic else "") + self.metric.value

    @property
    def display_name(self) -> str:
        return ("PE_" if self.phonetic else "") + _DISPLAY[self.metric]

    @classmethod
    def parse(cls, text: str) -> "SimilarityMethod":
        """Accept ``pe_jaro_winkler``, ``PE_JaroWinkler``, ``pe-jarowinkler`` and so on."""
        key = text.strip().lower().replace("-", "_")
        phonetic = key.startswith("pe_")
        if phonetic:
            key = key[3:]
        key = key.replace("_", "")
        for metric in Metric:
            if metric.value.replace("_", "") == key:
                return cls(metric, phonetic)
        valid = ", ".join(m.name for m in METHODS)
        raise ValueError(f"unknown similarity method {text!r}; expected one of: {valid}")

    def __str__(self) -> str:
        return self.name


METHODS = tuple(SimilarityMethod(m, pe) for pe in (False, True) for m in Metric)
PE_JARO_WINKLER = SimilarityMethod(Metric.JARO_WINKLER, True)


def prepare(method: SimilarityMethod, raw_text: str, encoder: PhoneticEncoder = soundex) -> str:
    """Normalized (and, for phonetic methods, encoded) form fed to the metric."""
    tokens = normalize(raw_text)
    if method.phonetic:
        return encode_transcript(tokens, encoder)
    return " ".join(tokens)


def compare_prepared(method: SimilarityMethod, a: str, b: str) -> float:
    return _METRIC_FUNCS[method.metric](a, b)


def score(method: SimilarityMethod | str, a: str, b: str, encoder: PhoneticEncoder = soundex) -> float:
    """Similarity in [0, 1] between two raw transcripts under ``method``."""
    if isinstance(method, str):
        method = SimilarityMethod.parse(method)
    return compare_prepared(method, prepare(method, a, encoder), prepare(method, b, encoder))
