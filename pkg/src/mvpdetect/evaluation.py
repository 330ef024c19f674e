"""Evaluation harness: folds, confusion counts, defense rates, ROC, histograms, timing.

AE is the positive class everywhere, so on an AE-only set the true
positive rate is the defense rate.
"""

from __future__ import annotations

import csv
import time
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .classifiers import Classifier
from .errors import DegenerateTraining, InvalidSplit, LabelError
from .features import FeatureVector, SystemConfig, build_feature_vector
from .ingest import BackendConfig, derive_rng, transcribe_all

METRICS = ("accuracy", "fpr", "fnr")


def kfold_indices(labels: Sequence[str | None], k: int, seed: int) -> list[list[int]]:
    """Stratified, seeded partition of ``range(len(labels))`` into ``k`` folds.

    Each label group is shuffled, the groups are laid end to end and
    positions are dealt round-robin, so fold sizes (overall and per label)
    differ by at most one.
    """
    n = len(labels)
    if k < 2:
        raise InvalidSplit(f"k must be >= 2, got {k}")
    if k > n:
        raise InvalidSplit(f"cannot split {n} samples into {k} folds")
    rng = derive_rng(seed, "kfold")
    groups: dict[str | None, list[int]] = {}
    for i, lab in enumerate(labels):
        groups.setdefault(lab, []).append(i)
    order: list[int] = []
    for lab in sorted(groups, key=lambda g: (g is None, g or "")):
        idx = groups[lab]
        rng.shuffle(idx)
        order.extend(idx)
    folds: list[list[int]] = [[] for _ in range(k)]
    for pos, i in enumerate(order):
        folds[pos % k].append(i)
    return folds


def kfold_split(dataset: Sequence[FeatureVector], k: int = 5, seed: int = 0) -> list[list[FeatureVector]]:
    folds = kfold_indices([v.label for v in dataset], k, seed)
    return [[dataset[i] for i in fold] for fold in folds]


@dataclass
class EvalReport:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0
    folds: list["EvalReport"] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def accuracy(self) -> float | None:
        return (self.tp + self.tn) / self.total if self.total else None

    @property
    def fpr(self) -> float | None:
        """None when the set holds no benign samples."""
        neg = self.fp + self.tn
        return self.fp / neg if neg else None

    @property
    def fnr(self) -> float | None:
        pos = self.fn + self.tp
        return self.fn / pos if pos else None

    @property
    def tpr(self) -> float | None:
        pos = self.fn + self.tp
        return self.tp / pos if pos else None

    def metric(self, name: str) -> float | None:
        return getattr(self, name)

    def fold_stats(self, name: str) -> tuple[float, float] | None:
        """Mean and population standard deviation of a metric across folds.

        Returns None unless the metric is defined on every fold.
        """
        values = [f.metric(name) for f in self.folds]
        if not values or any(v is None for v in values):
            return None
        arr = np.array(values, dtype=float)
        return float(arr.mean()), float(arr.std(ddof=0))

    def to_dict(self) -> dict:
        out = {
            "counts": {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn},
            "accuracy": self.accuracy,
            "fpr": self.fpr,
            "fnr": self.fnr,
        }
        if self.folds:
            out["folds"] = [f.to_dict() for f in self.folds]
            out["fold_summary"] = {"std": "population"}
            for name in METRICS:
                stats = self.fold_stats(name)
                out["fold_summary"][name] = (
                    None if stats is None else {"mean": stats[0], "std": stats[1]})
        return out


def evaluate(model: Classifier, test_set: Sequence[FeatureVector]) -> EvalReport:
    if not test_set:
        raise InvalidSplit("empty test set")
    if any(v.label is None for v in test_set):
        raise LabelError("evaluation needs labelled vectors")
    report = EvalReport()
    for v, res in zip(test_set, model.predict_many(test_set)):
        if v.label == "ae":
            if res.is_ae:
                report.tp += 1
            else:
                report.fn += 1
        elif res.is_ae:
            report.fp += 1
        else:
            report.tn += 1
    return report


Trainer = Callable[[list[FeatureVector]], Classifier]


def cross_validate(trainer: Trainer, dataset: Sequence[FeatureVector], k: int = 5,
                   seed: int = 0) -> EvalReport:
    """Train on k-1 folds, test on the held-out one, for every fold.

    The returned report carries summed counts plus the per-fold reports.
    """
    folds = kfold_indices([v.label for v in dataset], k, seed)
    total = EvalReport()
    for f, held_out in enumerate(folds):
        held = set(held_out)
        train = [dataset[i] for i in range(len(dataset)) if i not in held]
        test = [dataset[i] for i in held_out]
        try:
            model = trainer(train)
        except DegenerateTraining as exc:
            raise DegenerateTraining(str(exc), fold=f) from exc
        rep = evaluate(model, test)
        total.folds.append(rep)
        total.tp += rep.tp
        total.fp += rep.fp
        total.tn += rep.tn
        total.fn += rep.fn
    return total


def defense_rate(model: Classifier, ae_only_set: Sequence[FeatureVector]) -> float:
    if not ae_only_set:
        raise InvalidSplit("defense rate of an empty set")
    if any(v.label == "benign" for v in ae_only_set):
        raise LabelError("defense rate is defined on ae samples only")
    detected = sum(r.is_ae for r in model.predict_many(ae_only_set))
    return detected / len(ae_only_set)


@dataclass
class RocCurve:
    """ROC of the rule ``score < T => ae``.

    ``points[i]`` is the (fpr, tpr) pair at ``thresholds[i]``; thresholds
    increase, so both coordinates are non-decreasing.
    """

    points: list[tuple[float, float]]
    thresholds: list[float]
    auc: float

    def to_dict(self) -> dict:
        return {"auc": self.auc, "points": [list(p) for p in self.points],
                "thresholds": self.thresholds}


def roc(benign_scores: Sequence[float], ae_scores: Sequence[float]) -> RocCurve:
    if len(benign_scores) == 0 or len(ae_scores) == 0:
        raise InvalidSplit("ROC needs both benign and ae scores")
    b = np.sort(np.asarray(benign_scores, dtype=float))
    a = np.sort(np.asarray(ae_scores, dtype=float))
    values = np.unique(np.concatenate([a, b]))
    thresholds = np.append(values, np.nextafter(values[-1], np.inf))
    fpr = np.searchsorted(b, thresholds, side="left") / len(b)
    tpr = np.searchsorted(a, thresholds, side="left") / len(a)
    auc = float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))
    return RocCurve(list(zip(fpr.tolist(), tpr.tolist())), thresholds.tolist(), auc)


def aggregate_scores(vectors: Sequence[FeatureVector]) -> list[float]:
    """One score per vector: the minimum over auxiliaries."""
    return [min(v.scores) for v in vectors]


@dataclass
class Histogram:
    edges: list[float]
    counts: dict[str, list[int]]

    def overlap(self, a: str = "benign", b: str = "ae") -> float:
        """Shared probability mass of two label histograms (0 = disjoint)."""
        ca = np.array(self.counts.get(a, []), dtype=float)
        cb = np.array(self.counts.get(b, []), dtype=float)
        if ca.sum() == 0 or cb.sum() == 0:
            return 0.0
        return float(np.minimum(ca / ca.sum(), cb / cb.sum()).sum())

    def write_csv(self, path: str | Path) -> None:
        labels = list(self.counts)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["bin_lo", "bin_hi", *labels])
            for i in range(len(self.edges) - 1):
                w.writerow([repr(self.edges[i]), repr(self.edges[i + 1]),
                            *(self.counts[lab][i] for lab in labels)])


def score_histogram(fvs: Sequence[FeatureVector], bins: int = 20) -> Histogram:
    """Per-label counts of every score, on ``bins`` uniform bins over [0, 1].

    The last bin is closed on the right so that 1.0 lands in it.
    """
    if bins < 2:
        raise ValueError("bins must be >= 2")
    edges = np.linspace(0.0, 1.0, bins + 1)
    by_label: dict[str, list[float]] = {"benign": [], "ae": []}
    for v in fvs:
        by_label.setdefault(v.label or "unlabeled", []).extend(v.scores)
    counts = {lab: np.histogram(vals, bins=edges)[0].astype(int).tolist()
              for lab, vals in by_label.items()}
    return Histogram(edges.tolist(), counts)


@dataclass
class TimingReport:
    recognition_s: float
    similarity_s: float
    classification_s: float
    n_samples: int = 0

    def to_dict(self) -> dict:
        return {"recognition_s": self.recognition_s, "similarity_s": self.similarity_s,
                "classification_s": self.classification_s, "n_samples": self.n_samples}


def timing_report(config: SystemConfig, backends: Sequence[BackendConfig], model: Classifier,
                  sample_audio_ids: Sequence[str],
                  audio: Mapping[str, bytes] | None = None) -> TimingReport:
    """Average wall-clock seconds per audio for each detection stage.

    Backends are queried in parallel, so the recognition stage costs the
    slowest backend rather than the sum.
    """
    wanted = set(config.asr_ids)
    active = [b for b in backends if b.asr_id in wanted]
    rec = sim = cls = 0.0
    for audio_id in sample_audio_ids:
        blob = audio.get(audio_id) if audio else None
        t0 = time.perf_counter()
        transcripts = transcribe_all(active, audio_id, blob)
        t1 = time.perf_counter()
        fv = build_feature_vector(config, transcripts, audio_id)
        t2 = time.perf_counter()
        model.predict(fv)
        t3 = time.perf_counter()
        rec += t1 - t0
        sim += t2 - t1
        cls += t3 - t2
    n = len(sample_audio_ids)
    if n == 0:
        return TimingReport(0.0, 0.0, 0.0, 0)
    return TimingReport(rec / n, sim / n, cls / n, n)


def _pct(stats: tuple[float, float] | None) -> str:
    if stats is None:
        return "n/a"
    return f"{stats[0] * 100:.2f}% / {stats[1] * 100:.2f}%"


def format_cv_table(results: Mapping[tuple[str, str], EvalReport]) -> str:
    """Plain-text ``mean / std`` table keyed by (classifier, system).

    Rows are classifier x metric, columns are systems; std is the population
    standard deviation over folds.
    """
    classifiers = list(dict.fromkeys(c for c, _ in results))
    systems = list(dict.fromkeys(s for _, s in results))
    header = ["Classifier", "Metric", *systems]
    rows = []
    for c in classifiers:
        for name in METRICS:
            label = "Accuracy" if name == "accuracy" else name.upper()
            rows.append([c, label, *(_pct(results[(c, s)].fold_stats(name))
                                     if (c, s) in results else "-" for s in systems)])
    widths = [max(len(str(r[i])) for r in [header, *rows]) for i in range(len(header))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
    lines += [fmt.format(*r) for r in rows]
    lines.append("(mean / population std across folds)")
    return "\n".join(lines)

