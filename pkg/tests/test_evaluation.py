import csv
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mvpdetect.classifiers import ThresholdModel, train
from mvpdetect.classifiers.base import Classifier
from mvpdetect.errors import DegenerateTraining, InvalidSplit, LabelError
from mvpdetect.evaluation import (
    EvalReport,
    aggregate_scores,
    cross_validate,
    defense_rate,
    evaluate,
    format_cv_table,
    kfold_indices,
    kfold_split,
    roc,
    score_histogram,
    timing_report,
)
from mvpdetect.features import FeatureVector, SystemConfig
from mvpdetect.ingest import BackendConfig, Transcript, TranscriptStore


def fv(score, label, audio_id="x"):
    return FeatureVector(audio_id, (float(score),), label)


class Constant(Classifier):
    kind = "constant"

    def __init__(self, value):
        super().__init__(1)
        self.value = value

    def decision_values(self, X):
        X = self._check(X)
        return np.full(len(X), self.value)

    def _is_ae(self, values):
        return values > 0


def mann_whitney(benign, ae):
    """Probability that an ae score ranks below a benign score, ties as 1/2."""
    wins = sum(1.0 if a < b else 0.5 if a == b else 0.0 for a in ae for b in benign)
    return wins / (len(ae) * len(benign))


# ---------------------------------------------------------------- folds

def test_kfold_sizes():
    labels = ["benign"] * 2400 + ["ae"] * 2400
    folds = kfold_indices(labels, 5, seed=0)
    assert [len(f) for f in folds] == [960] * 5
    assert sorted(len(f) for f in kfold_indices(["a"] * 10, 3, seed=0)) == [3, 3, 4]


def test_kfold_stratified():
    labels = ["benign"] * 70 + ["ae"] * 30
    for fold in kfold_indices(labels, 5, seed=1):
        assert sum(labels[i] == "ae" for i in fold) == 6


@given(st.lists(st.sampled_from(["ae", "benign", None]), min_size=2, max_size=60), st.integers(2, 7),
       st.integers(0, 1000))
def test_kfold_partition(labels, k, seed):
    if k > len(labels):
        with pytest.raises(InvalidSplit):
            kfold_indices(labels, k, seed)
        return
    folds = kfold_indices(labels, k, seed)
    flat = [i for f in folds for i in f]
    assert sorted(flat) == list(range(len(labels)))
    sizes = [len(f) for f in folds]
    assert max(sizes) - min(sizes) <= 1
    assert folds == kfold_indices(labels, k, seed)


def test_kfold_errors():
    with pytest.raises(InvalidSplit):
        kfold_indices(["a"] * 5, 1, 0)
    with pytest.raises(InvalidSplit):
        kfold_split([fv(0.5, "ae")] * 2, 3)


# ---------------------------------------------------------------- evaluate

def test_evaluate_all_correct():
    data = [fv(0.2, "ae"), fv(0.9, "benign")] * 10
    rep = evaluate(ThresholdModel(0.5), data)
    assert (rep.accuracy, rep.fpr, rep.fnr) == (1.0, 0.0, 0.0)


def test_evaluate_one_false_positive_in_480():
    data = [fv(0.9, "benign", f"b{i}") for i in range(479)] + [fv(0.1, "benign", "odd")]
    rep = evaluate(ThresholdModel(0.5), data)
    assert rep.fp == 1 and rep.tn == 479
    assert rep.fpr == pytest.approx(1 / 480)
    assert rep.fnr is None


def test_evaluate_constant_benign():
    data = [fv(0.1, "ae"), fv(0.9, "benign")] * 25
    rep = evaluate(Constant(-1.0), data)
    assert rep.accuracy == 0.5 and rep.fnr == 1.0 and rep.fpr == 0.0


def test_evaluate_errors():
    with pytest.raises(InvalidSplit):
        evaluate(Constant(1.0), [])
    with pytest.raises(LabelError):
        evaluate(Constant(1.0), [fv(0.5, None)])


@given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50), st.integers(0, 50))
def test_confusion_identities(tp, fp, tn, fn):
    rep = EvalReport(tp, fp, tn, fn)
    if rep.total:
        assert rep.accuracy == (tp + tn) / (tp + fp + tn + fn)
    if fp + tn:
        assert rep.fpr == fp / (fp + tn)
    if fn + tp:
        assert rep.fnr == fn / (fn + tp)
        assert rep.tpr + rep.fnr == pytest.approx(1.0)


# ---------------------------------------------------------------- cross validation

def _separable(n=100):
    rng = random.Random(0)
    return ([fv(rng.uniform(0.0, 0.4), "ae", f"a{i}") for i in range(n)]
            + [fv(rng.uniform(0.6, 1.0), "benign", f"b{i}") for i in range(n)])


def test_cross_validate_separable():
    rep = cross_validate(lambda d: train("svm", d), _separable(), k=5, seed=0)
    assert len(rep.folds) == 5
    assert rep.fold_stats("accuracy") == (1.0, 0.0)
    assert rep.total == 200


def test_cross_validate_constant_trainer_has_zero_std():
    rep = cross_validate(lambda d: Constant(1.0), _separable(), k=5, seed=3)
    for name in ("accuracy", "fpr", "fnr"):
        assert rep.fold_stats(name)[1] == 0.0
    assert rep.fold_stats("accuracy")[0] == 0.5


def test_cross_validate_reports_degenerate_fold():
    data = [fv(0.1, "ae"), fv(0.9, "benign")] + [fv(0.8, "benign", f"b{i}") for i in range(8)]

    def trainer(d):
        return train("svm", d)

    with pytest.raises(DegenerateTraining) as exc:
        cross_validate(trainer, data, k=2, seed=0)
    assert exc.value.fold in (0, 1)


def test_report_to_dict_and_table():
    rep = cross_validate(lambda d: train("knn", d), _separable(), k=5, seed=0)
    doc = rep.to_dict()
    assert doc["fold_summary"]["std"] == "population"
    assert doc["fold_summary"]["accuracy"] == {"mean": 1.0, "std": 0.0}
    table = format_cv_table({("KNN", "DS0+{DS1}"): rep})
    assert "100.00% / 0.00%" in table and "DS0+{DS1}" in table


# ---------------------------------------------------------------- defense rate

def test_defense_rate():
    model = ThresholdModel(0.5)
    aes = [fv(0.1, "ae", f"a{i}") for i in range(1198)] + [fv(0.9, "ae", "m1"), fv(0.95, "ae", "m2")]
    assert defense_rate(model, aes) == pytest.approx(0.99833, abs=1e-5)
    assert defense_rate(model, [fv(0.1, "ae")]) == 1.0
    assert defense_rate(model, [fv(0.9, "ae")]) == 0.0
    with pytest.raises(InvalidSplit):
        defense_rate(model, [])
    with pytest.raises(LabelError):
        defense_rate(model, [fv(0.1, "ae"), fv(0.9, "benign")])


# ---------------------------------------------------------------- ROC

def test_roc_examples():
    assert roc([1.0] * 10, [0.5] * 10).auc == 1.0
    assert roc([0.9], [0.4]).auc == 1.0
    same = [0.1, 0.5, 0.5, 0.7, 0.9]
    assert roc(same, same).auc == pytest.approx(0.5, abs=0.01)
    with pytest.raises(InvalidSplit):
        roc([], [0.5])


@given(st.lists(st.floats(0, 1), min_size=1, max_size=20), st.lists(st.floats(0, 1), min_size=1, max_size=20))
def test_roc_shape_and_mann_whitney(benign, ae):
    curve = roc(benign, ae)
    assert curve.points[0] == (0.0, 0.0)
    assert curve.points[-1] == (1.0, 1.0)
    fprs = [p[0] for p in curve.points]
    tprs = [p[1] for p in curve.points]
    assert fprs == sorted(fprs) and tprs == sorted(tprs)
    assert 0.0 <= curve.auc <= 1.0
    assert curve.auc == pytest.approx(mann_whitney(benign, ae), abs=1e-9)


def test_aggregate_scores():
    assert aggregate_scores([FeatureVector("a", (0.9, 0.3, 0.8))]) == [0.3]


# ---------------------------------------------------------------- histogram

def test_histogram_examples(tmp_path):
    benign = [FeatureVector(f"b{i}", (1.0, 1.0), "benign") for i in range(5)]
    h = score_histogram(benign, bins=20)
    assert h.counts["benign"][-1] == 10 and sum(h.counts["benign"]) == 10
    assert h.edges[0] == 0.0 and h.edges[-1] == 1.0 and len(h.edges) == 21

    empty = score_histogram([], bins=10)
    assert all(c == 0 for c in empty.counts["benign"] + empty.counts["ae"])
    assert empty.overlap() == 0.0

    mixed = benign + [FeatureVector("a", (0.2, 0.97), "ae")]
    h = score_histogram(mixed, bins=20)
    assert h.overlap() == pytest.approx(0.5)

    h.write_csv(tmp_path / "h.csv")
    rows = list(csv.reader(open(tmp_path / "h.csv")))
    assert rows[0] == ["bin_lo", "bin_hi", "benign", "ae"]
    assert len(rows) == 21
    with pytest.raises(ValueError):
        score_histogram(benign, bins=1)


# ---------------------------------------------------------------- timing

def _store():
    return TranscriptStore([Transcript("a1", "reference", "open the door please"),
                            Transcript("a1", "T", "open the door please"),
                            Transcript("a1", "A", "open the door"),
                            Transcript("a1", "B", "open a door please")])


def test_timing_file_backends():
    store = _store()
    cfg = SystemConfig("T", ("A", "B"))
    backends = [BackendConfig(a, "file", store=store) for a in cfg.asr_ids]
    rep = timing_report(cfg, backends, ThresholdModel(0.5, 2), ["a1"] * 20)
    assert rep.n_samples == 20
    assert min(rep.recognition_s, rep.similarity_s, rep.classification_s) >= 0
    assert rep.recognition_s < 0.01
    assert rep.similarity_s + rep.classification_s < 1e-3
    assert timing_report(cfg, backends, ThresholdModel(0.5, 2), []).n_samples == 0


def test_timing_recognition_is_max_of_parallel_backends():
    store = _store()
    cfg = SystemConfig("M1", ("M2",))
    backends = [BackendConfig("M1", "mock", store=store, latency_s=0.05),
                BackendConfig("M2", "mock", store=store, latency_s=0.10)]
    rep = timing_report(cfg, backends, ThresholdModel(0.5), ["a1"] * 3)
    assert 0.10 <= rep.recognition_s <= 0.12
