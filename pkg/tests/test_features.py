import pytest

from mvpdetect.errors import ConfigError, MissingTranscript, ParseError
from mvpdetect.features import (
    FeatureVector,
    SystemConfig,
    build_dataset,
    build_feature_vector,
    read_features,
    write_features,
)
from mvpdetect.ingest import Transcript, TranscriptStore
from mvpdetect.similarity import METHODS, SimilarityMethod, score

SORE_EYES = {
    "DS0": "A sight for sore eyes",
    "DS1": "I wish you live",
    "GCS": "I wish you wouldn't.",
    "AT": "I wish you wouldn't.",
}


def test_system_config_validation():
    with pytest.raises(ConfigError):
        SystemConfig("DS0", ())
    with pytest.raises(ConfigError):
        SystemConfig("DS0", ("DS1", "DS1"))
    with pytest.raises(ConfigError):
        SystemConfig("DS0", ("DS0", "DS1"))
    cfg = SystemConfig("DS0", ["DS1", "GCS"], "jaccard")
    assert cfg.auxiliary_asrs == ("DS1", "GCS")
    assert cfg.method == SimilarityMethod.parse("jaccard")
    assert cfg.describe() == "DS0+{DS1,GCS}"
    assert SystemConfig.from_dict(cfg.to_dict()) == cfg


def test_embedded_command_vector_is_low():
    cfg = SystemConfig("DS0", ("DS1", "GCS", "AT"))
    fv = build_feature_vector(cfg, SORE_EYES, "sore-eyes")
    assert len(fv.scores) == 3
    # bound checked by computing the metric directly on the strings
    for aux, s in zip(cfg.auxiliary_asrs, fv.scores):
        assert s == score(cfg.method, SORE_EYES["DS0"], SORE_EYES[aux])
        assert s < 0.8


def test_identity_and_single_aux():
    cfg = SystemConfig("DS0", ("DS1", "GCS", "AT"))
    same = {asr: "open the front door" for asr in cfg.asr_ids}
    assert build_feature_vector(cfg, same).scores == (1.0, 1.0, 1.0)
    one = SystemConfig("T", ("A",))
    assert build_feature_vector(one, {"T": "hello world", "A": "hello world"}).scores == (1.0,)


def test_missing_transcript_names_asr():
    cfg = SystemConfig("DS0", ("DS1", "GCS"))
    with pytest.raises(MissingTranscript) as exc:
        build_feature_vector(cfg, {"DS0": "a", "DS1": "b"}, "x")
    assert exc.value.asr_id == "GCS"


def _store(rows):
    return TranscriptStore(Transcript(a, asr, t) for a, asr, t in rows)


def test_build_dataset():
    cfg = SystemConfig("T", ("A", "B"))
    store = _store([
        ("1", "T", "hello"), ("1", "A", "hello"), ("1", "B", "yellow"),
        ("2", "T", "open the door"), ("2", "A", "close it"), ("2", "B", "open the door"),
    ])
    out = build_dataset(cfg, store, [("2", "ae"), ("1", "benign")])
    assert [v.audio_id for v in out] == ["2", "1"]
    assert [v.label for v in out] == ["ae", "benign"]
    assert build_dataset(cfg, store, []) == []
    partial = _store([("1", "T", "x"), ("1", "A", "x")])
    with pytest.raises(MissingTranscript) as exc:
        build_dataset(cfg, partial, [("1", "benign")])
    assert exc.value.audio_id == "1" and exc.value.asr_id == "B"


@pytest.mark.parametrize("method", METHODS, ids=lambda m: m.name)
def test_permuting_auxiliaries_permutes_scores(method):
    texts = {"T": "a sight for sore eyes", "A": "i wish you live", "B": "a site for sore eyes",
             "C": "i wish you wouldn't"}
    base = build_feature_vector(SystemConfig("T", ("A", "B", "C"), method), texts).scores
    perm = build_feature_vector(SystemConfig("T", ("C", "A", "B"), method), texts).scores
    assert perm == (base[2], base[0], base[1])


def test_disjoint_texts_under_jaccard_give_zero_vector():
    cfg = SystemConfig("T", ("A", "B"), "jaccard")
    fv = build_feature_vector(cfg, {"T": "alpha beta", "A": "gamma", "B": "delta epsilon"})
    assert fv.scores == (0.0, 0.0)


def test_csv_round_trip(tmp_path):
    vectors = [FeatureVector("a1", (0.1, 1 / 3), "ae"), FeatureVector("b,2", (1.0, 0.9999999999999), "benign")]
    path = tmp_path / "fv.csv"
    write_features(path, vectors, ("DS1", "GCS"))
    assert path.read_text().splitlines()[0] == "audio_id,DS1,GCS,label"
    table = read_features(path)
    assert table.auxiliary_asrs == ("DS1", "GCS")
    assert table.vectors == vectors


def test_csv_without_labels(tmp_path):
    path = tmp_path / "fv.csv"
    write_features(path, [FeatureVector("x", (0.5,))], ("A",))
    assert path.read_text().splitlines()[0] == "audio_id,A"
    assert read_features(path).vectors[0].label is None


def test_csv_errors(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("audio_id,A,label\nx,1.5,ae\n")
    with pytest.raises(ParseError) as exc:
        read_features(path)
    assert exc.value.line == 2
    path.write_text("audio_id,A,label\nx,abc,ae\n")
    with pytest.raises(ParseError):
        read_features(path)
