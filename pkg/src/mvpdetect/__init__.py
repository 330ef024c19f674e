"""Adversarial audio detection by cross-checking transcripts from several ASRs.

An adversarial example fools the recognizer it was crafted for but rarely
transfers to others, so the target's transcript disagrees with those of
auxiliary recognizers.  Per-auxiliary similarity scores form a feature
vector that a binary classifier labels benign or adversarial.
"""

from .classifiers import (
    DetectionResult,
    ForestModel,
    KnnModel,
    SvmModel,
    ThresholdModel,
    load_model,
    save_model,
    select_threshold,
    train_forest,
    train_knn,
    train_svm,
)
from .features import FeatureVector, SystemConfig, build_dataset, build_feature_vector
from .ingest import BackendConfig, Transcript, TranscriptStore, load_store, transcribe, transcribe_all
from .similarity import METHODS, PE_JARO_WINKLER, SimilarityMethod, score
from .textnorm import encode_transcript, encode_word, normalize

__version__ = "0.1.0"

__all__ = [
    "BackendConfig", "DetectionResult", "FeatureVector", "ForestModel", "KnnModel", "METHODS",
    "PE_JARO_WINKLER", "SimilarityMethod", "SvmModel", "SystemConfig", "ThresholdModel",
    "Transcript", "TranscriptStore", "build_dataset", "build_feature_vector", "encode_transcript",
    "encode_word", "load_model", "load_store", "normalize", "save_model", "score",
    "select_threshold", "train_forest", "train_knn", "train_svm", "transcribe", "transcribe_all",
]
