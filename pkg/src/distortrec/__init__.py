"""Interpretable weighted N-gram recognition of cognitive distortions in text."""

from .corpus import DISTORTION_LABELS, LabeledText, SplitPlan, load_dataset, make_splits
from .learning import LearningConfig, SELECTION_METRICS, collect_stats, build_model
from .model import Model, DistortionDictionary, load_model, save_model, diff_models, edit_entry
from .recognizer import RecognitionConfig, RecognitionResult, MatchSpan, recognize, decide, highlight
from .textprep import Token, TokenizedText, split_sentences, tokenize
from .estimator import DistortionNgramClassifier

__version__ = "0.1.0"

__all__ = [
    "DISTORTION_LABELS",
    "LabeledText",
    "SplitPlan",
    "load_dataset",
    "make_splits",
    "LearningConfig",
    "SELECTION_METRICS",
    "collect_stats",
    "build_model",
    "Model",
    "DistortionDictionary",
    "load_model",
    "save_model",
    "diff_models",
    "edit_entry",
    "RecognitionConfig",
    "RecognitionResult",
    "MatchSpan",
    "recognize",
    "decide",
    "highlight",
    "Token",
    "TokenizedText",
    "split_sentences",
    "tokenize",
    "DistortionNgramClassifier",
]
