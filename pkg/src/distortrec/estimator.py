"""Sklearn-style estimator wrapping learning + recognition.

fit() learns the weighted dictionaries from raw texts and label sets,
decision_function() returns the normalized per-distortion scores, and
predict() applies the detection threshold. Composes with sklearn model
selection utilities via get_params/set_params.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .convkernel import ConvolutionRecognizer
from .corpus import DISTORTION_LABELS, LabeledText
from .learning import LearningConfig, build_model, collect_stats
from .recognizer import NgramIndex, RecognitionConfig, recognize
from .textprep import tokenize


class DistortionNgramClassifier(BaseEstimator):
    """Multi-label classifier over weighted per-class N-gram dictionaries.

    Parameters
    ----------
    nm : maximum N-gram order (1..5).
    sm : selection metric name (F, UF, FN, UFN, TFIDF, FCR, CFR, MR, NLMI).
    it : inclusion threshold percent (0..90).
    dt : detection threshold percent.
    weighted : use learned weights during matching (else all weights 1.0).
    log_scaling : logarithmic scaling of normalized scores.
    backend : "naive" or "kernel".
    labels : class label tuple; defaults to the 10 canonical distortions.
    """

    def __init__(self, nm=2, sm="FCR", it=0, dt=50, weighted=True,
                 log_scaling=True, backend="naive", labels=DISTORTION_LABELS):
        self.nm = nm
        self.sm = sm
        self.it = it
        self.dt = dt
        self.weighted = weighted
        self.log_scaling = log_scaling
        self.backend = backend
        self.labels = labels

    def fit(self, X, y):
        """Learn dictionaries from texts X and label sets y.

        X is a sequence of strings; y a sequence of iterables of label names
        (empty = no distortion).
        """
        if len(X) != len(y):
            raise ValueError(f"X and y length mismatch: {len(X)} vs {len(y)}")
        if self.backend not in ("naive", "kernel"):
            raise ValueError(f"unknown backend {self.backend!r}")
        records = [
            LabeledText(id=i, text=str(t), labels=frozenset(lbls))
            for i, (t, lbls) in enumerate(zip(X, y))
        ]
        cfg = LearningConfig(nm=self.nm, sm=self.sm, it=self.it)
        stats = collect_stats(records, cfg.nm, n_distortions=len(self.labels))
        self.model_ = build_model(stats, cfg, labels=tuple(self.labels))
        self.classes_ = np.array(self.labels, dtype=object)
        self._engine = (
            ConvolutionRecognizer(self.model_) if self.backend == "kernel"
            else NgramIndex(self.model_)
        )
        return self

    def set_model(self, model):
        """Adopt an externally learned or loaded model without fitting."""
        self.model_ = model
        self.classes_ = np.array(self.labels, dtype=object)
        self._engine = (
            ConvolutionRecognizer(model) if self.backend == "kernel"
            else NgramIndex(model)
        )
        return self

    def _recognize(self, text: str):
        cfg = RecognitionConfig(dt=self.dt, ls=self.log_scaling, weighted=self.weighted)
        tt = tokenize(text)
        if self.backend == "kernel":
            return self._engine.recognize(tt, cfg)
        return recognize(tt, self._engine, cfg)

    def decision_function(self, X):
        """Normalized scores in [0, 1], shape (n_texts, n_labels)."""
        check_is_fitted(self, "model_")
        rows = []
        for text in X:
            result = self._recognize(str(text))
            rows.append([result.scores.get(d, 0.0) for d in self.classes_])
        return np.asarray(rows)

    def predict(self, X):
        """Binary indicator matrix of detections at threshold dt."""
        scores = self.decision_function(X)
        return (scores * 100.0 > self.dt).astype(int)

    def predict_labels(self, X):
        """Detected label sets, one frozenset per input text."""
        pred = self.predict(X)
        return [frozenset(self.classes_[row.astype(bool)]) for row in pred]
