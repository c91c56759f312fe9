"""Dictionary learning: corpus statistics, selection metrics, thresholding.

Candidate N-grams (orders 1..NM, never crossing sentence boundaries) are
scored per distortion with one of nine selection metrics, max-normalized
per distortion, filtered by the inclusion threshold IT, and the surviving
normalized scores become the dictionary weights.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .corpus import LabeledText
from .model import DistortionDictionary, Model, NGram
from .textprep import tokenize

SELECTION_METRICS = ("F", "UF", "FN", "UFN", "TFIDF", "FCR", "CFR", "MR", "NLMI")

_SM_ALIASES = {"TF-IDF": "TFIDF", "TF_IDF": "TFIDF"}


def normalize_sm(sm: str) -> str:
    sm = _SM_ALIASES.get(sm.upper(), sm.upper())
    if sm not in SELECTION_METRICS:
        raise ValueError(f"unknown selection metric {sm!r}; choose from {SELECTION_METRICS}")
    return sm


@dataclass
class LearningConfig:
    nm: int = 2
    sm: str = "FCR"
    it: int = 0
    # "per_distortion" (default) or "global" max used for normalization
    norm_scope: str = "per_distortion"

    def __post_init__(self):
        if not 1 <= self.nm <= 5:
            raise ValueError(f"NM must be in 1..5, got {self.nm}")
        self.sm = normalize_sm(self.sm)
        if not 0 <= self.it <= 90:
            raise ValueError(f"IT must be in 0..90, got {self.it}")
        if self.norm_scope not in ("per_distortion", "global"):
            raise ValueError(f"bad norm_scope {self.norm_scope!r}")


@dataclass
class CorpusStats:
    """Counts collected over a training corpus for N-grams of order 1..nm."""
    nm: int
    n_distortions: int                                   # |D|
    G: Counter = field(default_factory=Counter)          # corpus frequency of g
    UG: Counter = field(default_factory=Counter)         # texts containing g
    D_freq: Counter = field(default_factory=Counter)     # texts labeled d
    G_total: Counter = field(default_factory=Counter)    # N-gram occurrences in texts labeled d
    F: Counter = field(default_factory=Counter)          # (g, d) occurrence count
    UF: Counter = field(default_factory=Counter)         # (g, d) text count
    uf_by_g: Counter = field(default_factory=Counter)    # sum_d UF[g, d]
    uf_by_d: Counter = field(default_factory=Counter)    # sum_g UF[g, d]
    D_g: Counter = field(default_factory=Counter)        # distortions with UF[g, d] > 0
    candidates: dict = field(default_factory=dict)       # d -> set of g with UF > 0

    def merge(self, other: "CorpusStats") -> "CorpusStats":
        """Combine partial counters (commutative; enables parallel collection)."""
        if other.nm != self.nm:
            raise ValueError("cannot merge stats with different NM")
        for name in ("G", "UG", "D_freq", "G_total", "F", "UF", "uf_by_g", "uf_by_d"):
            getattr(self, name).update(getattr(other, name))
        self._finalize()
        return self

    def _finalize(self):
        self.D_g = Counter()
        self.candidates = defaultdict(set)
        for (g, d), v in self.UF.items():
            if v > 0:
                self.D_g[g] += 1
                self.candidates[d].add(g)


def text_ngrams(text: str, nm: int) -> list[NGram]:
    """All N-grams of order 1..nm in the text, per sentence, with multiplicity."""
    tt = tokenize(text)
    out: list[NGram] = []
    toks = tt.token_texts
    for lo, hi in tt.sentences:
        sent = toks[lo:hi]
        for n in range(1, nm + 1):
            for i in range(len(sent) - n + 1):
                out.append(tuple(sent[i:i + n]))
    return out


def collect_stats(train: list[LabeledText], nm: int, n_distortions: int = 10) -> CorpusStats:
    """Count corpus-wide and per-distortion N-gram statistics.

    Multi-label texts contribute full counts to each of their labels; texts
    with no labels still contribute to the corpus-wide G and UG counts.
    """
    if not 1 <= nm <= 5:
        raise ValueError(f"NM must be in 1..5, got {nm}")
    if not train:
        raise ValueError("empty training corpus")
    stats = CorpusStats(nm=nm, n_distortions=n_distortions)
    for rec in train:
        grams = text_ngrams(rec.text, nm)
        counts = Counter(grams)
        stats.G.update(counts)
        for g in counts:
            stats.UG[g] += 1
        for d in rec.labels:
            stats.D_freq[d] += 1
            stats.G_total[d] += len(grams)
            for g, c in counts.items():
                stats.F[(g, d)] += c
                stats.UF[(g, d)] += 1
                stats.uf_by_g[g] += 1
                stats.uf_by_d[d] += 1
    stats._finalize()
    return stats


def score(stats: CorpusStats, g: NGram, d: str, sm: str) -> float:
    """Raw selection-metric score of N-gram g for distortion d."""
    sm = normalize_sm(sm)
    uf = stats.UF[(g, d)]
    if sm == "F":
        return float(stats.F[(g, d)])
    if sm == "UF":
        return float(uf)
    if sm == "FN":
        return stats.F[(g, d)] / stats.G[g]
    if sm == "UFN":
        return uf / stats.UG[g]
    if sm == "TFIDF":
        fn = stats.F[(g, d)] / stats.G[g]
        return fn * math.log(stats.n_distortions / stats.D_g[g])
    if sm == "FCR":
        return uf / stats.uf_by_g[g]
    if sm == "CFR":
        return uf / stats.uf_by_d[d]
    if sm == "MR":
        return uf * uf / (stats.uf_by_g[g] * stats.uf_by_d[d])
    if sm == "NLMI":
        return uf * uf / (stats.D_freq[d] * stats.UG[g])
    raise AssertionError(sm)


def build_model(stats: CorpusStats, cfg: LearningConfig,
                labels: tuple[str, ...] | None = None) -> Model:
    """Score, normalize, threshold, and assemble the weighted dictionaries.

    Per distortion: every g with UF > 0 is scored, scores are divided by the
    maximum (per distortion by default), and entries with normalized
    score * 100 strictly above IT are kept with the normalized score as
    weight. Entries below 1e-6 are dropped: they are unserializable and
    cannot affect detection.
    """
    if labels is None:
        labels = tuple(sorted(stats.candidates))
    raw: dict[str, dict[NGram, float]] = {}
    for d in labels:
        raw[d] = {g: score(stats, g, d, cfg.sm) for g in stats.candidates.get(d, ())}
    global_max = max((max(v.values(), default=0.0) for v in raw.values()), default=0.0)
    dictionaries = []
    for d in labels:
        scores = raw[d]
        maxv = global_max if cfg.norm_scope == "global" else max(scores.values(), default=0.0)
        entries = {}
        if maxv > 0:
            for g, s in scores.items():
                w = s / maxv
                if w * 100.0 > cfg.it and w >= 1e-6:
                    entries[g] = w
        dictionaries.append(DistortionDictionary(distortion=d, entries=entries))
    metadata = {"SM": cfg.sm, "IT": str(cfg.it), "created-by": "distortrec"}
    return Model(dictionaries=tuple(dictionaries), metadata=metadata)
