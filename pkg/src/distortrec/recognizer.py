"""Length-priority masked N-gram matching over tokenized text.

Matching scans N-gram orders from the longest down to unigrams. A matched
N-gram claims its token positions via a shared mask, so no shorter N-gram
contained in an already matched span is ever counted ("priority on order").
An N-gram shared by several dictionaries credits each of them before the
mask is zeroed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import Model, NGram
from .textprep import TokenizedText


@dataclass
class RecognitionConfig:
    dt: int = 50
    ls: bool = True            # logarithmic scaling of normalized scores
    weighted: bool = True      # use dictionary weights (else all H = 1.0)
    cross_sentence: bool = False  # allow matches spanning sentence boundaries

    def __post_init__(self):
        if not 0 <= self.dt <= 90:
            raise ValueError(f"DT must be in 0..90, got {self.dt}")


@dataclass(frozen=True)
class MatchSpan:
    distortion: str
    ngram: NGram
    token_start: int
    token_end: int
    char_start: int
    char_end: int
    weight: float
    contribution: float


@dataclass(frozen=True)
class RecognitionResult:
    scores: dict[str, float]
    raw_counts: dict[str, float]
    decisions: dict[str, bool]
    matches: tuple[MatchSpan, ...]
    length: int


class NgramIndex:
    """Model lookup structure reusable across many recognize() calls."""

    def __init__(self, model: Model):
        self.labels = list(model.labels)
        self.nm = model.nm
        self.entries: dict[NGram, list[tuple[str, float]]] = {}
        for d in model.dictionaries:
            for g, w in d.entries.items():
                self.entries.setdefault(g, []).append((d.distortion, w))


def scale_score(raw: float, length: int, ls: bool) -> float:
    """Normalize a raw count to [0, 1]; log scaling is clamped at 1.0."""
    if length == 0:
        return 0.0
    ratio = raw / length
    if ls:
        return min(1.0, 0.5 * math.log10(1.0 + 100.0 * ratio))
    return ratio


def recognize(text: TokenizedText, model: Model | NgramIndex,
              cfg: RecognitionConfig | None = None) -> RecognitionResult:
    """Run masked length-priority matching and score every distortion."""
    cfg = cfg or RecognitionConfig()
    index = model if isinstance(model, NgramIndex) else NgramIndex(model)
    toks = text.token_texts
    l = len(toks)
    counts = {d: 0.0 for d in index.labels}
    matches: list[MatchSpan] = []

    if l > 0 and index.nm > 0:
        # sentence id per token, for blocking cross-sentence windows
        sent_id = [0] * l
        for s, (lo, hi) in enumerate(text.sentences):
            for t in range(lo, hi):
                sent_id[t] = s
        mask = [1] * l
        for n in range(min(index.nm, l), 0, -1):
            for i in range(l - n + 1):
                if not all(mask[i:i + n]):
                    continue
                if not cfg.cross_sentence and sent_id[i] != sent_id[i + n - 1]:
                    continue
                g = tuple(toks[i:i + n])
                owners = index.entries.get(g)
                if not owners:
                    continue
                for d, w in owners:
                    h = w if cfg.weighted else 1.0
                    counts[d] += n * h
                    matches.append(MatchSpan(
                        distortion=d, ngram=g,
                        token_start=i, token_end=i + n,
                        char_start=text.tokens[i].start,
                        char_end=text.tokens[i + n - 1].end,
                        weight=h, contribution=n * h,
                    ))
                mask[i:i + n] = [0] * n

    scores = {d: scale_score(c, l, cfg.ls) for d, c in counts.items()}
    decisions = decide_scores(scores, cfg.dt)
    return RecognitionResult(scores=scores, raw_counts=counts,
                             decisions=decisions, matches=tuple(matches), length=l)


def decide_scores(scores: dict[str, float], dt: int) -> dict[str, bool]:
    """Detection rule: score on the 0..100 scale strictly above DT."""
    return {d: s * 100.0 > dt for d, s in scores.items()}


def decide(result: RecognitionResult, dt: int) -> dict[str, bool]:
    return decide_scores(result.scores, dt)


def highlight(result: RecognitionResult, include_undetected: bool = False) -> dict[str, list[tuple[int, int]]]:
    """Source-character intervals of matches, per detected distortion."""
    out: dict[str, list[tuple[int, int]]] = {}
    for m in result.matches:
        if include_undetected or result.decisions.get(m.distortion):
            out.setdefault(m.distortion, []).append((m.char_start, m.char_end))
    for spans in out.values():
        spans.sort()
    return out


def result_to_dict(result: RecognitionResult) -> dict:
    """JSON wire format shared by the CLI and the audit server."""
    return {
        "scores": {d: result.scores[d] for d in sorted(result.scores)},
        "decisions": {d: result.decisions[d] for d in sorted(result.decisions)},
        "matches": [
            {
                "distortion": m.distortion,
                "tokens": list(m.ngram),
                "char_start": m.char_start,
                "char_end": m.char_end,
                "weight": m.weight,
            }
            for m in result.matches
        ],
        "length": result.length,
    }
