"""Vectorized recognition backend: sliding correlation with reversed kernels.

Texts and dictionary N-grams are embedded in a shared token vocabulary;
each N-gram becomes a kernel whose positionwise agreement with a text
window is computed for every start position. Kernels are stored reversed
and applied back to front, so matches occur in reading order. A full
agreement (y == n) marks a candidate match; a mask post-pass in descending
order replicates the length-priority semantics of the naive recognizer
exactly. The literal unmasked accumulation is available for study.
"""

from __future__ import annotations

import numpy as np

from .model import Model, NGram
from .recognizer import MatchSpan, RecognitionConfig, RecognitionResult, decide_scores, scale_score
from .textprep import TokenizedText


def correlate(text_tokens: list[str], ngram: NGram) -> list[int]:
    """Positionwise agreement counts of the N-gram against every text window.

    y[i] in 0..n counts token positions of the window starting at i that
    equal the corresponding N-gram token (reading order). Empty when the
    N-gram is longer than the text.
    """
    n, l = len(ngram), len(text_tokens)
    if n > l:
        return []
    vocab = {t: k for k, t in enumerate(dict.fromkeys(list(text_tokens) + list(ngram)))}
    x = np.array([vocab[t] for t in text_tokens])
    # reversed storage; applying back to front restores reading order
    h_rev = np.array([vocab[t] for t in reversed(ngram)])
    windows = np.lib.stride_tricks.sliding_window_view(x, n)
    return (windows == h_rev[::-1]).sum(axis=1).tolist()


def match_indicators(y: list[int], n: int) -> list[int]:
    """Complete-match indicator: 1 where the agreement count reaches n."""
    return [1 if v == n else 0 for v in y]


class _KernelBucket:
    """All kernels of one N-gram order, stacked for batch comparison."""

    def __init__(self, n: int, ngrams: list[NGram], owners: list[list[tuple[str, float]]],
                 vocab: dict[str, int]):
        self.n = n
        self.ngrams = ngrams
        self.owners = owners
        # stored reversed (inverse kernel); flipped back at application time
        self.kernels_rev = np.array(
            [[vocab[t] for t in reversed(g)] for g in ngrams], dtype=np.int32
        )

    def candidates(self, ids: np.ndarray) -> np.ndarray:
        """Index of the matching kernel per window start, -1 where none."""
        l = ids.shape[0]
        out = np.full(max(l - self.n + 1, 0), -1, dtype=np.int64)
        if out.size == 0:
            return out
        windows = np.lib.stride_tricks.sliding_window_view(ids, self.n)
        hits = (windows[None, :, :] == self.kernels_rev[:, ::-1][:, None, :]).all(axis=2)
        kernel_idx, pos = np.nonzero(hits)
        # a window equals at most one N-gram, so positions are unique
        out[pos] = kernel_idx
        return out


class ConvolutionRecognizer:
    """Drop-in batch-friendly equivalent of recognizer.recognize()."""

    def __init__(self, model: Model):
        self.labels = list(model.labels)
        self.nm = model.nm
        per_ngram: dict[NGram, list[tuple[str, float]]] = {}
        for d in model.dictionaries:
            for g, w in d.entries.items():
                per_ngram.setdefault(g, []).append((d.distortion, w))
        self.vocab: dict[str, int] = {}
        for g in per_ngram:
            for t in g:
                self.vocab.setdefault(t, len(self.vocab))
        by_n: dict[int, tuple[list[NGram], list[list[tuple[str, float]]]]] = {}
        for g, owners in per_ngram.items():
            grams, ows = by_n.setdefault(len(g), ([], []))
            grams.append(g)
            ows.append(owners)
        self.buckets = {
            n: _KernelBucket(n, grams, ows, self.vocab) for n, (grams, ows) in by_n.items()
        }

    def _text_ids(self, toks: list[str]) -> np.ndarray:
        # out-of-vocabulary tokens can never match; one shared sentinel id
        oov = len(self.vocab)
        return np.array([self.vocab.get(t, oov) for t in toks], dtype=np.int32)

    def recognize(self, text: TokenizedText, cfg: RecognitionConfig | None = None,
                  masked: bool = True) -> RecognitionResult:
        cfg = cfg or RecognitionConfig()
        toks = text.token_texts
        l = len(toks)
        counts = {d: 0.0 for d in self.labels}
        matches: list[MatchSpan] = []

        if l > 0 and self.nm > 0:
            ids = self._text_ids(toks)
            sent_id = np.zeros(l, dtype=np.int32)
            for s, (lo, hi) in enumerate(text.sentences):
                sent_id[lo:hi] = s
            mask = np.ones(l, dtype=bool)
            for n in sorted(self.buckets, reverse=True):
                if n > l:
                    continue
                bucket = self.buckets[n]
                cand = bucket.candidates(ids)
                positions = np.nonzero(cand >= 0)[0]
                if not cfg.cross_sentence and n > 1:
                    positions = positions[sent_id[positions] == sent_id[positions + n - 1]]
                for i in positions:
                    if masked and not mask[i:i + n].all():
                        continue
                    k = cand[i]
                    for d, w in bucket.owners[k]:
                        h = w if cfg.weighted else 1.0
                        counts[d] += n * h
                        matches.append(MatchSpan(
                            distortion=d, ngram=bucket.ngrams[k],
                            token_start=int(i), token_end=int(i) + n,
                            char_start=text.tokens[i].start,
                            char_end=text.tokens[i + n - 1].end,
                            weight=h, contribution=n * h,
                        ))
                    if masked:
                        mask[i:i + n] = False

        scores = {d: scale_score(c, l, cfg.ls) for d, c in counts.items()}
        decisions = decide_scores(scores, cfg.dt)
        return RecognitionResult(scores=scores, raw_counts=counts,
                                 decisions=decisions, matches=tuple(matches), length=l)
