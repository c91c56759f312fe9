"""Sentence splitting and tokenization with exact character offsets.

Tokens are maximal runs of characters that are neither whitespace nor
punctuation/symbols (Unicode categories P* and S*), lowercased. Punctuation
never produces tokens. Offsets always index into the original source string
so matched spans can be highlighted verbatim.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field


def _is_separator(ch: str) -> bool:
    if ch.isspace():
        return True
    return unicodedata.category(ch)[0] in ("P", "S")


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int

    def __post_init__(self):
        if not self.text:
            raise ValueError("empty token text")
        if self.start >= self.end:
            raise ValueError(f"bad token span [{self.start}, {self.end})")


@dataclass(frozen=True)
class TokenizedText:
    source: str
    tokens: tuple[Token, ...]
    # half-open intervals into `tokens`, one per sentence
    sentences: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def __len__(self):
        return len(self.tokens)

    @property
    def token_texts(self) -> list[str]:
        return [t.text for t in self.tokens]

    def sentence_of(self, token_index: int) -> int:
        for s, (lo, hi) in enumerate(self.sentences):
            if lo <= token_index < hi:
                return s
        raise IndexError(token_index)


# Common English abbreviations that end with a period but do not end a sentence.
_ABBREVIATIONS = {
    "dr", "mr", "mrs", "ms", "prof", "sr", "jr", "st", "rev", "gen", "rep",
    "sen", "gov", "lt", "maj", "sgt", "col", "capt", "cmdr", "adm",
    "vs", "etc", "eg", "e.g", "ie", "i.e", "cf", "al", "inc", "ltd", "co",
    "corp", "dept", "est", "approx", "no", "vol", "fig", "min", "max",
    "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept", "oct",
    "nov", "dec", "mon", "tue", "wed", "thu", "fri", "sat", "sun",
    "a.m", "p.m", "u.s", "u.k", "ph.d", "m.d", "b.a", "m.a",
}

_BOUNDARY = re.compile(r"[.!?]+[\"'”’)\]]*\s+")


def _word_before(text: str, idx: int) -> str:
    """Word immediately preceding position idx (exclusive), without trailing dots."""
    j = idx
    while j > 0 and not text[j - 1].isspace():
        j -= 1
    return text[j:idx]


def split_sentences(text: str) -> list[tuple[str, int, int]]:
    """Split text into sentences, returning (sentence, start, end) triples.

    Boundaries occur after sentence-final punctuation (., !, ?) followed by
    whitespace, guarded by an abbreviation list and a single-initial check
    (``J. Smith`` does not split). Concatenating the spans plus the gaps
    between them reconstructs the input.
    """
    if not text.strip():
        return []
    boundaries = []
    for m in _BOUNDARY.finditer(text):
        punct_start = m.start()
        if text[punct_start] == ".":
            word = _word_before(text, punct_start).lower().lstrip("(\"'")
            if word in _ABBREVIATIONS:
                continue
            # single capital initial, e.g. "J. Smith"
            if len(word) == 1 and word.isalpha():
                continue
        # prefer to split only when the next run starts a new sentence-ish
        # character; everything else (lowercase continuation) is kept together
        nxt = text[m.end():m.end() + 1]
        if nxt and nxt.islower():
            continue
        boundaries.append(m.end())
    out = []
    prev = 0
    for b in boundaries + [len(text)]:
        seg = text[prev:b]
        stripped = seg.strip()
        if stripped:
            lead = len(seg) - len(seg.lstrip())
            start = prev + lead
            out.append((stripped, start, start + len(stripped)))
        prev = b
    return out


def tokenize(text: str, split_into_sentences: bool = True) -> TokenizedText:
    """Tokenize text into lowercase tokens with source-character spans.

    A token is a maximal run of non-space, non-punctuation characters.
    When ``split_into_sentences`` is true, sentence intervals over the token
    list are recorded (used to keep N-grams from crossing sentence
    boundaries); otherwise the whole text is one sentence.
    """
    tokens: list[Token] = []
    sentences: list[tuple[int, int]] = []

    if split_into_sentences:
        sent_spans = split_sentences(text)
    else:
        sent_spans = [(text, 0, len(text))] if text.strip() else []

    for _, s_start, s_end in sent_spans:
        tok_lo = len(tokens)
        i = s_start
        while i < s_end:
            if _is_separator(text[i]):
                i += 1
                continue
            j = i
            while j < s_end and not _is_separator(text[j]):
                j += 1
            tokens.append(Token(text=text[i:j].lower(), start=i, end=j))
            i = j
        if len(tokens) > tok_lo:
            sentences.append((tok_lo, len(tokens)))

    return TokenizedText(source=text, tokens=tuple(tokens), sentences=tuple(sentences))
