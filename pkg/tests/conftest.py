import random
import sys

import pytest


def pytest_runtest_logreport(report):
    """One PASS/FAIL/SKIP line per acceptance criterion, capture-proof."""
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::", 1)[-1]
    if report.when == "call" or (report.when == "setup" and report.skipped):
        outcome = ("PASS" if report.passed
                   else "SKIP" if report.skipped else "FAIL")
        sys.__stdout__.write(f"ACCEPTANCE {name}: {outcome}\n")
        sys.__stdout__.flush()

from distortrec.corpus import LabeledText
from distortrec.model import DistortionDictionary, Model


@pytest.fixture
def priority_model():
    """Tetra-gram in d1; its inner bigram and unigram in d2."""
    return Model(dictionaries=(
        DistortionDictionary("d1", {("not", "a", "bad", "thing"): 1.0}),
        DistortionDictionary("d2", {("bad", "thing"): 1.0, ("bad",): 1.0}),
    ))


@pytest.fixture
def tiny_corpus():
    return [
        LabeledText(0, "bad thing happened", frozenset({"Labeling"})),
        LabeledText(1, "bad luck", frozenset({"Magnification"})),
        LabeledText(2, "good thing", frozenset()),
    ]


def random_model(rng: random.Random, vocab, max_entries=100, max_nm=5,
                 labels=("d1", "d2", "d3")) -> Model:
    dicts = []
    for label in labels:
        entries = {}
        for _ in range(rng.randint(0, max_entries // len(labels))):
            n = rng.randint(1, max_nm)
            g = tuple(rng.choice(vocab) for _ in range(n))
            entries[g] = rng.choice([1.0, round(rng.uniform(0.05, 1.0), 3)])
        dicts.append(DistortionDictionary(label, entries))
    return Model(dictionaries=tuple(dicts))


def random_text(rng: random.Random, vocab, max_tokens=50) -> str:
    words = [rng.choice(vocab) for _ in range(rng.randint(0, max_tokens))]
    # sprinkle sentence breaks (period + capitalized next word) so sentence
    # blocking is exercised
    out = []
    new_sentence = True
    for w in words:
        if new_sentence:
            w = w.capitalize()
            new_sentence = False
        if rng.random() < 0.08:
            w += "."
            new_sentence = True
        out.append(w)
    return " ".join(out)
