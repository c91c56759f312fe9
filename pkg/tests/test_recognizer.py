import math
import random

import pytest

from conftest import random_model, random_text
from distortrec.model import DistortionDictionary, Model
from distortrec.recognizer import (
    NgramIndex,
    RecognitionConfig,
    decide,
    decide_scores,
    highlight,
    recognize,
    result_to_dict,
)
from distortrec.textprep import tokenize


def reference_algorithm(tokens, sent_id, model, weighted, cross_sentence=False):
    """Literal step-by-step simulation of the masked length-priority matcher.

    Kept deliberately naive (membership tested per dictionary, no index) as
    the independent oracle for both engines.
    """
    l = len(tokens)
    nm = model.nm
    mask = [1] * l
    counts = {d.distortion: 0.0 for d in model.dictionaries}
    claimed = []
    for n in range(nm, 0, -1):
        for i in range(l - n + 1):
            if sum(mask[i:i + n]) != n:
                continue
            if not cross_sentence and len({sent_id[t] for t in range(i, i + n)}) > 1:
                continue
            g = tuple(tokens[i:i + n])
            found = False
            for d in model.dictionaries:
                if g in d.entries:
                    h = d.entries[g] if weighted else 1.0
                    counts[d.distortion] += n * h
                    found = True
            if found:
                for t in range(i, i + n):
                    mask[t] = 0
                claimed.append((i, i + n))
    return counts, claimed


def sent_ids(tt):
    out = [0] * len(tt)
    for s, (lo, hi) in enumerate(tt.sentences):
        for t in range(lo, hi):
            out[t] = s
    return out


class TestPriorityOnOrder:
    def test_tetragram_suppresses_contained_ngrams(self, priority_model):
        tt = tokenize("not a bad thing")
        r = recognize(tt, priority_model, RecognitionConfig(ls=False))
        assert r.raw_counts == {"d1": 4.0, "d2": 0.0}
        assert len(r.matches) == 1
        assert r.matches[0].ngram == ("not", "a", "bad", "thing")

    def test_shorter_match_outside_long_span_still_counts(self, priority_model):
        r = recognize(tokenize("bad thing not a bad thing"),
                      priority_model, RecognitionConfig(ls=False))
        # bigram at [0,2) is outside the tetra-gram span [2,6)
        assert r.raw_counts["d1"] == 4.0
        assert r.raw_counts["d2"] == 2.0

    def test_empty_model(self):
        model = Model(dictionaries=())
        r = recognize(tokenize("anything at all"), model, RecognitionConfig())
        assert r.scores == {} and r.matches == ()

    def test_empty_text(self, priority_model):
        r = recognize(tokenize(""), priority_model, RecognitionConfig())
        assert all(v == 0.0 for v in r.scores.values())
        assert not any(r.decisions.values())
        assert r.length == 0

    def test_shared_ngram_credits_all_dictionaries(self):
        model = Model(dictionaries=(
            DistortionDictionary("d1", {("hopeless",): 1.0}),
            DistortionDictionary("d2", {("hopeless",): 0.5}),
        ))
        r = recognize(tokenize("so hopeless"), model, RecognitionConfig(ls=False))
        assert r.raw_counts == {"d1": 1.0, "d2": 0.5}

    def test_leftmost_wins_within_length_pass(self):
        model = Model(dictionaries=(
            DistortionDictionary("d", {("a", "b"): 1.0, ("b", "a"): 1.0}),
        ))
        r = recognize(tokenize("a b a"), model, RecognitionConfig(ls=False))
        # ("a","b") claims [0,2); ("b","a") at [1,3) is blocked
        assert r.raw_counts["d"] == 2.0
        assert [(m.token_start, m.token_end) for m in r.matches] == [(0, 2)]

    def test_sentence_boundary_blocks_match(self):
        model = Model(dictionaries=(DistortionDictionary("d", {("bad", "thing"): 1.0}),))
        r = recognize(tokenize("It was bad. Thing broke."), model, RecognitionConfig(ls=False))
        assert r.raw_counts["d"] == 0.0
        r2 = recognize(tokenize("It was bad. Thing broke."), model,
                       RecognitionConfig(ls=False, cross_sentence=True))
        assert r2.raw_counts["d"] == 2.0


class TestScaling:
    def test_log_scaling_formula(self):
        model = Model(dictionaries=(DistortionDictionary("d", {("aa", "bb"): 1.0}),))
        r = recognize(tokenize("aa bb cc dd"), model, RecognitionConfig(ls=True))
        assert r.scores["d"] == pytest.approx(0.5 * math.log10(51), abs=1e-9)
        assert r.scores["d"] == pytest.approx(0.85378, abs=1e-5)

    def test_linear_scaling(self):
        model = Model(dictionaries=(DistortionDictionary("d", {("aa", "bb"): 1.0}),))
        r = recognize(tokenize("aa bb cc dd"), model, RecognitionConfig(ls=False))
        assert r.scores["d"] == 0.5

    def test_log_score_clamped_at_one(self):
        # full coverage: C/l = 1 -> 0.5*log10(101) > 1, clamped
        model = Model(dictionaries=(DistortionDictionary("d", {("aa",): 1.0}),))
        r = recognize(tokenize("aa aa aa"), model, RecognitionConfig(ls=True))
        assert r.scores["d"] == 1.0

    def test_score_bound_unweighted(self):
        rng = random.Random(3)
        vocab = ["a", "b", "c"]
        for _ in range(50):
            model = random_model(rng, vocab, max_entries=30, max_nm=3)
            text = random_text(rng, vocab, 20)
            for ls in (False, True):
                r = recognize(tokenize(text), model, RecognitionConfig(ls=ls, weighted=False))
                for v in r.scores.values():
                    assert 0.0 <= v <= 1.0

    def test_weighted_leq_unweighted(self):
        rng = random.Random(4)
        vocab = ["a", "b", "c", "d"]
        for _ in range(50):
            model = random_model(rng, vocab, max_entries=40, max_nm=4)
            tt = tokenize(random_text(rng, vocab, 30))
            rw = recognize(tt, model, RecognitionConfig(ls=False, weighted=True))
            ru = recognize(tt, model, RecognitionConfig(ls=False, weighted=False))
            for d in rw.raw_counts:
                assert rw.raw_counts[d] <= ru.raw_counts[d] + 1e-12

    def test_ls_preserves_ranking(self):
        rng = random.Random(5)
        vocab = ["a", "b", "c", "d", "e"]
        for _ in range(50):
            model = random_model(rng, vocab, max_entries=50, max_nm=3,
                                 labels=("d1", "d2", "d3", "d4"))
            tt = tokenize(random_text(rng, vocab, 30))
            lin = recognize(tt, model, RecognitionConfig(ls=False))
            log = recognize(tt, model, RecognitionConfig(ls=True))
            labels = sorted(lin.scores)
            for a in labels:
                for b in labels:
                    if lin.scores[a] < lin.scores[b]:
                        assert log.scores[a] <= log.scores[b]


class TestDecide:
    def test_strict_inequality(self):
        assert decide_scores({"d": 0.51}, 50) == {"d": True}
        assert decide_scores({"d": 0.50}, 50) == {"d": False}

    def test_all_zero_never_detected(self):
        for dt in range(0, 100, 10):
            assert decide_scores({"d": 0.0}, dt) == {"d": False}

    def test_monotone_in_dt(self):
        rng = random.Random(6)
        scores = {f"d{i}": rng.random() for i in range(10)}
        detected_counts = []
        for dt in range(10, 100, 10):
            detected_counts.append(sum(decide_scores(scores, dt).values()))
        assert detected_counts == sorted(detected_counts, reverse=True)

    def test_decide_matches_result(self, priority_model):
        r = recognize(tokenize("not a bad thing"), priority_model, RecognitionConfig(dt=50))
        assert decide(r, 50) == r.decisions


class TestOracleEquivalence:
    def test_random_suite_against_reference(self):
        rng = random.Random(42)
        vocab = ["aa", "bb", "cc", "dd", "ee", "ff"]
        for _ in range(300):
            model = random_model(rng, vocab, max_entries=10, max_nm=4)
            tt = tokenize(random_text(rng, vocab, 12))
            weighted = rng.random() < 0.5
            expected, claimed = reference_algorithm(
                tt.token_texts, sent_ids(tt), model, weighted)
            got = recognize(tt, model, RecognitionConfig(ls=False, weighted=weighted))
            assert got.raw_counts == pytest.approx(expected)
            # masking invariant: claimed intervals never overlap
            flat = set()
            for lo, hi in claimed:
                for t in range(lo, hi):
                    assert t not in flat
                    flat.add(t)
            got_claimed = {(m.token_start, m.token_end) for m in got.matches}
            assert got_claimed == set(claimed)


class TestHighlight:
    def test_span_covers_whole_match(self, priority_model):
        tt = tokenize("not a bad thing")
        r = recognize(tt, priority_model, RecognitionConfig(dt=10))
        spans = highlight(r)
        assert spans["d1"] == [(0, 15)]

    def test_no_matches_empty(self, priority_model):
        r = recognize(tokenize("all is well"), priority_model, RecognitionConfig())
        assert highlight(r) == {}

    def test_two_disjoint_matches_sorted(self):
        model = Model(dictionaries=(DistortionDictionary("d", {("bad",): 1.0}),))
        r = recognize(tokenize("bad day bad night"), model, RecognitionConfig(dt=10))
        assert highlight(r)["d"] == [(0, 3), (8, 11)]

    def test_undetected_omitted_unless_diagnostic(self, priority_model):
        tt = tokenize("not a bad thing " + "filler " * 60)
        r = recognize(tt, priority_model, RecognitionConfig(dt=80))
        assert highlight(r) == {}
        assert highlight(r, include_undetected=True)["d1"] == [(0, 15)]


class TestWireFormat:
    def test_schema_valid(self, priority_model):
        import json
        from pathlib import Path

        import jsonschema

        schema = json.loads(
            Path(__file__).resolve().parents[1]
            .joinpath("schemas/recognition_result.schema.json").read_text())
        r = recognize(tokenize("not a bad thing"), priority_model, RecognitionConfig())
        doc = result_to_dict(r)
        jsonschema.validate(doc, schema)
        assert doc["matches"][0]["tokens"] == ["not", "a", "bad", "thing"]

    def test_index_reuse_matches_direct(self, priority_model):
        tt = tokenize("not a bad thing")
        index = NgramIndex(priority_model)
        assert recognize(tt, index, RecognitionConfig()) == \
            recognize(tt, priority_model, RecognitionConfig())
