import math
from collections import Counter
from datetime import date, timedelta

import pytest
from hypothesis import given, strategies as st

from adaptls.corpus import Timeline, tokenize
from adaptls.errors import EmptyDataset, EmptyReference, EmptyTimeline
from adaptls.evaluation import (
    EvalReport,
    PRF,
    align_dates,
    align_rouge_f1,
    dataset_stats,
    date_f1,
    evaluate_pair,
    rouge_n,
)


def _tl(entries, name="tl"):
    return Timeline(name, entries)


class TestDateF1:
    def test_identical_sets(self):
        tl = _tl([(date(2020, 1, 1), ["A."]), (date(2020, 1, 5), ["B."])])
        got = date_f1(tl, tl)
        assert (got.precision, got.recall, got.f1) == (1.0, 1.0, 1.0)

    def test_disjoint_sets(self):
        pred = _tl([(date(2020, 1, 1), ["A."])])
        ref = _tl([(date(2020, 2, 2), ["B."])])
        assert date_f1(pred, ref).f1 == 0.0

    def test_hand_counts(self):
        pred = _tl([(date(2020, 1, d), ["x."]) for d in (1, 2, 3)])
        ref = _tl([(date(2020, 1, d), ["x."]) for d in (2, 3, 4, 5)])
        got = date_f1(pred, ref)
        assert got.precision == pytest.approx(2 / 3)
        assert got.recall == pytest.approx(2 / 4)
        assert got.f1 == pytest.approx(2 * (2 / 3) * 0.5 / (2 / 3 + 0.5))

    def test_empty_reference_raises(self):
        pred = _tl([(date(2020, 1, 1), ["A."])])
        with pytest.raises(EmptyReference):
            date_f1(pred, Timeline("ref", []))

    @given(
        st.sets(st.integers(0, 30), min_size=1, max_size=10),
        st.sets(st.integers(0, 30), min_size=1, max_size=10),
    )
    def test_matches_set_oracle(self, pred_days, ref_days):
        base = date(2021, 1, 1)
        pred = _tl([(base + timedelta(days=d), ["x."]) for d in sorted(pred_days)])
        ref = _tl([(base + timedelta(days=d), ["x."]) for d in sorted(ref_days)])
        got = date_f1(pred, ref)
        overlap = len(pred_days & ref_days)
        p = overlap / len(pred_days)
        r = overlap / len(ref_days)
        f = 0.0 if p + r == 0 else 2 * p * r / (p + r)
        assert got == PRF(p, r, pytest.approx(f))


class TestRougeN:
    def test_identical_unigrams(self):
        toks = tokenize("the storm hit the coast")
        assert rouge_n(toks, toks, 1).f1 == pytest.approx(1.0)

    def test_no_overlap(self):
        assert rouge_n(["a", "b"], ["c", "d"], 1) == PRF(0.0, 0.0, 0.0)

    def test_hand_counted_bigrams(self):
        pred = ["a", "b", "c"]
        ref = ["a", "b", "d"]
        got = rouge_n(pred, ref, 2)
        # bigrams: pred {ab, bc}, ref {ab, bd}; overlap 1
        assert got.precision == pytest.approx(0.5)
        assert got.recall == pytest.approx(0.5)
        assert got.f1 == pytest.approx(0.5)

    def test_clipping_of_repeats(self):
        got = rouge_n(["a", "a", "a"], ["a"], 1)
        assert got.precision == pytest.approx(1 / 3)
        assert got.recall == pytest.approx(1.0)

    def test_empty_side_is_zero(self):
        assert rouge_n([], ["a"], 1) == PRF(0.0, 0.0, 0.0)
        assert rouge_n(["a"], [], 2) == PRF(0.0, 0.0, 0.0)

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            rouge_n(["a"], ["a"], 3)

    @given(
        st.lists(st.sampled_from("abcde"), min_size=0, max_size=12),
        st.lists(st.sampled_from("abcde"), min_size=0, max_size=12),
        st.sampled_from([1, 2]),
    )
    def test_matches_counter_oracle(self, pred, ref, n):
        got = rouge_n(pred, ref, n)
        pred_grams = Counter(tuple(pred[i : i + n]) for i in range(len(pred) - n + 1))
        ref_grams = Counter(tuple(ref[i : i + n]) for i in range(len(ref) - n + 1))
        if not pred_grams or not ref_grams:
            assert got == PRF(0.0, 0.0, 0.0)
            return
        overlap = sum(min(c, ref_grams[g]) for g, c in pred_grams.items())
        p = overlap / sum(pred_grams.values())
        r = overlap / sum(ref_grams.values())
        assert got.precision == pytest.approx(p)
        assert got.recall == pytest.approx(r)

    def test_symmetry_of_f1(self):
        a = tokenize("rain fell across the north")
        b = tokenize("heavy rain fell across town")
        assert rouge_n(a, b, 1).f1 == pytest.approx(rouge_n(b, a, 1).f1)


class TestAlignDates:
    def test_identity_alignment(self):
        tl = _tl(
            [
                (date(2020, 1, 1), ["Alpha beta gamma."]),
                (date(2020, 1, 9), ["Delta epsilon zeta."]),
            ]
        )
        got = align_dates(tl, tl)
        assert got == [
            (date(2020, 1, 1), date(2020, 1, 1), 1.0),
            (date(2020, 1, 9), date(2020, 1, 9), 1.0),
        ]

    def test_one_day_shift_gamma_half(self):
        pred = _tl([(date(2020, 1, 2), ["Alpha beta gamma."])])
        ref = _tl([(date(2020, 1, 1), ["Alpha beta gamma."])])
        got = align_dates(pred, ref)
        assert got == [(date(2020, 1, 2), date(2020, 1, 1), 0.5)]

    def test_many_to_one(self):
        pred = _tl(
            [
                (date(2020, 1, 1), ["Alpha beta."]),
                (date(2020, 1, 2), ["Alpha beta."]),
            ]
        )
        ref = _tl([(date(2020, 1, 1), ["Alpha beta."])])
        got = align_dates(pred, ref)
        assert [r for _, r, _ in got] == [date(2020, 1, 1)] * 2

    def test_tie_prefers_temporally_nearest(self):
        # both refs share the text; the nearer one wins despite equal rouge
        pred = _tl([(date(2020, 1, 4), ["Same words here."])])
        ref = _tl(
            [
                (date(2020, 1, 1), ["Same words here."]),
                (date(2020, 1, 5), ["Same words here."]),
            ]
        )
        got = align_dates(pred, ref)
        assert got[0][1] == date(2020, 1, 5)

    def test_equidistant_tie_prefers_earlier(self):
        pred = _tl([(date(2020, 1, 3), ["Same words here."])])
        ref = _tl(
            [
                (date(2020, 1, 2), ["Same words here."]),
                (date(2020, 1, 4), ["Same words here."]),
            ]
        )
        got = align_dates(pred, ref)
        assert got[0][1] == date(2020, 1, 2)

    def test_content_beats_proximity(self):
        pred = _tl([(date(2020, 1, 2), ["Unique treaty clause signed."])])
        ref = _tl(
            [
                (date(2020, 1, 2), ["Unrelated sports recap today."]),
                (date(2020, 1, 6), ["Unique treaty clause signed."]),
            ]
        )
        got = align_dates(pred, ref)
        # perfect rouge at gamma 1/5 = 0.2 beats zero rouge at gamma 1
        assert got[0][1] == date(2020, 1, 6)

    def test_empty_raises(self):
        tl = _tl([(date(2020, 1, 1), ["A."])])
        with pytest.raises(EmptyTimeline):
            align_dates(tl, Timeline("ref", []))


class TestAlignRougeF1:
    def test_self_evaluation_is_one(self):
        tl = _tl(
            [
                (date(2020, 1, 1), ["Alpha beta gamma delta."]),
                (date(2020, 1, 9), ["Epsilon zeta eta theta."]),
            ]
        )
        assert align_rouge_f1(tl, tl, 1).f1 == pytest.approx(1.0)
        assert align_rouge_f1(tl, tl, 2).f1 == pytest.approx(1.0)

    def test_one_day_shift_halves_score(self):
        ref = _tl(
            [
                (date(2020, 1, 1), ["Alpha beta gamma delta."]),
                (date(2020, 1, 9), ["Epsilon zeta eta theta."]),
            ]
        )
        pred = _tl([(d + timedelta(days=1), s) for d, s in ref.entries])
        got = align_rouge_f1(pred, ref, 1)
        assert got.precision == pytest.approx(0.5)
        assert got.recall == pytest.approx(0.5)
        assert got.f1 == pytest.approx(0.5)

    def test_covering_one_of_two_refs(self):
        ref = _tl(
            [
                (date(2020, 1, 1), ["Alpha beta gamma."]),
                (date(2020, 1, 9), ["Delta epsilon zeta."]),
            ]
        )
        pred = _tl([(date(2020, 1, 1), ["Alpha beta gamma."])])
        got = align_rouge_f1(pred, ref, 1)
        assert got.precision == pytest.approx(1.0)
        assert got.recall == pytest.approx(0.5)
        assert got.f1 == pytest.approx(2 / 3)

    def test_translation_invariance(self):
        ref = _tl(
            [
                (date(2020, 1, 1), ["Alpha beta gamma."]),
                (date(2020, 1, 4), ["Delta epsilon zeta."]),
            ]
        )
        pred = _tl(
            [
                (date(2020, 1, 2), ["Alpha beta gamma."]),
                (date(2020, 1, 4), ["Delta epsilon."]),
            ]
        )
        shift = timedelta(days=365)
        ref2 = _tl([(d + shift, s) for d, s in ref.entries])
        pred2 = _tl([(d + shift, s) for d, s in pred.entries])
        for n in (1, 2):
            assert align_rouge_f1(pred, ref, n) == align_rouge_f1(pred2, ref2, n)

    def test_zero_overlap_content(self):
        pred = _tl([(date(2020, 1, 1), ["Aaa bbb."])])
        ref = _tl([(date(2020, 1, 1), ["Ccc ddd."])])
        assert align_rouge_f1(pred, ref, 1).f1 == 0.0

    def test_evaluate_pair_bundles_metrics(self):
        tl = _tl([(date(2020, 1, 1), ["Alpha beta."])], name="ref0")
        pair = evaluate_pair(tl, tl, "topicA")
        assert pair.topic == "topicA"
        assert pair.reference == "ref0"
        assert pair.date_f1.f1 == 1.0
        assert pair.ar1.f1 == pytest.approx(1.0)


class TestEvalReport:
    def test_macro_averages(self):
        a = evaluate_pair(
            _tl([(date(2020, 1, 1), ["Aa bb."])]),
            _tl([(date(2020, 1, 1), ["Aa bb."])]),
            "t1",
        )
        b = evaluate_pair(
            _tl([(date(2020, 1, 1), ["Aa bb."])]),
            _tl([(date(2020, 2, 1), ["Cc dd."])]),
            "t2",
        )
        report = EvalReport([a, b])
        macro = report.macro()
        assert macro["DATE-F1"] == pytest.approx((1.0 + 0.0) / 2)
        assert macro["AR1-F"] == pytest.approx(a.ar1.f1 / 2)

    def test_json_and_table_render(self):
        pair = evaluate_pair(
            _tl([(date(2020, 1, 1), ["Aa bb."])]),
            _tl([(date(2020, 1, 1), ["Aa bb."])]),
            "t1",
        )
        report = EvalReport([pair])
        obj = report.to_json_obj()
        assert obj["macro"]["DATE-F1"] == 1.0
        table = report.to_text_table("run")
        assert "DATE-F1" in table and "run" in table


class TestDatasetStats:
    def test_empty_dataset_raises(self):
        with pytest.raises(EmptyDataset):
            dataset_stats([])

    def test_hand_computed_single_topic(self):
        from adaptls.corpus import Article, Sentence, Topic
        from adaptls.temporal import annotate_topic

        def article(aid, pub, raws):
            return Article(
                aid, pub, aid, [Sentence(aid, i, r, tokenize(r)) for i, r in enumerate(raws)]
            )

        topic = annotate_topic(
            Topic(
                "t",
                [
                    article("a0", date(2020, 1, 1), ["One.", "Two."]),
                    article("a1", date(2020, 1, 5), ["Three."]),
                ],
                [],
                [
                    Timeline(
                        "ref",
                        [
                            (date(2020, 1, 1), ["One."]),
                            (date(2020, 1, 5), ["Three.", "Extra."]),
                        ],
                    )
                ],
            )
        )
        stats = dataset_stats([topic])
        assert stats.topics == 1
        assert stats.timelines == 1
        assert stats.avg_sent_num == 3
        assert stats.avg_docs_num == 2
        assert stats.avg_l == 2
        assert stats.avg_k == pytest.approx(1.5)
        assert stats.avg_duration == 4
        assert stats.avg_dur_comp == pytest.approx(2 / 4)
        assert stats.avg_sent_comp == pytest.approx(3 / 3)
        # candidate dates: the two publish dates only
        assert stats.avg_date_comp == pytest.approx(2 / 2)
        assert stats.avg_date_cov == pytest.approx(1.0)

    def test_single_day_topic_duration_floor(self):
        from adaptls.corpus import Article, Sentence, Topic
        from adaptls.temporal import annotate_topic

        aid = "a0"
        topic = annotate_topic(
            Topic(
                "t",
                [Article(aid, date(2020, 1, 1), aid, [Sentence(aid, 0, "One.", ["one"])])],
                [],
                [Timeline("ref", [(date(2020, 1, 1), ["One."])])],
            )
        )
        stats = dataset_stats([topic])
        assert stats.avg_duration == 0
        assert stats.avg_dur_comp == 1.0  # length / max(duration, 1)

    def test_frozen_mini_dataset_values(self, mini_dataset):
        stats = dataset_stats(mini_dataset)
        assert stats.topics == 3
        assert stats.timelines == 4
        assert stats.avg_sent_num == pytest.approx(4.75)
        assert stats.avg_docs_num == pytest.approx(2.25)
        assert stats.avg_l == pytest.approx(1.75)
        assert stats.avg_k == pytest.approx(1.125)
        assert stats.avg_duration == pytest.approx(4.75)
        assert stats.avg_dur_comp == pytest.approx(6 / 11)
        assert stats.avg_sent_comp == pytest.approx(0.4125)
        assert stats.avg_date_comp == pytest.approx(17 / 24)
        assert stats.avg_date_cov == pytest.approx(1.0)

    def test_json_and_table_render(self, mini_dataset):
        stats = dataset_stats(mini_dataset)
        obj = stats.to_json_obj()
        assert obj["Topics"] == 3 and obj["TLs"] == 4
        table = stats.to_text_table()
        assert "AvgDateCov" in table
