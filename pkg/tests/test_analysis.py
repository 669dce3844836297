"""Engagement metrics, permutation tests, percent change, and coding support."""

import math

import numpy as np
import pytest

from framescope.analysis import (
    CodedResponse,
    EmpathySample,
    ReframingChange,
    classify_reframing,
    engagement_report,
    engagement_table,
    group_deltas,
    load_rubrics,
    mean_percent_change,
    permutation_test,
    read_survey_csv,
    rubric_frames,
)
from framescope.errors import (
    BadSampleCount,
    EmptyGroup,
    UnknownArticle,
    ZeroBaseline,
)
from framescope.frames import FrameTag
from helpers import build_engagement_log


class TestEngagement:
    def test_direct_quotients(self):
        events = build_engagement_log(1, 2, 2, comments=1)
        report = engagement_report(events, "a1")
        assert report.highlights == 1
        assert report.avg_tags_per_highlight == pytest.approx(2.0)
        assert report.avg_votes_per_tag == pytest.approx(1.0)
        assert report.comments_per_tag == pytest.approx(0.5)

    def test_pas_left_row_arithmetic(self):
        events = build_engagement_log(26, 46, 97)
        report = engagement_report(events, "a1")
        assert report.highlights == 26
        assert round(report.avg_tags_per_highlight, 4) == 1.7692
        assert round(report.avg_votes_per_tag, 4) == 2.1087

    def test_empty_log_absent_ratios(self):
        events = [
            {
                "seq": 1,
                "kind": "article_ingested",
                "actor": "u0",
                "payload": {"article_id": "a1", "title": "t", "text": "x"},
                "at": "2017-06-01T00:00:00+00:00",
            }
        ]
        report = engagement_report(events, "a1")
        assert report.highlights == 0
        assert report.avg_tags_per_highlight is None
        assert report.avg_votes_per_tag is None
        assert report.comments_per_tag is None

    def test_unknown_article(self):
        with pytest.raises(UnknownArticle):
            engagement_report([], "missing")

    def test_other_articles_do_not_leak(self):
        events = build_engagement_log(3, 4, 6, article_id="a1")
        events += [
            {
                "seq": len(events) + i + 1,
                "kind": kind,
                "actor": "u9",
                "payload": payload,
                "at": "2017-06-02T00:00:00+00:00",
            }
            for i, (kind, payload) in enumerate(
                [
                    ("article_ingested", {"article_id": "a2", "title": "t", "text": "x"}),
                    (
                        "annotation_created",
                        {
                            "annotation_id": "other",
                            "article_id": "a2",
                            "start": 0,
                            "end": 1,
                            "tags": ["care", "harm"],
                        },
                    ),
                ]
            )
        ]
        report = engagement_report(events, "a1")
        assert report.highlights == 3
        assert report.avg_tags_per_highlight == pytest.approx(4 / 3)

    def test_vote_retraction_nets_out(self):
        events = build_engagement_log(1, 1, 1)
        toggle = {
            "kind": "vote_toggled",
            "actor": "u5",
            "payload": {"annotation_id": "ann0", "tag": "care"},
            "at": "2017-06-01T00:00:00+00:00",
        }
        events = events + [dict(toggle, seq=len(events) + 1), dict(toggle, seq=len(events) + 2)]
        report = engagement_report(events, "a1")
        assert report.avg_votes_per_tag == pytest.approx(1.0)

    def test_prefix_then_suffix_equals_whole(self):
        events = build_engagement_log(4, 7, 11, comments=2, summary_edits=1)
        whole = engagement_report(events, "a1")
        # folding is stateless over the event list; any split point agrees
        for cut in (1, len(events) // 2, len(events) - 1):
            again = engagement_report(events[:cut] + events[cut:], "a1")
            assert again == whole

    def test_table_rendering(self):
        report = engagement_report(build_engagement_log(2, 3, 4), "a1")
        text = engagement_table(report)
        assert "highlights" in text and "1.5000" in text


class TestPermutation:
    def test_identical_groups_p_one(self):
        result = permutation_test([1, 1], [1, 1], mode="exhaustive")
        assert result.observed_mean_diff == 0.0
        assert result.p_value == 1.0
        assert result.mode == "exhaustive"
        assert result.n_permutations == 6

    def test_two_versus_two_exhaustive(self):
        result = permutation_test([1, 1], [0, 0], mode="exhaustive")
        assert result.observed_mean_diff == pytest.approx(1.0)
        assert result.p_value == pytest.approx(2 / 7, abs=1e-12)
        assert result.n_permutations == math.comb(4, 2)

    def test_exhaustive_counts_all_relabelings(self):
        result = permutation_test([1, 2, 3], [4, 5], mode="exhaustive")
        assert result.n_permutations == math.comb(5, 3)
        assert result.seed is None

    def test_sampled_records_seed(self):
        result = permutation_test([1, 2], [3, 4], mode="sampled", n_samples=500)
        assert result.mode == "sampled"
        assert result.seed is not None
        assert result.n_permutations == 500

    def test_sampled_reproducible_with_seed(self):
        a = permutation_test([1, 2, 5], [3, 4], mode="sampled", n_samples=800, seed=7)
        b = permutation_test([1, 2, 5], [3, 4], mode="sampled", n_samples=800, seed=7)
        assert a == b

    def test_exhaustive_falls_back_to_sampling_when_too_big(self):
        treatment = list(range(10))
        control = list(range(10, 20))
        # C(20, 10) = 184756 > 20000
        result = permutation_test(treatment, control, mode="exhaustive", seed=3)
        assert result.mode == "sampled"
        assert result.seed == 3
        assert result.n_permutations == 10000

    def test_exhaustive_and_sampled_agree_within_three_se(self):
        rng = np.random.default_rng(11)
        treatment = rng.normal(0.3, 1.0, size=6).tolist()
        control = rng.normal(0.0, 1.0, size=6).tolist()
        exact = permutation_test(treatment, control, mode="exhaustive")
        sampled = permutation_test(
            treatment, control, mode="sampled", n_samples=4000, seed=12
        )
        se = math.sqrt(exact.p_value * (1 - exact.p_value) / sampled.n_permutations)
        assert abs(exact.p_value - sampled.p_value) <= 3 * se

    def test_two_sided_uses_magnitudes(self):
        one = permutation_test([0, 0], [1, 1], mode="exhaustive", sidedness="one_sided")
        two = permutation_test([0, 0], [1, 1], mode="exhaustive", sidedness="two_sided")
        assert one.observed_mean_diff == pytest.approx(-1.0)
        assert one.p_value == 1.0  # everything is >= the most negative diff
        # both pure splits reach |diff| = 1, so (1 + 2) / (1 + 6)
        assert two.p_value == pytest.approx(3 / 7, abs=1e-12)

    def test_p_never_zero_or_above_one(self):
        result = permutation_test([10, 11, 12], [0, 1, 2], mode="exhaustive")
        assert 0.0 < result.p_value <= 1.0

    def test_empty_group(self):
        with pytest.raises(EmptyGroup):
            permutation_test([], [1], mode="exhaustive")
        with pytest.raises(EmptyGroup):
            permutation_test([1], [], mode="exhaustive")

    def test_bad_sample_count(self):
        with pytest.raises(BadSampleCount):
            permutation_test([1, 2], [3], mode="sampled", n_samples=0)

    def test_null_calibration_small(self):
        # p-values under the null should look uniform
        rng = np.random.default_rng(21)
        p_values = []
        for _ in range(100):
            t = rng.normal(0, 1, 8).tolist()
            c = rng.normal(0, 1, 8).tolist()
            p_values.append(
                permutation_test(t, c, mode="sampled", n_samples=400, seed=int(rng.integers(2**31))).p_value
            )
        assert 0.35 <= float(np.mean(np.asarray(p_values) <= 0.5)) <= 0.65


class TestMeanPercentChange:
    def make(self, pairs, group="treatment"):
        return [
            EmpathySample(f"p{i}", group, pre, post)
            for i, (pre, post) in enumerate(pairs)
        ]

    def test_reported_style_arithmetic(self):
        samples = self.make([(1.5, 1.92), (2.5, 3.0)])  # means 2.0 -> 2.46
        assert mean_percent_change(samples, "treatment") == pytest.approx(23.0)

    def test_no_change(self):
        samples = self.make([(2.0, 2.0), (4.0, 4.0)])
        assert mean_percent_change(samples, "treatment") == 0.0

    def test_single_sample(self):
        samples = self.make([(1.0, 1.5)])
        assert mean_percent_change(samples, "treatment") == pytest.approx(50.0)

    def test_empty_group(self):
        with pytest.raises(EmptyGroup):
            mean_percent_change(self.make([(1.0, 2.0)], group="control"), "treatment")

    def test_zero_baseline_guard(self):
        # unreachable through scale-validated samples, but the guard holds
        # for any duck-typed sample source
        from types import SimpleNamespace

        degenerate = SimpleNamespace(group="treatment", baseline=0.0, final=1.0)
        with pytest.raises(ZeroBaseline):
            mean_percent_change([degenerate], "treatment")

    def test_scale_bounds_enforced(self):
        with pytest.raises(ValueError):
            EmpathySample("p", "control", 0.5, 3.0)
        with pytest.raises(ValueError):
            EmpathySample("p", "control", 3.0, 5.5)
        with pytest.raises(ValueError):
            EmpathySample("p", "nope", 3.0, 3.0)


class TestCoding:
    def test_agreement_is_intersection(self):
        coded = CodedResponse(
            "p1",
            "post",
            frozenset({FrameTag.CARE, FrameTag.SANCTITY}),
            frozenset({FrameTag.CARE, FrameTag.LOYALTY}),
        )
        assert coded.frames_agreed == frozenset({FrameTag.CARE})

    def test_gained_framing(self):
        assert (
            classify_reframing(set(), {FrameTag.CARE}, set(), set())
            is ReframingChange.POSITIVE_GAINED_FRAMING
        )

    def test_reframed_to_audience(self):
        rubrics = load_rubrics()
        own = rubric_frames("pas", "left", rubrics)
        opposing = rubric_frames("pas", "right", rubrics)
        assert opposing == frozenset({FrameTag.MORALITY, FrameTag.SANCTITY})
        outcome = classify_reframing(
            {FrameTag.CARE}, {FrameTag.SANCTITY, FrameTag.CARE}, own, opposing
        )
        assert outcome is ReframingChange.POSITIVE_REFRAMED_TO_AUDIENCE

    def test_unchanged_framing_is_none(self):
        own = {FrameTag.CARE, FrameTag.FAIRNESS}
        opposing = {FrameTag.MORALITY, FrameTag.SANCTITY}
        assert (
            classify_reframing({FrameTag.CARE}, {FrameTag.CARE}, own, opposing)
            is ReframingChange.NONE
        )

    def test_gained_checked_before_reframed(self):
        # empty pre with an opposing-frame post is still "gained"
        outcome = classify_reframing(
            set(), {FrameTag.SANCTITY}, {FrameTag.CARE}, {FrameTag.SANCTITY}
        )
        assert outcome is ReframingChange.POSITIVE_GAINED_FRAMING

    def test_type_one_monotone_in_post_frames(self):
        base = classify_reframing(set(), {FrameTag.CARE}, set(), set())
        grown = classify_reframing(set(), {FrameTag.CARE, FrameTag.HARM}, set(), set())
        assert base is grown is ReframingChange.POSITIVE_GAINED_FRAMING

    def test_rubrics_cover_both_studies(self):
        rubrics = load_rubrics()
        assert set(rubrics) == {"pas", "hc", "fs", "aa", "immigration", "daca", "refugees"}
        assert rubric_frames("fs", "left", rubrics) == frozenset({FrameTag.CARE})
        assert rubric_frames("refugees", "right", rubrics) == frozenset(
            {FrameTag.LOYALTY, FrameTag.DEGRADATION}
        )


class TestSurveyCsv:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "survey.csv"
        path.write_text(
            "participant_id,group,phase,score\n"
            "p1,treatment,pre,2.0\n"
            "p1,treatment,post,3.0\n"
            "p2,control,baseline,1.5\n"
            "p2,control,final,1.0\n"
        )
        samples = read_survey_csv(path)
        assert samples == [
            EmpathySample("p1", "treatment", 2.0, 3.0),
            EmpathySample("p2", "control", 1.5, 1.0),
        ]
        assert group_deltas(samples, "treatment") == [1.0]
        assert group_deltas(samples, "control") == [-0.5]

    def test_missing_phase_rejected(self, tmp_path):
        path = tmp_path / "survey.csv"
        path.write_text("participant_id,group,phase,score\np1,treatment,pre,2.0\n")
        with pytest.raises(ValueError):
            read_survey_csv(path)

    def test_missing_columns_rejected(self, tmp_path):
        path = tmp_path / "survey.csv"
        path.write_text("who,phase,score\np1,pre,2.0\n")
        with pytest.raises(ValueError):
            read_survey_csv(path)
