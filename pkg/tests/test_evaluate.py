import random

import pytest
from hypothesis import given, strategies as st

from emorole.errors import EmoroleError
from emorole.evaluate import (EXACT, OVERLAP, MatchPolicy, diff, merge_reports,
                              overlap_ratio, score)
from emorole.model import (AnnotationSet, EmotionCategory, RoleAnnotation,
                           RoleLabel, Span)
from .randgen import random_annotation_set


def _set(doc_id, *anns):
    return AnnotationSet(doc_id=doc_id, annotations=tuple(anns))


def _ann(i, role, sent, start, end, emotion=None):
    return RoleAnnotation(id=i, role=role, span=Span(sent, start, end), emotion=emotion)


def test_identity_scores_one(corpus):
    gold = _set("d",
                _ann(0, RoleLabel.CUE, 0, 1, 2, EmotionCategory.JOY),
                _ann(1, RoleLabel.TARGET, 0, 2, 4))
    report = score(gold, gold)
    for role in (RoleLabel.CUE, RoleLabel.TARGET):
        s = report.per_role[role]
        assert (s.precision, s.recall, s.f1) == (1.0, 1.0, 1.0)
    assert report.micro.f1 == 1.0
    assert report.cue_category_accuracy == 1.0


def test_empty_prediction_reports_zero():
    gold = _set("d", _ann(0, RoleLabel.TARGET, 0, 0, 1))
    report = score(gold, _set("d"))
    s = report.per_role[RoleLabel.TARGET]
    assert (s.precision, s.recall, s.f1) == (0.0, 0.0, 0.0)


def test_jaccard_half_ratio_matches():
    # gold (0,0,2) vs pred (0,1,2): one shared token of two -> ratio 0.5.
    gold = _set("d", _ann(0, RoleLabel.TERRITORY, 0, 0, 2))
    pred = _set("d", _ann(0, RoleLabel.TERRITORY, 0, 1, 2))
    assert overlap_ratio(gold.annotations[0].span, pred.annotations[0].span) == 0.5
    report = score(gold, pred, MatchPolicy.parse("jaccard:0.5"))
    s = report.per_role[RoleLabel.TERRITORY]
    assert (s.precision, s.recall) == (1.0, 1.0)
    strict = score(gold, pred, MatchPolicy.parse("jaccard:0.6"))
    assert strict.per_role[RoleLabel.TERRITORY].matched == 0


def test_roles_never_match_across_labels():
    gold = _set("d", _ann(0, RoleLabel.TARGET, 0, 0, 2))
    pred = _set("d", _ann(0, RoleLabel.CAUSE, 0, 0, 2))
    report = score(gold, pred, OVERLAP)
    assert report.per_role[RoleLabel.TARGET].matched == 0
    assert report.per_role[RoleLabel.CAUSE].matched == 0


def test_document_mismatch_rejected():
    with pytest.raises(EmoroleError):
        score(_set("a"), _set("b"))


def test_policy_parsing():
    assert str(MatchPolicy.parse("exact")) == "exact"
    assert str(MatchPolicy.parse("jaccard:0.25")) == "jaccard:0.25"
    assert MatchPolicy.parse("jaccard").threshold == 0.5
    with pytest.raises(ValueError):
        MatchPolicy.parse("fuzzy")
    with pytest.raises(ValueError):
        MatchPolicy("jaccard", 0.0)


def test_cue_category_accuracy_separate():
    gold = _set("d", _ann(0, RoleLabel.CUE, 0, 0, 1, EmotionCategory.JOY))
    pred = _set("d", _ann(0, RoleLabel.CUE, 0, 0, 1, EmotionCategory.FEAR))
    report = score(gold, pred)
    assert report.per_role[RoleLabel.CUE].f1 == 1.0       # span matched
    assert report.cue_category_accuracy == 0.0            # category wrong


def _random_pair(seed):
    rng = random.Random(seed)
    gold = random_annotation_set(rng, "d")
    pred = random_annotation_set(rng, "d")
    return gold, pred


@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_symmetry_precision_recall(seed):
    gold, pred = _random_pair(seed)
    for policy in (EXACT, MatchPolicy("jaccard", 0.5), OVERLAP):
        ab = score(gold, pred, policy)
        ba = score(pred, gold, policy)
        for role in RoleLabel:
            assert ab.per_role[role].precision == ba.per_role[role].recall
            assert ab.per_role[role].recall == ba.per_role[role].precision


@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_monotone_under_policy_relaxation(seed):
    gold, pred = _random_pair(seed)
    exact = score(gold, pred, EXACT)
    jaccard = score(gold, pred, MatchPolicy("jaccard", 0.5))
    overlap = score(gold, pred, OVERLAP)
    for role in RoleLabel:
        assert exact.per_role[role].f1 <= jaccard.per_role[role].f1 + 1e-12
        assert jaccard.per_role[role].f1 <= overlap.per_role[role].f1 + 1e-12


@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_count_identities(seed):
    gold, pred = _random_pair(seed)
    report = score(gold, pred, MatchPolicy("jaccard", 0.5))
    records = diff(gold, pred)
    for role in RoleLabel:
        s = report.per_role[role]
        assert s.matched <= min(s.gold, s.predicted)
    # diff covers every annotation exactly once at Exact policy.
    exact = score(gold, pred, EXACT)
    fp = sum(1 for r in records if r.kind == "false_positive")
    fn = sum(1 for r in records if r.kind == "false_negative")
    mismatch = sum(1 for r in records if r.kind == "span_mismatch")
    assert exact.micro.predicted - exact.micro.matched == fp + mismatch
    assert exact.micro.gold - exact.micro.matched == fn + mismatch


def test_diff_identity_is_empty():
    gold = _set("d", _ann(0, RoleLabel.TARGET, 0, 0, 2))
    assert diff(gold, gold) == []


def test_diff_extra_prediction_is_false_positive():
    gold = _set("d")
    pred = _set("d", _ann(0, RoleLabel.CUE, 0, 0, 1, EmotionCategory.JOY))
    records = diff(gold, pred)
    assert len(records) == 1
    assert records[0].kind == "false_positive"
    assert records[0].role is RoleLabel.CUE


def test_diff_shifted_span_is_mismatch_pair():
    gold = _set("d", _ann(0, RoleLabel.TARGET, 0, 0, 2))
    pred = _set("d", _ann(0, RoleLabel.TARGET, 0, 1, 3))
    records = diff(gold, pred)
    assert len(records) == 1
    assert records[0].kind == "span_mismatch"
    assert records[0].gold is not None and records[0].pred is not None


def test_merge_reports_sums_counts():
    gold = _set("d", _ann(0, RoleLabel.TARGET, 0, 0, 2))
    r1 = score(gold, gold)
    r2 = score(gold, _set("d"))
    merged = merge_reports([r1, r2])
    s = merged.per_role[RoleLabel.TARGET]
    assert (s.gold, s.predicted, s.matched) == (2, 1, 1)


def test_table_and_json_render(corpus):
    gold = _set("d", _ann(0, RoleLabel.CUE, 0, 0, 1, EmotionCategory.JOY))
    report = score(gold, gold)
    table = report.to_table()
    assert "Cue" in table and "micro" in table
    import json as json_mod
    data = json_mod.loads(report.to_json())
    assert data["roles"]["Cue"]["f1"] == 1.0
    assert data["macro"] == {"precision": 1.0, "recall": 1.0, "f1": 1.0}


def test_macro_averages_over_active_roles():
    gold = _set("d", _ann(0, RoleLabel.TARGET, 0, 0, 2),
                _ann(1, RoleLabel.CAUSE, 0, 3, 5))
    pred = _set("d", _ann(0, RoleLabel.TARGET, 0, 0, 2))
    report = score(gold, pred)
    # Target scores (1, 1, 1); Cause scores (0, 0, 0); two active roles.
    assert report.macro_precision == 0.5
    assert report.macro_recall == 0.5
    assert report.macro_f1 == 0.5
