import random

import pytest
from hypothesis import given, strategies as st

from emorole.errors import IntegrityError
from emorole.model import (AnnotationSet, EmotionCategory, RoleAnnotation,
                           RoleLabel, Span, Token, canonicalize)
from .randgen import random_annotation_set


def test_token_rejects_empty_surface():
    with pytest.raises(ValueError):
        Token(index=0, surface="", lemma="x", upos="NOUN", head=-1, deprel="root")


def test_token_rejects_self_head():
    with pytest.raises(ValueError):
        Token(index=2, surface="x", lemma="x", upos="NOUN", head=2, deprel="obj")


@pytest.mark.parametrize("sent,start,end", [(0, 1, 1), (0, 2, 1), (0, -1, 1), (-1, 0, 1)])
def test_span_rejects_bad_ranges(sent, start, end):
    with pytest.raises(ValueError):
        Span(sent, start, end)


def test_non_cue_cannot_carry_cue_fields():
    with pytest.raises(ValueError):
        RoleAnnotation(id=0, role=RoleLabel.TARGET, span=Span(0, 0, 1),
                       emotion=EmotionCategory.JOY)
    with pytest.raises(ValueError):
        RoleAnnotation(id=0, role=RoleLabel.TARGET, span=Span(0, 0, 1), negated=True)
    with pytest.raises(ValueError):
        RoleAnnotation(id=0, role=RoleLabel.ATTACK, span=Span(0, 0, 1),
                       intensity_span=Span(0, 1, 2))


def test_overlapping_spans_of_different_roles_are_legal():
    # The same token may be Experiencer and sit inside a Territory span.
    annset = AnnotationSet(doc_id="d", annotations=(
        RoleAnnotation(id=0, role=RoleLabel.EXPERIENCER, span=Span(0, 0, 1)),
        RoleAnnotation(id=1, role=RoleLabel.TERRITORY, span=Span(0, 0, 2)),
    ))
    assert len(canonicalize(annset)) == 2


def test_canonicalize_empty_is_identity():
    empty = AnnotationSet(doc_id="d")
    assert canonicalize(empty) == empty


def test_canonicalize_sorts_and_renumbers():
    # Two annotations in reversed order; expected order derived by sorting
    # on (sentence, start, end, role) independently of the implementation.
    late = RoleAnnotation(id=7, role=RoleLabel.ATTACK, span=Span(0, 3, 4))
    early = RoleAnnotation(id=3, role=RoleLabel.TERRITORY, span=Span(0, 0, 2))
    result = canonicalize(AnnotationSet(doc_id="d", annotations=(late, early)))
    keys = [(a.span.sentence, a.span.start, a.span.end) for a in result]
    assert keys == sorted(keys)
    assert [a.id for a in result] == [0, 1]
    assert result.annotations[0].role is RoleLabel.TERRITORY


def test_canonicalize_remaps_links():
    cue = RoleAnnotation(id=9, role=RoleLabel.CUE, span=Span(0, 4, 5),
                         emotion=EmotionCategory.SADNESS)
    exp = RoleAnnotation(id=4, role=RoleLabel.EXPERIENCER, span=Span(0, 0, 1), cue_link=9)
    result = canonicalize(AnnotationSet(doc_id="d", annotations=(cue, exp)))
    linked = result.annotations[0]
    assert linked.role is RoleLabel.EXPERIENCER
    assert result.annotations[linked.cue_link].role is RoleLabel.CUE


def test_canonicalize_rejects_dangling_link():
    exp = RoleAnnotation(id=0, role=RoleLabel.EXPERIENCER, span=Span(0, 0, 1), cue_link=42)
    with pytest.raises(IntegrityError, match="42"):
        canonicalize(AnnotationSet(doc_id="d", annotations=(exp,)))


def test_canonicalize_rejects_link_to_non_cue():
    target = RoleAnnotation(id=0, role=RoleLabel.TARGET, span=Span(0, 1, 2))
    exp = RoleAnnotation(id=1, role=RoleLabel.EXPERIENCER, span=Span(0, 0, 1), cue_link=0)
    with pytest.raises(IntegrityError):
        canonicalize(AnnotationSet(doc_id="d", annotations=(target, exp)))


@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_canonicalize_idempotent(seed):
    annset = random_annotation_set(random.Random(seed))
    once = canonicalize(annset)
    assert canonicalize(once) == once
