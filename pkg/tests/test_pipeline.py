import dataclasses

import pytest

from emorole.model import (AnnotationSet, EmotionCategory, RoleAnnotation,
                           RoleLabel, Span)
from emorole.pipeline import (PipelineConfig, annotate_document,
                              annotate_document_stages,
                              attach_negation_and_modifiers, detect_cues,
                              detect_experiencers, detect_targets_and_causes,
                              find_marker_matches, parse_config, path_lengths,
                              propagate_coref)


def roles_and_texts(doc, annset):
    return sorted((a.role.value, doc.span_text(a.span)) for a in annset)


# --- individual detectors ----------------------------------------------------

def test_detect_cues_gustave(corpus, lexicons, config):
    sent = corpus.load_document("gustave").sentences[0]
    cues = detect_cues(sent, lexicons, config)
    assert len(cues) == 1
    assert cues[0].span == Span(0, 1, 2)
    assert cues[0].emotion is EmotionCategory.JOY


def test_detect_cues_ignores_non_content_pos(corpus, lexicons, config):
    # "fear" as PRON would be skipped; check via a synthetic sentence.
    import emorole.model as m
    tok = m.Token(index=0, surface="fear", lemma="fear", upos="PRON",
                  head=-1, deprel="root")
    sent = m.Sentence(index=0, tokens=(tok,))
    assert detect_cues(sent, lexicons, config) == []


def test_detect_cues_no_hits(corpus, lexicons, config):
    sent = corpus.load_document("skills").sentences[0]
    assert detect_cues(sent, lexicons, config) == []


def test_detect_experiencers_first_person(corpus, lexicons, config):
    sent = corpus.load_document("skills").sentences[0]
    anns = detect_experiencers(sent, cues=[], cfg=config)
    assert [(a.span, a.cue_link) for a in anns] == [(Span(0, 0, 1), None)]


def test_detect_experiencers_cue_subject(corpus, lexicons, config):
    sent = corpus.load_document("gustave").sentences[0]
    cues = detect_cues(sent, lexicons, config)
    anns = detect_experiencers(sent, cues, config)
    assert [(a.span, a.provenance) for a in anns] == [(Span(0, 0, 1), "cue-subject")]
    assert anns[0].cue_link == cues[0].id


def test_detect_experiencers_third_person_no_cue_subject(corpus, lexicons, config):
    sent = corpus.load_document("not-angry").sentences[0]
    cues = detect_cues(sent, lexicons, config)
    # "angry" is an adjective cue; "She" is not first person.
    assert detect_experiencers(sent, cues, config) == []


def test_detect_targets_and_causes_gustave(corpus, lexicons, config):
    doc = corpus.load_document("gustave")
    sent = doc.sentences[0]
    cues = detect_cues(sent, lexicons, config)
    anns = detect_targets_and_causes(sent, cues, config)
    by_role = {a.role: a for a in anns}
    assert doc.span_text(by_role[RoleLabel.TARGET].span) == "carnivorous plants"
    assert doc.span_text(by_role[RoleLabel.CAUSE].span) == "because they are beautiful"


def test_cause_marker_can_be_dropped(corpus, lexicons, config):
    doc = corpus.load_document("gustave")
    sent = doc.sentences[0]
    cues = detect_cues(sent, lexicons, config)
    cfg = dataclasses.replace(config, keep_cause_marker=False)
    anns = detect_targets_and_causes(sent, cues, cfg)
    cause = next(a for a in anns if a.role is RoleLabel.CAUSE)
    assert doc.span_text(cause.span) == "they are beautiful"


def test_cue_without_dependents_produces_nothing(corpus, lexicons, config):
    sent = corpus.load_document("little-sad").sentences[0]
    cues = detect_cues(sent, lexicons, config)
    anns = detect_targets_and_causes(sent, cues, config)
    assert anns == []


def test_marker_matching_prefers_longest():
    doc_tokens = []
    import emorole.model as m
    for i, (surface, lemma) in enumerate([("a", "a"), ("little", "little"), ("x", "x")]):
        doc_tokens.append(m.Token(index=i, surface=surface, lemma=lemma, upos="ADV",
                                  head=-1 if i == 2 else 2,
                                  deprel="root" if i == 2 else "advmod"))
    sent = m.Sentence(index=0, tokens=tuple(doc_tokens))
    matches = find_marker_matches(sent, ["a little", "little"])
    assert matches == [(0, 1)]


def test_attach_negation(corpus, lexicons, config):
    sent = corpus.load_document("not-angry").sentences[0]
    cues = detect_cues(sent, lexicons, config)
    updated = attach_negation_and_modifiers(sent, cues, config)
    cue = next(a for a in updated if a.role is RoleLabel.CUE)
    neg = next(a for a in updated if a.role is RoleLabel.NEGATION)
    assert cue.negated is True
    assert neg.span == Span(0, 2, 3)
    assert neg.cue_link == cue.id


def test_attach_modifier_sets_intensity(corpus, lexicons, config):
    sent = corpus.load_document("little-sad").sentences[0]
    cues = detect_cues(sent, lexicons, config)
    updated = attach_negation_and_modifiers(sent, cues, config)
    cue = next(a for a in updated if a.role is RoleLabel.CUE)
    mod = next(a for a in updated if a.role is RoleLabel.MODIFIER)
    assert mod.span == Span(0, 2, 4)
    assert cue.intensity_span == Span(0, 2, 4)


def test_attach_without_markers_changes_nothing(corpus, lexicons, config):
    sent = corpus.load_document("gustave").sentences[0]
    cues = detect_cues(sent, lexicons, config)
    assert attach_negation_and_modifiers(sent, cues, config) == cues


def test_negation_never_deletes_cues(corpus, lexicons, config):
    for doc_id in corpus.document_ids():
        doc = corpus.load_document(doc_id)
        for sent in doc.sentences:
            cues = detect_cues(sent, lexicons, config)
            updated = attach_negation_and_modifiers(sent, cues, config)
            before = sorted(a.span for a in cues if a.role is RoleLabel.CUE)
            after = sorted(a.span for a in updated if a.role is RoleLabel.CUE)
            assert before == after


def test_marker_beyond_path_k_ignored(corpus, lexicons, config):
    # "they" sits 2 hops from the cue "loves" (they -> beautiful -> loves),
    # so treating it as a marker attaches at k=2 but not at k=1.
    sent = corpus.load_document("gustave").sentences[0]
    cues = detect_cues(sent, lexicons, config)
    near = dataclasses.replace(config, negation_markers=("they",), path_k=2)
    far = dataclasses.replace(config, negation_markers=("they",), path_k=1)
    assert any(a.role is RoleLabel.NEGATION
               for a in attach_negation_and_modifiers(sent, cues, near))
    assert not any(a.role is RoleLabel.NEGATION
                   for a in attach_negation_and_modifiers(sent, cues, far))


def test_path_lengths_tree(corpus):
    sent = corpus.load_document("gustave").sentences[0]
    dist = path_lengths(sent, 0)          # from "Gustave"
    assert dist[1] == 1                    # loves
    assert dist[7] == 2                    # beautiful (via loves)
    assert dist[5] == 3                    # they (via beautiful)


# --- coref propagation -------------------------------------------------------

def test_propagate_coref_two_sentences(corpus, lexicons, config, ruleset):
    doc = corpus.load_document("coref")
    annset = annotate_document(doc, ruleset, lexicons, config)
    experiencers = [a for a in annset if a.role is RoleLabel.EXPERIENCER]
    targets = [a for a in annset if a.role is RoleLabel.TARGET]
    assert Span(1, 0, 1) in [a.span for a in experiencers]       # "He"
    assert Span(1, 2, 3) in [a.span for a in targets]            # "them"
    propagated = [a for a in annset if a.provenance == "coref"]
    assert all(a.cue_link is None for a in propagated)           # no cue in s1


def test_propagate_coref_no_chains_is_identity(corpus):
    doc = corpus.load_document("skills")
    annset = AnnotationSet(doc_id="skills", annotations=(
        RoleAnnotation(id=0, role=RoleLabel.EXPERIENCER, span=Span(0, 0, 1)),))
    assert propagate_coref(doc, annset) == annset


def test_propagate_coref_idempotent(corpus):
    doc = corpus.load_document("coref")
    annset = AnnotationSet(doc_id="coref", annotations=(
        RoleAnnotation(id=0, role=RoleLabel.EXPERIENCER, span=Span(0, 0, 1)),))
    once = propagate_coref(doc, annset)
    assert len(once) == 2
    assert propagate_coref(doc, once) == once


def test_propagate_coref_only_adds_experiencer_and_target(corpus):
    doc = corpus.load_document("coref")
    annset = AnnotationSet(doc_id="coref", annotations=(
        RoleAnnotation(id=0, role=RoleLabel.ATTACK, span=Span(0, 1, 2)),
        RoleAnnotation(id=1, role=RoleLabel.TERRITORY, span=Span(0, 0, 1)),))
    assert propagate_coref(doc, annset) == annset


# --- whole pipeline ----------------------------------------------------------

def test_annotate_skills_exact(corpus, lexicons, config, ruleset):
    doc = corpus.load_document("skills")
    annset = annotate_document(doc, ruleset, lexicons, config)
    assert roles_and_texts(doc, annset) == [
        ("Attack", "attaquées"),
        ("Attacker", "Marc"),
        ("Experiencer", "Mes"),
        ("Territory", "Mes compétences"),
    ]


def test_annotate_active_voice(corpus, lexicons, config, ruleset):
    doc = corpus.load_document("active")
    annset = annotate_document(doc, ruleset, lexicons, config)
    assert roles_and_texts(doc, annset) == [
        ("Attack", "attaque"),
        ("Attacker", "Marc"),
        ("Experiencer", "mes"),
        ("Territory", "mes compétences"),
    ]


def test_annotate_triste_car(corpus, lexicons, config, ruleset):
    doc = corpus.load_document("triste-car")
    annset = annotate_document(doc, ruleset, lexicons, config)
    assert ("Cause", "car il pleut") in roles_and_texts(doc, annset)


def test_annotate_scene(corpus, lexicons, config, ruleset):
    doc = corpus.load_document("scene")
    annset = annotate_document(doc, ruleset, lexicons, config)
    texts = roles_and_texts(doc, annset)
    assert ("Territory", "Mon temps libre") in texts
    assert ("Attack", "attaqué") in texts
    assert ("Cue", "furieux") in texts
    # The chain me / Je / Je propagates the experiencer everywhere.
    assert sum(1 for role, _ in texts if role == "Experiencer") == 4


def test_annotate_empty_document(lexicons, config, ruleset):
    from emorole.model import Document
    annset = annotate_document(Document(id="empty"), ruleset, lexicons, config)
    assert len(annset) == 0


def test_annotate_deterministic(corpus, lexicons, config, ruleset):
    doc = corpus.load_document("scene")
    a = annotate_document(doc, ruleset, lexicons, config)
    b = annotate_document(doc, ruleset, lexicons, config)
    assert a == b


def test_stage_monotonicity(corpus, lexicons, config, ruleset):
    # Stages 1-7 only add annotations or set cue flags; stage 8 may only
    # drop exact duplicates.
    def shape(ann):
        return (ann.id, ann.role, ann.span)

    for doc_id in corpus.document_ids():
        doc = corpus.load_document(doc_id)
        stages = annotate_document_stages(doc, ruleset, lexicons, config)
        previous = set()
        for name, snapshot in stages[:-1]:
            current = {shape(a) for a in snapshot}
            assert previous <= current, f"stage {name} removed annotations"
            previous = current
        resolved = {shape(a) for a in stages[-1][1]}
        assert resolved <= previous


def test_cue_flag_changes_only(corpus, lexicons, config, ruleset):
    # Between consecutive stages an annotation with the same id may only
    # change negated / intensity_span, never role or span.
    for doc_id in corpus.document_ids():
        doc = corpus.load_document(doc_id)
        stages = annotate_document_stages(doc, ruleset, lexicons, config)
        for (_, before), (_, after) in zip(stages, stages[1:]):
            before_by_id = {a.id: a for a in before}
            for ann in after:
                old = before_by_id.get(ann.id)
                if old is None:
                    continue
                assert ann.role == old.role
                assert ann.span == old.span
                assert ann.emotion == old.emotion


# --- configuration -----------------------------------------------------------

def test_parse_config_overrides_and_lists():
    cfg = parse_config("path_k = 3\nnegation_markers = not, never\n"
                       "degree_adverbs = a little, very\n"
                       "sentiment_threshold = 0.25\nkeep_cause_marker = false\n")
    assert cfg.path_k == 3
    assert cfg.negation_markers == ("not", "never")
    assert "a little" in cfg.degree_adverbs
    assert cfg.sentiment_threshold == 0.25
    assert cfg.keep_cause_marker is False


def test_parse_config_rejects_unknown_key():
    with pytest.raises(ValueError, match="unknown key"):
        parse_config("no_such_option = 1\n")


def test_config_rejects_bad_k():
    with pytest.raises(ValueError):
        PipelineConfig(path_k=0)


def test_config_rejects_empty_lists():
    with pytest.raises(ValueError):
        PipelineConfig(negation_markers=())
