"""The role-annotation pipeline.

Stage order is fixed:

  1. lexicon cue detection
  2. attack-term detection
  3. rule matching (territory, attacker, object, and any rule-defined roles)
  4. experiencer detection (first-person filtering + cue subjects)
  5. target and cause detection off cue dependents
  6. negation and intensity-modifier attachment
  7. coreference propagation of experiencers and targets
  8. duplicate resolution, then canonicalization

Stages 1-7 only ever add annotations or set cue flags; stage 8 is the
only place where (exact-duplicate) annotations are removed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .lexicon import CueThresholds, Lexicons, classify_cue
from .model import (AnnotationSet, Document, EmotionCategory, RoleAnnotation,
                    RoleLabel, Sentence, Span, canonicalize)
from .rules import CompileContext, ExtentPolicy, Rule, RuleSet, extract_span, find_matches

FIRST_PERSON_FR = ("je", "j'", "me", "m'", "moi", "mon", "ma", "mes",
                   "nous", "notre", "nos")
FIRST_PERSON_EN = ("i", "me", "my", "mine", "myself", "we", "us", "our",
                   "ours", "ourselves")


@dataclass(frozen=True)
class PipelineConfig:
    """Language-dependent marker lists and pipeline parameters.

    Marker lists hold lemmas; entries may be multiword ("parce que",
    "a little"), matched as contiguous lemma sequences.  The first-person
    list holds surfaces, compared case-insensitively.
    """

    first_person: Tuple[str, ...] = FIRST_PERSON_FR + FIRST_PERSON_EN
    causal_markers: Tuple[str, ...] = ("because", "since", "car", "parce que",
                                       "à cause de", "puisque")
    negation_markers: Tuple[str, ...] = ("not", "no", "never", "ne", "pas",
                                         "jamais", "non")
    degree_adverbs: Tuple[str, ...] = ("very", "really", "slightly", "extremely",
                                       "a little", "a bit", "somewhat", "très",
                                       "un peu", "vraiment", "légèrement")
    path_k: int = 2
    sentiment_threshold: float = 0.5
    map_disgust_to_anger: bool = False
    keep_cause_marker: bool = True
    attack_term_set: str = "attack"
    conflict_policy: str = "collapse-duplicates"
    cue_upos: Tuple[str, ...] = ("VERB", "ADJ", "NOUN", "ADV")
    subject_deprels: Tuple[str, ...] = ("nsubj", "nsubj:pass")
    target_deprels: Tuple[str, ...] = ("obj", "iobj", "obl")
    cause_deprels: Tuple[str, ...] = ("advcl", "ccomp", "csubj", "acl", "conj")

    def __post_init__(self):
        if self.path_k < 1:
            raise ValueError("path_k must be >= 1")
        if self.conflict_policy != "collapse-duplicates":
            raise ValueError(f"unsupported conflict policy {self.conflict_policy!r}")
        for name in ("first_person", "causal_markers", "negation_markers",
                     "degree_adverbs"):
            if not getattr(self, name):
                raise ValueError(f"{name} must not be empty")

    def thresholds(self) -> CueThresholds:
        return CueThresholds(sentiment_threshold=self.sentiment_threshold,
                             map_disgust_to_anger=self.map_disgust_to_anger)

    def compile_context(self, lexicons: Lexicons) -> CompileContext:
        return CompileContext(lexicons.term_sets,
                              first_person=self.first_person,
                              emotion_lexicon=lexicons.emotions)


_LIST_KEYS = ("first_person", "causal_markers", "negation_markers",
              "degree_adverbs", "cue_upos", "subject_deprels",
              "target_deprels", "cause_deprels")
_INT_KEYS = ("path_k",)
_FLOAT_KEYS = ("sentiment_threshold",)
_BOOL_KEYS = ("map_disgust_to_anger", "keep_cause_marker")
_STR_KEYS = ("attack_term_set", "conflict_policy")


def parse_config(text: str, base: Optional[PipelineConfig] = None) -> PipelineConfig:
    """Parse a key=value configuration file over the built-in defaults.

    List values are comma-separated; entries may contain spaces
    (multiword markers).  Unknown keys are rejected.
    """
    overrides = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {line_no}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in _LIST_KEYS:
            overrides[key] = tuple(v.strip() for v in value.split(",") if v.strip())
        elif key in _INT_KEYS:
            overrides[key] = int(value)
        elif key in _FLOAT_KEYS:
            overrides[key] = float(value)
        elif key in _BOOL_KEYS:
            if value.casefold() not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(f"config line {line_no}: {key} must be boolean")
            overrides[key] = value.casefold() in ("true", "1", "yes")
        elif key in _STR_KEYS:
            overrides[key] = value
        else:
            raise ValueError(f"config line {line_no}: unknown key {key!r}")
    return replace(base or PipelineConfig(), **overrides)


# Priority assigned to built-in detectors when resolving duplicates
# against rule productions (rules carry their own priority).
DETECTOR_PRIORITY = 0


class _Ids:
    def __init__(self, start: int = 0):
        self.next = start

    def take(self) -> int:
        out = self.next
        self.next += 1
        return out


def path_lengths(sentence: Sentence, start: int) -> Dict[int, int]:
    """Undirected dependency-path length from `start` to every token."""
    adjacent: Dict[int, List[int]] = {t.index: [] for t in sentence.tokens}
    for tok in sentence.tokens:
        if tok.head >= 0:
            adjacent[tok.index].append(tok.head)
            adjacent[tok.head].append(tok.index)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nxt in adjacent[cur]:
            if nxt not in dist:
                dist[nxt] = dist[cur] + 1
                queue.append(nxt)
    return dist


def find_marker_matches(sentence: Sentence, phrases: Iterable[str]) -> List[Tuple[int, ...]]:
    """Occurrences of marker phrases as contiguous lemma sequences.

    Longer phrases claim their tokens first, so "a little" wins over a
    bare "little" entry.  Returns sorted tuples of token indices.
    """
    lemmas = [t.lemma.casefold() for t in sentence.tokens]
    sequences = sorted((tuple(p.casefold().split()) for p in phrases),
                       key=len, reverse=True)
    claimed = set()
    matches = []
    for seq in sequences:
        for start in range(len(lemmas) - len(seq) + 1):
            indices = tuple(range(start, start + len(seq)))
            if any(i in claimed for i in indices):
                continue
            if tuple(lemmas[start:start + len(seq)]) == seq:
                claimed.update(indices)
                matches.append(indices)
    matches.sort()
    return matches


def _nearest_cue(cues: Sequence[RoleAnnotation], sentence: Sentence,
                 from_indices: Iterable[int]) -> Optional[RoleAnnotation]:
    """The cue closest by dependency path, ties to the leftmost cue."""
    local = [c for c in cues if c.span.sentence == sentence.index]
    if not local:
        return None
    best = None
    for idx in from_indices:
        dist = path_lengths(sentence, idx)
        for cue in local:
            d = dist.get(cue.span.start)
            if d is None:
                continue
            key = (d, cue.span.start)
            if best is None or key < best[0]:
                best = (key, cue)
    return best[1] if best else None


def detect_cues(sentence: Sentence, lexicons: Lexicons, cfg: PipelineConfig,
                ids: Optional[_Ids] = None) -> List[RoleAnnotation]:
    """One Cue per content token the lexicons classify as emotional."""
    ids = ids or _Ids()
    out = []
    for tok in sentence.tokens:
        if tok.upos not in cfg.cue_upos:
            continue
        hit = classify_cue(tok.lemma, tok.upos, lexicons.emotions,
                           lexicons.sentiments, cfg.thresholds())
        if hit is None:
            continue
        category, _strength = hit
        unspecified = category in (EmotionCategory.UNSPECIFIED_POSITIVE,
                                   EmotionCategory.UNSPECIFIED_NEGATIVE)
        out.append(RoleAnnotation(
            id=ids.take(), role=RoleLabel.CUE,
            span=Span(sentence.index, tok.index, tok.index + 1),
            emotion=category,
            provenance="sentiment-cue" if unspecified else "lexicon-cue"))
    return out


def detect_attacks(sentence: Sentence, lexicons: Lexicons, cfg: PipelineConfig,
                   ids: Optional[_Ids] = None) -> List[RoleAnnotation]:
    ids = ids or _Ids()
    terms = lexicons.term_sets.get(cfg.attack_term_set)
    if terms is None:
        return []
    return [
        RoleAnnotation(id=ids.take(), role=RoleLabel.ATTACK,
                       span=Span(sentence.index, tok.index, tok.index + 1),
                       provenance="attack-term")
        for tok in sentence.tokens if tok.lemma.casefold() in terms.lemmas
    ]


def run_rules(sentence: Sentence, ruleset: RuleSet,
              existing: Sequence[RoleAnnotation],
              ids: Optional[_Ids] = None) -> List[RoleAnnotation]:
    """Apply every enabled rule and emit its productions.

    A production's link resolves to the annotation produced for the
    linked variable in the same match when there is one, otherwise to an
    existing Cue/Attack annotation covering that variable's token.
    """
    ids = ids or _Ids()
    out = []
    for rule in ruleset:
        if not rule.enabled:
            continue
        for match in find_matches(rule, sentence):
            produced: Dict[str, RoleAnnotation] = {}
            pending = []
            for prod in rule.produce:
                tok = match.bindings[prod.var]
                ann = RoleAnnotation(
                    id=ids.take(), role=prod.role,
                    span=extract_span(tok, prod.extent, sentence),
                    provenance=rule.id)
                if prod.var not in produced and prod.role in (RoleLabel.CUE, RoleLabel.ATTACK):
                    produced[prod.var] = ann
                pending.append((prod, ann))
            for prod, ann in pending:
                link_id = None
                if prod.link is not None:
                    target = produced.get(prod.link)
                    if target is None:
                        target = _covering_linkable(existing, sentence,
                                                    match.bindings[prod.link].index)
                    if target is not None:
                        link_id = target.id
                out.append(replace(ann, cue_link=link_id))
    return out


def _covering_linkable(annotations: Sequence[RoleAnnotation], sentence: Sentence,
                       index: int) -> Optional[RoleAnnotation]:
    covering = [a for a in annotations
                if a.role in (RoleLabel.CUE, RoleLabel.ATTACK)
                and a.span.covers(sentence.index, index)]
    if not covering:
        return None
    return min(covering, key=lambda a: (a.span.end - a.span.start, a.span.start, a.id))


def detect_experiencers(sentence: Sentence, cues: Sequence[RoleAnnotation],
                        cfg: PipelineConfig,
                        ids: Optional[_Ids] = None) -> List[RoleAnnotation]:
    """First-person tokens, plus nominal subjects of cue verbs."""
    ids = ids or _Ids()
    first_person = frozenset(s.casefold() for s in cfg.first_person)
    out = []
    for tok in sentence.tokens:
        if tok.surface.casefold() not in first_person:
            continue
        cue = _nearest_cue(cues, sentence, (tok.index,))
        out.append(RoleAnnotation(
            id=ids.take(), role=RoleLabel.EXPERIENCER,
            span=Span(sentence.index, tok.index, tok.index + 1),
            cue_link=None if cue is None else cue.id,
            provenance="first-person"))
    for cue in cues:
        if cue.span.sentence != sentence.index:
            continue
        cue_tok = sentence.tokens[cue.span.start]
        if cue_tok.upos != "VERB":
            continue
        for child in sentence.children(cue_tok.index):
            if child.deprel in cfg.subject_deprels:
                out.append(RoleAnnotation(
                    id=ids.take(), role=RoleLabel.EXPERIENCER,
                    span=Span(sentence.index, child.index, child.index + 1),
                    cue_link=cue.id, provenance="cue-subject"))
    return out


def detect_targets_and_causes(sentence: Sentence, cues: Sequence[RoleAnnotation],
                              cfg: PipelineConfig,
                              ids: Optional[_Ids] = None) -> List[RoleAnnotation]:
    """Targets from object/oblique cue dependents, causes from clausal ones.

    A clausal dependent counts as a cause only when its subtree contains
    a causal marker; the cause span is the subtree minus nested clauses,
    with the marker kept or dropped per configuration.
    """
    ids = ids or _Ids()
    marker_matches = find_marker_matches(sentence, cfg.causal_markers)
    out = []
    for cue in cues:
        if cue.span.sentence != sentence.index:
            continue
        cue_tok = sentence.tokens[cue.span.start]
        for child in sentence.children(cue_tok.index):
            if child.deprel in cfg.target_deprels:
                out.append(RoleAnnotation(
                    id=ids.take(), role=RoleLabel.TARGET,
                    span=extract_span(child, ExtentPolicy.ENCLOSING_CHUNK, sentence),
                    cue_link=cue.id, provenance="cue-object"))
            if child.deprel.split(":", 1)[0] in cfg.cause_deprels:
                clause = sentence.subtree(child.index)
                contained = [m for m in marker_matches if set(m) <= clause]
                if not contained:
                    continue
                indices = extract_span(child, ExtentPolicy.SUBTREE_CORE, sentence)
                covered = set(range(indices.start, indices.end))
                if not cfg.keep_cause_marker:
                    for m in contained:
                        covered -= set(m)
                if not covered:
                    continue
                out.append(RoleAnnotation(
                    id=ids.take(), role=RoleLabel.CAUSE,
                    span=Span(sentence.index, min(covered), max(covered) + 1),
                    cue_link=cue.id, provenance="causal-clause"))
    return out


def attach_negation_and_modifiers(sentence: Sentence,
                                  annotations: Sequence[RoleAnnotation],
                                  cfg: PipelineConfig,
                                  ids: Optional[_Ids] = None) -> List[RoleAnnotation]:
    """Attach negation and intensity markers to nearby cues.

    Returns the full updated annotation list: marker annotations appended,
    affected cues replaced in place with their flags set.  Never removes
    or re-spans a cue.
    """
    ids = ids or _Ids(max((a.id for a in annotations), default=-1) + 1)
    anns = list(annotations)
    cue_positions = {i: a for i, a in enumerate(anns)
                     if a.role is RoleLabel.CUE and a.span.sentence == sentence.index}

    def nearest_position(indices):
        best = None
        for idx in indices:
            dist = path_lengths(sentence, idx)
            for pos, cue in cue_positions.items():
                d = dist.get(cue.span.start)
                if d is None or d > cfg.path_k:
                    continue
                key = (d, cue.span.start)
                if best is None or key < best[0]:
                    best = (key, pos)
        return None if best is None else best[1]

    additions = []
    for indices in find_marker_matches(sentence, cfg.negation_markers):
        pos = nearest_position(indices)
        if pos is None:
            continue
        cue = cue_positions[pos]
        additions.append(RoleAnnotation(
            id=ids.take(), role=RoleLabel.NEGATION,
            span=Span(sentence.index, indices[0], indices[-1] + 1),
            cue_link=cue.id, provenance="negation-marker"))
        cue_positions[pos] = replace(cue, negated=True)
    for indices in find_marker_matches(sentence, cfg.degree_adverbs):
        pos = nearest_position(indices)
        if pos is None:
            continue
        cue = cue_positions[pos]
        span = Span(sentence.index, indices[0], indices[-1] + 1)
        additions.append(RoleAnnotation(
            id=ids.take(), role=RoleLabel.MODIFIER,
            span=span, cue_link=cue.id, provenance="degree-modifier"))
        if cue.intensity_span is None:
            cue_positions[pos] = replace(cue, intensity_span=span)
    for pos, cue in cue_positions.items():
        anns[pos] = cue
    return anns + additions


def _mention_head(sentence: Sentence, span: Span) -> int:
    """The token of the span whose head lies outside it (leftmost such)."""
    inside = set(range(span.start, span.end))
    for idx in sorted(inside):
        if sentence.tokens[idx].head not in inside:
            return idx
    return span.start


def propagate_coref(doc: Document, annset: AnnotationSet) -> AnnotationSet:
    """Spread Experiencer/Target roles along coreference chains.

    A chain with one mention overlapping a role span makes every mention
    that lacks that role gain it, with provenance "coref" and a link to
    the nearest cue of its own sentence when one exists.  Idempotent;
    never touches other roles.
    """
    anns = list(annset.annotations)
    ids = _Ids(max((a.id for a in anns), default=-1) + 1)
    cues = [a for a in anns if a.role is RoleLabel.CUE]
    for chain in doc.chains:
        for role in (RoleLabel.EXPERIENCER, RoleLabel.TARGET):
            spans = [a.span for a in anns if a.role is role]
            overlapping = [m for m in chain.mentions
                           if any(m.overlaps(s) for s in spans)]
            if not overlapping:
                continue
            for mention in chain.mentions:
                if any(mention.overlaps(s) for s in spans):
                    continue
                sentence = doc.sentences[mention.sentence]
                cue = _nearest_cue(cues, sentence, (_mention_head(sentence, mention),))
                anns.append(RoleAnnotation(
                    id=ids.take(), role=role, span=mention,
                    cue_link=None if cue is None else cue.id,
                    provenance="coref"))
    return AnnotationSet(doc_id=annset.doc_id, annotations=tuple(anns))


def resolve_conflicts(annotations: Sequence[RoleAnnotation],
                      rule_priority: Dict[str, int]) -> List[RoleAnnotation]:
    """Collapse identical (role, span) duplicates.

    The annotation with the highest-priority provenance survives (rules
    carry their document priority, built-in detectors rank 0); flags and
    links absent from the survivor are merged in from the duplicates.
    Links to dropped duplicates are rewritten to point at the survivor.
    """
    def priority(ann: RoleAnnotation) -> int:
        return rule_priority.get(ann.provenance, DETECTOR_PRIORITY)

    groups: Dict[tuple, List[RoleAnnotation]] = {}
    for ann in annotations:
        groups.setdefault((ann.role, ann.span), []).append(ann)

    keep: Dict[int, RoleAnnotation] = {}
    alias: Dict[int, int] = {}
    for members in groups.values():
        members.sort(key=lambda a: (-priority(a), a.provenance, a.id))
        head = members[0]
        merged = head
        for other in members[1:]:
            alias[other.id] = head.id
            merged = replace(
                merged,
                emotion=merged.emotion if merged.emotion is not None else other.emotion,
                negated=merged.negated or other.negated,
                intensity_span=(merged.intensity_span
                                if merged.intensity_span is not None
                                else other.intensity_span),
                cue_link=merged.cue_link if merged.cue_link is not None else other.cue_link)
        keep[head.id] = merged

    out = []
    for ann in annotations:
        if ann.id not in keep:
            continue
        final = keep[ann.id]
        if final.cue_link is not None:
            target = alias.get(final.cue_link, final.cue_link)
            while target in alias:
                target = alias[target]
            if target == final.id:
                target = None
            final = replace(final, cue_link=target)
        out.append(final)
    return out


STAGES = ("cues", "attacks", "rules", "experiencers", "targets_causes",
          "negation_modifiers", "coref", "resolve")


def annotate_document_stages(doc: Document, ruleset: RuleSet, lexicons: Lexicons,
                             cfg: PipelineConfig) -> List[Tuple[str, AnnotationSet]]:
    """Run the pipeline, returning the working set after every stage."""
    ids = _Ids()
    anns: List[RoleAnnotation] = []
    snapshots = []

    def snap(name):
        snapshots.append((name, AnnotationSet(doc_id=doc.id, annotations=tuple(anns))))

    for sentence in doc.sentences:
        anns.extend(detect_cues(sentence, lexicons, cfg, ids))
    snap("cues")
    for sentence in doc.sentences:
        anns.extend(detect_attacks(sentence, lexicons, cfg, ids))
    snap("attacks")
    for sentence in doc.sentences:
        anns.extend(run_rules(sentence, ruleset, anns, ids))
    snap("rules")
    cues = [a for a in anns if a.role is RoleLabel.CUE]
    for sentence in doc.sentences:
        anns.extend(detect_experiencers(sentence, cues, cfg, ids))
    snap("experiencers")
    for sentence in doc.sentences:
        anns.extend(detect_targets_and_causes(sentence, cues, cfg, ids))
    snap("targets_causes")
    for sentence in doc.sentences:
        anns = attach_negation_and_modifiers(sentence, anns, cfg, ids)
    snap("negation_modifiers")
    anns = list(propagate_coref(doc, AnnotationSet(doc.id, tuple(anns))).annotations)
    snap("coref")
    rule_priority = {rule.id: rule.priority for rule in ruleset}
    anns = resolve_conflicts(anns, rule_priority)
    snap("resolve")
    return snapshots


def annotate_document(doc: Document, ruleset: RuleSet, lexicons: Lexicons,
                      cfg: Optional[PipelineConfig] = None) -> AnnotationSet:
    """Run the full pipeline and return the canonical annotation set."""
    cfg = cfg or PipelineConfig()
    snapshots = annotate_document_stages(doc, ruleset, lexicons, cfg)
    return canonicalize(snapshots[-1][1])
