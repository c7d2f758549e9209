"""Shared document, annotation, and taxonomy types.

Everything here is an immutable value: instances can be shared freely
between threads and reused across pipeline runs.  Structural validation
that requires the whole document (span ranges, tree shape) lives in
:mod:`emorole.ingest`; constructors only enforce purely local invariants.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping, Optional, Sequence

from .errors import IntegrityError

# Sentinel head index marking the syntactic root of a sentence.  Kept
# distinct from any valid 0-based token index.
ROOT = -1


class SceneSection(Enum):
    """The four mandated parts of an autobiographical scene account."""

    FACTS = "Facts"
    EMOTIONS = "Emotions"
    REASONS = "Reasons"
    ACTIONS = "Actions"
    UNKNOWN = "Unknown"


class RoleLabel(Enum):
    CUE = "Cue"
    EXPERIENCER = "Experiencer"
    TARGET = "Target"
    CAUSE = "Cause"
    TERRITORY = "Territory"
    OBJECT = "Object"
    ATTACK = "Attack"
    ATTACKER = "Attacker"
    MODIFIER = "Modifier"
    NEGATION = "Negation"


# Roles that carry a cue_link pointing at a Cue, and roles that point at
# an Attack instead.  Object may stand alone (link optional either way).
CUE_LINKED_ROLES = frozenset({
    RoleLabel.EXPERIENCER, RoleLabel.TARGET, RoleLabel.CAUSE,
    RoleLabel.MODIFIER, RoleLabel.NEGATION,
})
ATTACK_LINKED_ROLES = frozenset({RoleLabel.TERRITORY, RoleLabel.ATTACKER})


class EmotionCategory(Enum):
    """Output emotion categories.

    The four named values are the primary emotions of the underlying
    emotion-coaching method; the two Unspecified values exist for cues
    found through sentiment scores alone.
    """

    JOY = "Joy"
    SADNESS = "Sadness"
    ANGER = "Anger"
    FEAR = "Fear"
    UNSPECIFIED_NEGATIVE = "UnspecifiedNegative"
    UNSPECIFIED_POSITIVE = "UnspecifiedPositive"


@dataclass(frozen=True)
class Token:
    """One token of a dependency-parsed sentence.

    index -- 0-based position within the sentence.
    head -- 0-based index of the governor, or ROOT.
    feats/misc -- immutable views are not enforced; treat as read-only.
    """

    index: int
    surface: str
    lemma: str
    upos: str
    head: int
    deprel: str
    feats: Mapping[str, str] = field(default_factory=dict)
    misc: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.surface:
            raise ValueError(f"token {self.index}: empty surface")
        if self.head == self.index:
            raise ValueError(f"token {self.index}: head points at itself")


@dataclass(frozen=True, order=True)
class Span:
    """Contiguous token range [start, end) within one sentence."""

    sentence: int
    start: int
    end: int

    def __post_init__(self):
        if self.sentence < 0 or self.start < 0 or self.start >= self.end:
            raise ValueError(f"invalid span {self.sentence}:{self.start}:{self.end}")

    def covers(self, sentence: int, index: int) -> bool:
        return self.sentence == sentence and self.start <= index < self.end

    def overlaps(self, other: "Span") -> bool:
        return (self.sentence == other.sentence
                and self.start < other.end and other.start < self.end)

    def __str__(self):
        return f"{self.sentence}:{self.start}:{self.end}"


@dataclass(frozen=True)
class Sentence:
    index: int
    tokens: Sequence[Token]
    chunks: Sequence[Span] = ()
    section: SceneSection = SceneSection.UNKNOWN

    def __len__(self):
        return len(self.tokens)

    def root(self) -> Token:
        for tok in self.tokens:
            if tok.head == ROOT:
                return tok
        raise IntegrityError(f"sentence {self.index}: no root token")

    def children(self, index: int):
        """Direct dependents of the token at `index`, in surface order."""
        return [t for t in self.tokens if t.head == index]

    def subtree(self, index: int, prune=None):
        """Token indices of the dependency subtree rooted at `index`.

        prune -- optional predicate on Token; children for which it is
        true are skipped together with their own subtrees.  The root
        token itself is never pruned.
        """
        out = {index}
        stack = [index]
        while stack:
            cur = stack.pop()
            for tok in self.tokens:
                if tok.head == cur and tok.index not in out:
                    if prune is not None and prune(tok):
                        continue
                    out.add(tok.index)
                    stack.append(tok.index)
        return out


@dataclass(frozen=True)
class CorefChain:
    """Mentions referring to the same referent, sorted by (sentence, start)."""

    id: int
    mentions: Sequence[Span]

    def __post_init__(self):
        if len(self.mentions) < 2:
            raise ValueError(f"chain {self.id}: needs at least 2 mentions")


@dataclass(frozen=True)
class Document:
    id: str
    language: str = "und"
    sentences: Sequence[Sentence] = ()
    chains: Sequence[CorefChain] = ()
    meta: Mapping[str, str] = field(default_factory=dict)

    def sentence(self, index: int) -> Sentence:
        return self.sentences[index]

    def token_at(self, sentence: int, index: int) -> Token:
        return self.sentences[sentence].tokens[index]

    def span_valid(self, span: Span) -> bool:
        return (0 <= span.sentence < len(self.sentences)
                and span.end <= len(self.sentences[span.sentence]))

    def span_text(self, span: Span) -> str:
        toks = self.sentences[span.sentence].tokens[span.start:span.end]
        return " ".join(t.surface for t in toks)


@dataclass(frozen=True)
class RoleAnnotation:
    """A typed span annotation.

    emotion, negated and intensity_span are meaningful for Cue only.
    cue_link names the id of the Cue this role attaches to, or of the
    Attack for Territory/Attacker.  provenance records the rule id or
    detector name that produced the annotation.
    """

    id: int
    role: RoleLabel
    span: Span
    emotion: Optional[EmotionCategory] = None
    negated: bool = False
    intensity_span: Optional[Span] = None
    cue_link: Optional[int] = None
    provenance: str = ""

    def __post_init__(self):
        if self.role is not RoleLabel.CUE:
            if self.emotion is not None:
                raise ValueError(f"{self.role.value} annotation cannot carry an emotion")
            if self.negated:
                raise ValueError(f"{self.role.value} annotation cannot be negated")
            if self.intensity_span is not None:
                raise ValueError(f"{self.role.value} annotation cannot carry an intensity span")

    def sort_key(self):
        return (self.span.sentence, self.span.start, self.span.end,
                _ROLE_ORDER[self.role], self.provenance)


_ROLE_ORDER = {label: i for i, label in enumerate(RoleLabel)}


@dataclass(frozen=True)
class AnnotationSet:
    doc_id: str
    annotations: Sequence[RoleAnnotation] = ()

    def __len__(self):
        return len(self.annotations)

    def __iter__(self):
        return iter(self.annotations)

    def by_role(self, role: RoleLabel):
        return [a for a in self.annotations if a.role is role]

    def get(self, ann_id: int) -> Optional[RoleAnnotation]:
        for a in self.annotations:
            if a.id == ann_id:
                return a
        return None


def canonicalize(annset: AnnotationSet) -> AnnotationSet:
    """Sort annotations by (sentence, start, end, role) and renumber ids densely.

    cue_link references are remapped to the new ids.  Idempotent.
    Raises IntegrityError when a cue_link references a missing id or an
    annotation that is neither a Cue nor an Attack.
    """
    by_id = {}
    for ann in annset.annotations:
        if ann.id in by_id:
            raise IntegrityError(f"duplicate annotation id {ann.id}")
        by_id[ann.id] = ann
    for ann in annset.annotations:
        if ann.cue_link is None:
            continue
        target = by_id.get(ann.cue_link)
        if target is None:
            raise IntegrityError(f"annotation {ann.id}: dangling cue_link {ann.cue_link}")
        if target.role not in (RoleLabel.CUE, RoleLabel.ATTACK):
            raise IntegrityError(
                f"annotation {ann.id}: cue_link {ann.cue_link} points at a "
                f"{target.role.value}, expected Cue or Attack")

    ordered = sorted(annset.annotations, key=RoleAnnotation.sort_key)
    remap = {ann.id: new_id for new_id, ann in enumerate(ordered)}
    renumbered = [
        replace(ann, id=remap[ann.id],
                cue_link=None if ann.cue_link is None else remap[ann.cue_link])
        for ann in ordered
    ]
    return AnnotationSet(doc_id=annset.doc_id, annotations=tuple(renumbered))
