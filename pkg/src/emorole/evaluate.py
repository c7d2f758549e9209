"""Scoring of predicted annotation sets against gold.

Matching is a greedy one-to-one alignment per role: candidate pairs are
ordered by descending token-overlap ratio (Jaccard), ties broken by span
position, and taken while both sides are free.  The three policies only
differ in which pairs are admissible:

    Exact        identical spans (overlap ratio 1)
    Jaccard(t)   overlap ratio >= t
    Overlap      at least one shared token

Because relaxing the policy only appends lower-ratio pairs to the greedy
order, matched counts (and so F1) never decrease from Exact to Jaccard
to Overlap.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import EmoroleError
from .model import AnnotationSet, RoleAnnotation, RoleLabel, Span

REPORT_SCHEMA = "emorole-report/1"


@dataclass(frozen=True)
class MatchPolicy:
    """Span matching policy: kind is 'exact', 'overlap' or 'jaccard'."""

    kind: str = "exact"
    threshold: float = 1.0

    def __post_init__(self):
        if self.kind not in ("exact", "overlap", "jaccard"):
            raise ValueError(f"unknown policy {self.kind!r}")
        if self.kind == "jaccard" and not (0.0 < self.threshold <= 1.0):
            raise ValueError("jaccard threshold must be in (0, 1]")

    def admits(self, ratio: float) -> bool:
        if self.kind == "exact":
            return ratio >= 1.0
        if self.kind == "jaccard":
            return ratio >= self.threshold
        return ratio > 0.0

    @classmethod
    def parse(cls, spec: str) -> "MatchPolicy":
        """Parse 'exact', 'overlap', or 'jaccard:<threshold>'."""
        spec = spec.strip().casefold()
        if spec in ("exact", "overlap"):
            return cls(kind=spec)
        if spec.startswith("jaccard"):
            _, _, rest = spec.partition(":")
            return cls(kind="jaccard", threshold=float(rest) if rest else 0.5)
        raise ValueError(f"unknown policy {spec!r}")

    def __str__(self):
        if self.kind == "jaccard":
            return f"jaccard:{self.threshold:g}"
        return self.kind

EXACT = MatchPolicy("exact")
OVERLAP = MatchPolicy("overlap")


def overlap_ratio(a: Span, b: Span) -> float:
    """Token-level Jaccard overlap of two spans (0 across sentences)."""
    if a.sentence != b.sentence:
        return 0.0
    inter = min(a.end, b.end) - max(a.start, b.start)
    if inter <= 0:
        return 0.0
    union = max(a.end, b.end) - min(a.start, b.start)
    return inter / union


@dataclass(frozen=True)
class RoleScore:
    gold: int
    predicted: int
    matched: int

    @property
    def precision(self) -> float:
        return self.matched / self.predicted if self.predicted else 0.0

    @property
    def recall(self) -> float:
        return self.matched / self.gold if self.gold else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


@dataclass(frozen=True)
class Report:
    doc_id: str
    policy: str
    per_role: Dict[RoleLabel, RoleScore]
    cue_category_total: int = 0
    cue_category_agree: int = 0

    @property
    def micro(self) -> RoleScore:
        return RoleScore(
            gold=sum(s.gold for s in self.per_role.values()),
            predicted=sum(s.predicted for s in self.per_role.values()),
            matched=sum(s.matched for s in self.per_role.values()))

    def _active_roles(self):
        return [s for s in self.per_role.values() if s.gold or s.predicted]

    @property
    def macro_precision(self) -> float:
        scores = self._active_roles()
        return sum(s.precision for s in scores) / len(scores) if scores else 0.0

    @property
    def macro_recall(self) -> float:
        scores = self._active_roles()
        return sum(s.recall for s in scores) / len(scores) if scores else 0.0

    @property
    def macro_f1(self) -> float:
        scores = self._active_roles()
        return sum(s.f1 for s in scores) / len(scores) if scores else 0.0

    @property
    def cue_category_accuracy(self) -> Optional[float]:
        if not self.cue_category_total:
            return None
        return self.cue_category_agree / self.cue_category_total

    def to_json(self) -> str:
        data = {
            "schema": REPORT_SCHEMA,
            "doc_id": self.doc_id,
            "policy": self.policy,
            "roles": {
                role.value: {"gold": s.gold, "predicted": s.predicted,
                             "matched": s.matched, "precision": s.precision,
                             "recall": s.recall, "f1": s.f1}
                for role, s in self.per_role.items()
            },
            "micro": {"precision": self.micro.precision, "recall": self.micro.recall,
                      "f1": self.micro.f1},
            "macro": {"precision": self.macro_precision, "recall": self.macro_recall,
                      "f1": self.macro_f1},
            "cue_category_accuracy": self.cue_category_accuracy,
        }
        return json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True) + "\n"

    def to_table(self) -> str:
        rows = [("role", "gold", "pred", "match", "P", "R", "F1")]
        for role in RoleLabel:
            s = self.per_role.get(role)
            if s is None or (s.gold == 0 and s.predicted == 0):
                continue
            rows.append((role.value, str(s.gold), str(s.predicted), str(s.matched),
                         f"{s.precision:.3f}", f"{s.recall:.3f}", f"{s.f1:.3f}"))
        m = self.micro
        rows.append(("micro", str(m.gold), str(m.predicted), str(m.matched),
                     f"{m.precision:.3f}", f"{m.recall:.3f}", f"{m.f1:.3f}"))
        rows.append(("macro", "", "", "", f"{self.macro_precision:.3f}",
                     f"{self.macro_recall:.3f}", f"{self.macro_f1:.3f}"))
        if self.cue_category_accuracy is not None:
            rows.append(("cue-category-acc", "", "", str(self.cue_category_total),
                         "", "", f"{self.cue_category_accuracy:.3f}"))
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
                 for row in rows]
        lines.insert(1, "  ".join("-" * w for w in widths))
        return "\n".join(lines) + "\n"


def _greedy_pairs(gold: Sequence[RoleAnnotation], pred: Sequence[RoleAnnotation],
                  policy: MatchPolicy) -> List[Tuple[RoleAnnotation, RoleAnnotation]]:
    candidates = []
    for gi, g in enumerate(gold):
        for pi, p in enumerate(pred):
            ratio = overlap_ratio(g.span, p.span)
            if policy.admits(ratio):
                lo, hi = sorted((g.span, p.span))
                # The tie-break after (ratio, position) is symmetric in the
                # two sets, so score(a, b) and score(b, a) align identically.
                candidates.append(((-ratio, lo, hi, min(gi, pi), max(gi, pi)),
                                   gi, pi, g, p))
    candidates.sort(key=lambda c: c[0])
    matched_g, matched_p, pairs = set(), set(), []
    for _key, gi, pi, g, p in candidates:
        if gi in matched_g or pi in matched_p:
            continue
        matched_g.add(gi)
        matched_p.add(pi)
        pairs.append((g, p))
    return pairs


def score(gold: AnnotationSet, pred: AnnotationSet,
          policy: MatchPolicy = EXACT) -> Report:
    """Per-role precision/recall/F1 of pred against gold.

    Role labels must agree exactly for a pair to align.  Emotion-category
    agreement over matched cues is reported separately, never folded into
    span F1.  Raises when the two sets reference different documents.
    """
    if gold.doc_id != pred.doc_id:
        raise EmoroleError(f"document mismatch: gold is {gold.doc_id!r}, "
                           f"predicted is {pred.doc_id!r}")
    per_role = {}
    cue_total = cue_agree = 0
    for role in RoleLabel:
        g = gold.by_role(role)
        p = pred.by_role(role)
        pairs = _greedy_pairs(g, p, policy)
        per_role[role] = RoleScore(gold=len(g), predicted=len(p), matched=len(pairs))
        if role is RoleLabel.CUE:
            cue_total = len(pairs)
            cue_agree = sum(1 for gg, pp in pairs if gg.emotion == pp.emotion)
    return Report(doc_id=gold.doc_id, policy=str(policy), per_role=per_role,
                  cue_category_total=cue_total, cue_category_agree=cue_agree)


def merge_reports(reports: Sequence[Report], doc_id: str = "corpus") -> Report:
    """Merge per-document reports by summing count matrices."""
    if not reports:
        return Report(doc_id=doc_id, policy=str(EXACT), per_role={})
    per_role = {}
    for role in RoleLabel:
        per_role[role] = RoleScore(
            gold=sum(r.per_role.get(role, RoleScore(0, 0, 0)).gold for r in reports),
            predicted=sum(r.per_role.get(role, RoleScore(0, 0, 0)).predicted for r in reports),
            matched=sum(r.per_role.get(role, RoleScore(0, 0, 0)).matched for r in reports))
    return Report(doc_id=doc_id, policy=reports[0].policy, per_role=per_role,
                  cue_category_total=sum(r.cue_category_total for r in reports),
                  cue_category_agree=sum(r.cue_category_agree for r in reports))


@dataclass(frozen=True)
class DiffRecord:
    kind: str                     # false_positive | false_negative | span_mismatch
    role: RoleLabel
    gold: Optional[RoleAnnotation] = None
    pred: Optional[RoleAnnotation] = None

    @property
    def provenance(self) -> str:
        return self.pred.provenance if self.pred is not None else ""


def diff(gold: AnnotationSet, pred: AnnotationSet) -> List[DiffRecord]:
    """Error records for everything Exact matching leaves unmatched.

    Leftover gold/pred annotations of the same role that still overlap are
    paired as span mismatches; the rest are false negatives / positives.
    Every unmatched annotation appears in exactly one record.
    """
    if gold.doc_id != pred.doc_id:
        raise EmoroleError(f"document mismatch: gold is {gold.doc_id!r}, "
                           f"predicted is {pred.doc_id!r}")
    records = []
    for role in RoleLabel:
        g = gold.by_role(role)
        p = pred.by_role(role)
        exact = _greedy_pairs(g, p, EXACT)
        left_g = [a for a in g if not any(a is gg for gg, _ in exact)]
        left_p = [a for a in p if not any(a is pp for _, pp in exact)]
        near = _greedy_pairs(left_g, left_p, OVERLAP)
        for gg, pp in near:
            records.append(DiffRecord(kind="span_mismatch", role=role, gold=gg, pred=pp))
        for a in left_g:
            if not any(a is gg for gg, _ in near):
                records.append(DiffRecord(kind="false_negative", role=role, gold=a))
        for a in left_p:
            if not any(a is pp for _, pp in near):
                records.append(DiffRecord(kind="false_positive", role=role, pred=a))
    return records
