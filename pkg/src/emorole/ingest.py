"""Sidecar metadata (coref chains, noun chunks, scene sections) and
whole-document validation.

The sidecar travels next to the interchange file as a JSON document:

    {"schema": "emorole-sidecar/1", "doc_id": "...", "language": "fr",
     "chains": [{"id": 0, "mentions": [{"sent": 0, "start": 0, "end": 1}, ...]}],
     "chunks": [{"sent": 0, "start": 0, "end": 2}, ...],
     "sections": [{"label": "Facts", "first_sent": 0, "last_sent": 1}, ...]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

from .errors import IntegrityError, ParseError
from .model import ROOT, CorefChain, Document, SceneSection, Span

SIDECAR_SCHEMA = "emorole-sidecar/1"


@dataclass(frozen=True)
class SidecarData:
    doc_id: str
    language: Optional[str] = None
    chains: Tuple[CorefChain, ...] = ()
    chunks: Tuple[Span, ...] = ()
    sections: Tuple[Tuple[SceneSection, int, int], ...] = ()
    meta: dict = field(default_factory=dict)


def _span_from_json(obj) -> Span:
    try:
        return Span(sentence=int(obj["sent"]), start=int(obj["start"]), end=int(obj["end"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed span object {obj!r}: {exc}") from None


def load_sidecar(text: str) -> SidecarData:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"sidecar is not valid JSON: {exc}") from None
    if "doc_id" not in data:
        raise ParseError("sidecar missing doc_id")
    chains = []
    for obj in data.get("chains", ()):
        mentions = sorted((_span_from_json(m) for m in obj.get("mentions", ())),
                          key=lambda s: (s.sentence, s.start))
        chains.append(CorefChain(id=int(obj["id"]), mentions=tuple(mentions)))
    chunks = tuple(_span_from_json(c) for c in data.get("chunks", ()))
    sections = []
    for obj in data.get("sections", ()):
        try:
            label = SceneSection(obj["label"])
        except (KeyError, ValueError):
            raise ParseError(f"unknown section label in {obj!r}") from None
        sections.append((label, int(obj["first_sent"]), int(obj["last_sent"])))
    sections.sort(key=lambda s: s[1])
    for (_, a0, a1), (_, b0, _b1) in zip(sections, sections[1:]):
        if a1 >= b0 or a0 > a1:
            raise IntegrityError("section ranges must be sorted and disjoint")
    return SidecarData(
        doc_id=str(data["doc_id"]),
        language=data.get("language"),
        chains=tuple(chains),
        chunks=chunks,
        sections=tuple(sections),
        meta=dict(data.get("meta", {})),
    )


def dump_sidecar(sc: SidecarData) -> str:
    data = {
        "schema": SIDECAR_SCHEMA,
        "doc_id": sc.doc_id,
        "chains": [
            {"id": c.id,
             "mentions": [{"sent": m.sentence, "start": m.start, "end": m.end}
                          for m in c.mentions]}
            for c in sc.chains
        ],
        "chunks": [{"sent": c.sentence, "start": c.start, "end": c.end} for c in sc.chunks],
        "sections": [{"label": label.value, "first_sent": first, "last_sent": last}
                     for label, first, last in sc.sections],
    }
    if sc.language:
        data["language"] = sc.language
    if sc.meta:
        data["meta"] = sc.meta
    return json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def attach_sidecar(doc: Document, sc: SidecarData) -> Document:
    """Merge chains, chunks and section labels into the document.

    Raises IntegrityError on id mismatch or any span out of range.
    """
    if sc.doc_id != doc.id:
        raise IntegrityError(f"sidecar doc_id {sc.doc_id!r} does not match document {doc.id!r}")
    for chain in sc.chains:
        for m in chain.mentions:
            if not doc.span_valid(m):
                raise IntegrityError(f"chain {chain.id}: mention {m} out of range")
    per_sentence = {s.index: [] for s in doc.sentences}
    for chunk in sc.chunks:
        if not doc.span_valid(chunk):
            raise IntegrityError(f"chunk {chunk} out of range")
        per_sentence[chunk.sentence].append(chunk)
    section_of = {}
    for label, first, last in sc.sections:
        if first < 0 or last >= len(doc.sentences):
            raise IntegrityError(f"section {label.value} range {first}-{last} out of range")
        for i in range(first, last + 1):
            section_of[i] = label
    sentences = tuple(
        replace(s,
                chunks=tuple(sorted(per_sentence[s.index])),
                section=section_of.get(s.index, SceneSection.UNKNOWN))
        for s in doc.sentences
    )
    return replace(doc, sentences=sentences, chains=sc.chains,
                   language=sc.language or doc.language)


def validate(doc: Document) -> List[str]:
    """Check every structural invariant; returns one message per violation.

    An empty list means the document is well-formed.  Violations are data,
    not exceptions: callers decide whether to reject.
    """
    violations = []
    for pos, sent in enumerate(doc.sentences):
        if sent.index != pos:
            violations.append(f"sentence {pos}: index {sent.index} not contiguous")
        n = len(sent.tokens)
        roots = []
        for tok in sent.tokens:
            if tok.head == ROOT:
                roots.append(tok.index)
            elif not (0 <= tok.head < n):
                violations.append(
                    f"sentence {sent.index} token {tok.index}: head {tok.head} out of range")
        for i, tok in enumerate(sent.tokens):
            if tok.index != i:
                violations.append(
                    f"sentence {sent.index}: token index {tok.index} at position {i}")
        if len(roots) == 0:
            violations.append(f"sentence {sent.index}: no root token")
        elif len(roots) > 1:
            violations.append(
                f"sentence {sent.index}: multiple roots (tokens {', '.join(map(str, roots))})")
        cyclic = set()
        for tok in sent.tokens:
            seen = set()
            cur = tok.index
            while cur != ROOT and 0 <= cur < n and cur not in cyclic:
                if cur in seen:
                    cyclic.update(seen)
                    break
                seen.add(cur)
                cur = sent.tokens[cur].head
        if cyclic:
            violations.append(
                f"sentence {sent.index}: cyclic head graph involving tokens "
                f"{', '.join(map(str, sorted(cyclic)))}")
        for chunk in sent.chunks:
            if chunk.sentence != sent.index or chunk.end > n:
                violations.append(f"sentence {sent.index}: chunk {chunk} out of range")
    for chain in doc.chains:
        ordered = sorted(chain.mentions, key=lambda m: (m.sentence, m.start))
        if list(ordered) != list(chain.mentions):
            violations.append(f"chain {chain.id}: mentions not sorted by (sentence, start)")
        for m in chain.mentions:
            if not doc.span_valid(m):
                violations.append(f"chain {chain.id}: mention {m} out of range")
    return violations
