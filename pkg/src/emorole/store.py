"""Standoff annotation persistence and the on-disk corpus store.

Corpus layout:

    <store>/<doc_id>/source.conllu     interchange file
    <store>/<doc_id>/sidecar.json      chains, chunks, sections
    <store>/<doc_id>/predicted.ann     engine output
    <store>/<doc_id>/gold.ann          corrected annotations

Annotation files are tab-separated, one record per annotation:

    id  role  sent:start:end  emotion  negated  cue_link  intensity  provenance

with '_' for absent fields and a '# emorole-ann/1' header line.  Writes
are atomic (temp file + rename) and keep the prior version as '.bak'.
A lock file enforces a single writer per document.
"""

from __future__ import annotations

import os
import shutil
import tempfile
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from .conllu import parse_conllu, serialize_conllu
from .errors import IntegrityError, NotFoundError, ParseError, StoreLockError
from .ingest import SidecarData, attach_sidecar, dump_sidecar, load_sidecar
from .model import (AnnotationSet, Document, EmotionCategory, RoleAnnotation,
                    RoleLabel, Span, canonicalize)

ANN_SCHEMA = "emorole-ann/1"
KINDS = ("predicted", "gold")


def dump_annotations(annset: AnnotationSet) -> str:
    lines = [f"# {ANN_SCHEMA} doc={annset.doc_id}"]
    for ann in annset.annotations:
        lines.append("\t".join((
            str(ann.id),
            ann.role.value,
            str(ann.span),
            ann.emotion.value if ann.emotion is not None else "_",
            "1" if ann.negated else "0",
            str(ann.cue_link) if ann.cue_link is not None else "_",
            str(ann.intensity_span) if ann.intensity_span is not None else "_",
            ann.provenance or "_",
        )))
    return "\n".join(lines) + "\n"


def _parse_span(cell: str, line_no: int) -> Span:
    parts = cell.split(":")
    if len(parts) != 3:
        raise ParseError(f"malformed span {cell!r}", line=line_no)
    try:
        return Span(int(parts[0]), int(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise ParseError(f"malformed span {cell!r}: {exc}", line=line_no) from None


def parse_annotations(text: str, doc_id: Optional[str] = None) -> AnnotationSet:
    """Parse an annotation file.

    The document id is taken from the '# emorole-ann/1 doc=...' header
    unless passed explicitly; an explicit id must agree with the header.
    """
    annotations: List[RoleAnnotation] = []
    header_doc = None
    for line_no, line in enumerate(text.splitlines(), start=1):
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith(ANN_SCHEMA):
                for field in body.split()[1:]:
                    if field.startswith("doc="):
                        header_doc = field[4:]
            continue
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 8:
            raise ParseError(f"expected 8 columns, got {len(cols)}", line=line_no)
        try:
            role = RoleLabel(cols[1])
        except ValueError:
            raise ParseError(f"unknown role {cols[1]!r}", line=line_no) from None
        emotion = None
        if cols[3] != "_":
            try:
                emotion = EmotionCategory(cols[3])
            except ValueError:
                raise ParseError(f"unknown emotion {cols[3]!r}", line=line_no) from None
        if cols[4] not in ("0", "1"):
            raise ParseError(f"negated flag must be 0 or 1, got {cols[4]!r}", line=line_no)
        try:
            annotations.append(RoleAnnotation(
                id=int(cols[0]),
                role=role,
                span=_parse_span(cols[2], line_no),
                emotion=emotion,
                negated=cols[4] == "1",
                cue_link=None if cols[5] == "_" else int(cols[5]),
                intensity_span=None if cols[6] == "_" else _parse_span(cols[6], line_no),
                provenance="" if cols[7] == "_" else cols[7],
            ))
        except ValueError as exc:
            raise ParseError(str(exc), line=line_no) from None
    if doc_id is not None and header_doc is not None and doc_id != header_doc:
        raise ParseError(f"file is for document {header_doc!r}, expected {doc_id!r}")
    final_id = doc_id if doc_id is not None else header_doc
    if final_id is None:
        raise ParseError("no document id: missing header and no explicit id")
    return AnnotationSet(doc_id=final_id, annotations=tuple(annotations))


def check_against_document(annset: AnnotationSet, doc: Document) -> List[str]:
    """Span-range and link problems of an annotation set, as messages."""
    problems = []
    ids = {a.id for a in annset}
    for ann in annset:
        if not doc.span_valid(ann.span):
            problems.append(f"annotation {ann.id}: span {ann.span} out of range")
        if ann.intensity_span is not None and not doc.span_valid(ann.intensity_span):
            problems.append(f"annotation {ann.id}: intensity span "
                            f"{ann.intensity_span} out of range")
        if ann.cue_link is not None and ann.cue_link not in ids:
            problems.append(f"annotation {ann.id}: dangling cue_link {ann.cue_link}")
    return problems


@dataclass(frozen=True)
class Receipt:
    path: Path
    kind: str
    count: int
    replaced: bool


class CorpusStore:
    """File-backed corpus of documents and their annotation sets."""

    def __init__(self, root):
        self.root = Path(root)

    def document_ids(self) -> List[str]:
        if not self.root.is_dir():
            return []
        return sorted(p.parent.name for p in self.root.glob("*/source.conllu"))

    def _doc_dir(self, doc_id: str, create: bool = False) -> Path:
        path = self.root / doc_id
        if create:
            path.mkdir(parents=True, exist_ok=True)
        elif not path.is_dir():
            raise NotFoundError(f"unknown document {doc_id!r}")
        return path

    def load_document(self, doc_id: str) -> Document:
        path = self._doc_dir(doc_id) / "source.conllu"
        if not path.exists():
            raise NotFoundError(f"document {doc_id!r} has no source file")
        doc = parse_conllu(path.read_text(encoding="utf-8"), doc_id=doc_id)
        sidecar_path = self._doc_dir(doc_id) / "sidecar.json"
        if sidecar_path.exists():
            doc = attach_sidecar(doc, load_sidecar(sidecar_path.read_text(encoding="utf-8")))
        return doc

    def save_document(self, doc: Document, sidecar: Optional[SidecarData] = None):
        path = self._doc_dir(doc.id, create=True)
        _atomic_write(path / "source.conllu", serialize_conllu(doc))
        if sidecar is not None:
            _atomic_write(path / "sidecar.json", dump_sidecar(sidecar))

    def save_annotations(self, doc_id: str, annset: AnnotationSet,
                         kind: str = "predicted") -> Receipt:
        """Validate, then atomically replace `<doc_id>/<kind>.ann`.

        The set must be canonical and internally consistent; when the
        source document is present, spans are checked against it before
        anything touches the disk.
        """
        if kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
        if annset.doc_id != doc_id:
            raise IntegrityError(f"annotation set for {annset.doc_id!r} does not "
                                 f"match document {doc_id!r}")
        canonical = canonicalize(annset)   # raises on dangling links
        if tuple(canonical.annotations) != tuple(annset.annotations):
            raise IntegrityError("annotation set is not canonical; canonicalize first")
        doc_dir = self._doc_dir(doc_id, create=True)
        source = doc_dir / "source.conllu"
        if source.exists():
            problems = check_against_document(annset, self.load_document(doc_id))
            if problems:
                raise IntegrityError("; ".join(problems))
        target = doc_dir / f"{kind}.ann"
        replaced = target.exists()
        if replaced:
            # Copy rather than move so readers never observe a missing file.
            shutil.copy2(target, doc_dir / f"{kind}.ann.bak")
        _atomic_write(target, dump_annotations(annset))
        return Receipt(path=target, kind=kind, count=len(annset), replaced=replaced)

    def load_annotations(self, doc_id: str, kind: str = "predicted") -> AnnotationSet:
        if kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
        path = self._doc_dir(doc_id) / f"{kind}.ann"
        if not path.exists():
            raise NotFoundError(f"document {doc_id!r} has no {kind} annotations")
        annset = parse_annotations(path.read_text(encoding="utf-8"), doc_id=doc_id)
        source = self._doc_dir(doc_id) / "source.conllu"
        if source.exists():
            problems = check_against_document(annset, self.load_document(doc_id))
            if problems:
                raise IntegrityError("; ".join(problems))
        return annset

    @contextmanager
    def lock(self, doc_id: str):
        """Exclusive writer lock for one document (lock file, O_EXCL)."""
        path = self._doc_dir(doc_id, create=True) / ".lock"
        try:
            fd = os.open(path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise StoreLockError(f"document {doc_id!r} is locked by another writer") from None
        try:
            os.write(fd, str(os.getpid()).encode())
            os.close(fd)
            yield
        finally:
            try:
                os.unlink(path)
            except FileNotFoundError:
                pass


def _atomic_write(path: Path, content: str):
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(content)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
