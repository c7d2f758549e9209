"""Reader and writer for the 10-column tab-separated interchange format.

Columns: ID, FORM, LEMMA, UPOS, XPOS, FEATS, HEAD, DEPREL, DEPS, MISC,
with '_' for empty fields and FEATS/MISC as 'Name=Value' pairs joined by
'|'.  IDs are 1-origin on disk and 0-origin in memory; HEAD 0 on disk is
the ROOT sentinel.  XPOS and DEPS are not part of the document model and
are written back as '_'.

Multiword-token ranges (ID '3-4') and empty nodes (ID '5.1') are skipped
but their raw lines are recorded in the document meta so that writing the
document out again reproduces them in place.
"""

from __future__ import annotations

import io
from typing import Iterable, Union

from .errors import ParseError
from .model import ROOT, Document, Sentence, Token

_COLUMNS = 10


def _parse_pairs(cell: str, line_no: int, what: str) -> dict:
    if cell == "_":
        return {}
    pairs = {}
    for item in cell.split("|"):
        if "=" in item:
            name, value = item.split("=", 1)
        else:
            name, value = item, ""
        if not name:
            raise ParseError(f"malformed {what} item {item!r}", line=line_no)
        pairs[name] = value
    return pairs


def _format_pairs(pairs) -> str:
    if not pairs:
        return "_"
    return "|".join(f"{k}={v}" if v != "" else k for k, v in sorted(pairs.items()))


def parse_conllu(source: Union[str, Iterable[str]], doc_id: str = "doc",
                 language: str = "und") -> Document:
    """Parse interchange text into a Document.

    source -- the full text, or an iterable of lines.
    Raises ParseError (with a 1-based line number) on wrong column count,
    non-numeric or out-of-range heads, and cyclic head graphs.
    """
    if isinstance(source, str):
        lines = io.StringIO(source)
    else:
        lines = source

    sentences = []
    meta = {}
    rows = []          # (line_no, columns) for the current block
    skipped = []       # (anchor 1-origin id, raw line) for the current block
    comments = {}

    def flush(end_line_no):
        if not rows:
            return
        sent_index = len(sentences)
        tokens = []
        for expected, (line_no, cols) in enumerate(rows, start=1):
            if int(cols[0]) != expected:
                raise ParseError(f"token id {cols[0]} out of sequence, expected {expected}",
                                 line=line_no)
            try:
                head = int(cols[6])
            except ValueError:
                raise ParseError(f"non-numeric head {cols[6]!r}", line=line_no) from None
            if head < 0 or head > len(rows):
                raise ParseError(f"head {head} out of range for a {len(rows)}-token sentence",
                                 line=line_no)
            tokens.append(Token(
                index=expected - 1,
                surface=cols[1],
                lemma=cols[2],
                upos=cols[3],
                head=ROOT if head == 0 else head - 1,
                deprel=cols[7],
                feats=_parse_pairs(cols[5], line_no, "FEATS"),
                misc=_parse_pairs(cols[9], line_no, "MISC"),
            ))
        # Cycle check: walking up from any token must reach ROOT.
        for line_no, cols in rows:
            seen = set()
            cur = int(cols[0]) - 1
            while cur != ROOT:
                if cur in seen:
                    raise ParseError("cyclic head graph", line=line_no)
                seen.add(cur)
                cur = tokens[cur].head
        for key, value in comments.items():
            meta[f"s{sent_index}.{key}"] = value
        for k, (anchor, raw) in enumerate(skipped):
            meta[f"s{sent_index}.skip.{k}"] = f"{anchor}\t{raw}"
        sentences.append(Sentence(index=sent_index, tokens=tuple(tokens)))
        rows.clear()
        skipped.clear()
        comments.clear()

    line_no = 0
    for line in lines:
        line_no += 1
        line = line.rstrip("\n").rstrip("\r")
        if not line:
            flush(line_no)
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, value = body.split("=", 1)
                key = key.strip()
                if key in ("sent_id", "text"):
                    comments[key] = value.strip()
            continue
        cols = line.split("\t")
        if len(cols) != _COLUMNS:
            raise ParseError(f"expected {_COLUMNS} columns, got {len(cols)}", line=line_no)
        token_id = cols[0]
        if "-" in token_id:                       # multiword token range
            first = token_id.split("-", 1)[0]
            if not first.isdigit():
                raise ParseError(f"malformed token id {token_id!r}", line=line_no)
            skipped.append((int(first), line))
            continue
        if "." in token_id:                       # empty node
            first = token_id.split(".", 1)[0]
            if not first.isdigit():
                raise ParseError(f"malformed token id {token_id!r}", line=line_no)
            skipped.append((int(first) + 1, line))
            continue
        if not token_id.isdigit():
            raise ParseError(f"malformed token id {token_id!r}", line=line_no)
        rows.append((line_no, cols))
    flush(line_no + 1)

    return Document(id=doc_id, language=language, sentences=tuple(sentences), meta=meta)


def serialize_conllu(doc: Document) -> str:
    """Write a Document back to interchange text (inverse of parse_conllu)."""
    out = []
    for sent in doc.sentences:
        sent_id = doc.meta.get(f"s{sent.index}.sent_id")
        text = doc.meta.get(f"s{sent.index}.text")
        if sent_id is not None:
            out.append(f"# sent_id = {sent_id}")
        if text is not None:
            out.append(f"# text = {text}")
        skipped = {}
        k = 0
        while f"s{sent.index}.skip.{k}" in doc.meta:
            anchor, raw = doc.meta[f"s{sent.index}.skip.{k}"].split("\t", 1)
            skipped.setdefault(int(anchor), []).append(raw)
            k += 1
        for tok in sent.tokens:
            disk_id = tok.index + 1
            for raw in skipped.pop(disk_id, []):
                out.append(raw)
            out.append("\t".join((
                str(disk_id),
                tok.surface,
                tok.lemma,
                tok.upos,
                "_",
                _format_pairs(tok.feats),
                "0" if tok.head == ROOT else str(tok.head + 1),
                tok.deprel,
                "_",
                _format_pairs(tok.misc),
            )))
        for anchor in sorted(skipped):
            out.extend(skipped[anchor])
        out.append("")
    return "\n".join(out)
