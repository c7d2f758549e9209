#!/usr/bin/env python3
"""Convert raw French/English text into interchange + sidecar files.

Offline convenience script: runs a third-party NLP pipeline (spaCy for
tokenization, tagging, dependency parsing and noun chunks, optionally
crosslingual-coreference for chains) and writes the two files the
annotation engine ingests:

    <out-dir>/source.conllu
    <out-dir>/sidecar.json

Linguistic quality is the pipeline's business, format validity is ours:
output is always structurally valid interchange data.  Model versions
are recorded in the sidecar meta for reproducibility.

Usage:
    python adapter/convert_text.py --in scene.txt --language fr --out-dir store/scene
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

MODELS = {
    "fr": "fr_core_news_md",
    "en": "en_core_web_md",
}

SETUP_HELP = """\
The conversion pipeline is not available: {reason}

To set it up:
    pip install 'spacy>=3.5'
    python -m spacy download {model}
Optionally, for coreference chains:
    pip install crosslingual-coreference
"""


def assemble_interchange(sentences, doc_id, language, chains=(), meta=None):
    """Build (conllu_text, sidecar_text) from plain per-sentence data.

    sentences -- list of dicts with "tokens" (list of dicts with surface,
    lemma, upos, head (0-based or -1), deprel, feats) and "chunks"
    (list of (start, end) pairs), plus optional "text".
    Pure data-in data-out; needs no models, so it is unit-testable.
    """
    lines = []
    chunk_records = []
    for s_index, sentence in enumerate(sentences):
        lines.append(f"# sent_id = {doc_id}-s{s_index}")
        if sentence.get("text"):
            lines.append(f"# text = {sentence['text']}")
        for t_index, tok in enumerate(sentence["tokens"], start=1):
            feats = tok.get("feats") or {}
            feats_cell = "|".join(f"{k}={v}" for k, v in sorted(feats.items())) or "_"
            head = tok["head"]
            lines.append("\t".join((
                str(t_index),
                tok["surface"] or "_",
                tok.get("lemma") or tok["surface"],
                tok.get("upos") or "X",
                "_",
                feats_cell,
                "0" if head < 0 else str(head + 1),
                tok.get("deprel") or "dep",
                "_",
                "_",
            )))
        lines.append("")
        for start, end in sentence.get("chunks", ()):
            chunk_records.append({"sent": s_index, "start": start, "end": end})
    conllu_text = "\n".join(lines)
    if conllu_text and not conllu_text.endswith("\n"):
        conllu_text += "\n"
    sidecar = {
        "schema": "emorole-sidecar/1",
        "doc_id": doc_id,
        "language": language,
        "chains": [
            {"id": i, "mentions": [{"sent": m[0], "start": m[1], "end": m[2]}
                                   for m in mentions]}
            for i, mentions in enumerate(chains)
        ],
        "chunks": chunk_records,
        "sections": [],
    }
    if meta:
        sidecar["meta"] = meta
    return conllu_text, json.dumps(sidecar, ensure_ascii=False, indent=2,
                                   sort_keys=True) + "\n"


def load_pipeline(language):
    model = MODELS.get(language)
    if model is None:
        sys.exit(f"error: unsupported language {language!r}; choose from "
                 f"{', '.join(sorted(MODELS))}")
    try:
        import spacy
    except ImportError:
        sys.exit(SETUP_HELP.format(reason="the spacy package is not installed",
                                   model=model or "fr_core_news_md"))
    try:
        nlp = spacy.load(model)
    except OSError:
        sys.exit(SETUP_HELP.format(
            reason=f"the {model} model is not downloaded", model=model))
    return nlp, f"spacy={spacy.__version__};model={model}={nlp.meta.get('version', '?')}"


def doc_to_sentences(doc):
    """Flatten a spaCy doc into the plain structure assemble_interchange eats."""
    sentences = []
    for sent in doc.sents:
        offset = sent.start
        tokens = []
        for tok in sent:
            head = -1 if tok.head is tok else tok.head.i - offset
            feats = dict(tok.morph.to_dict()) if tok.morph else {}
            tokens.append({
                "surface": tok.text.strip() or "_",
                "lemma": tok.lemma_ or tok.text,
                "upos": tok.pos_ or "X",
                "head": head,
                "deprel": "root" if head < 0 else (tok.dep_ or "dep"),
                "feats": feats,
            })
        chunks = []
        for chunk in getattr(doc, "noun_chunks", ()):
            if chunk.start >= sent.start and chunk.end <= sent.end:
                chunks.append((chunk.start - offset, chunk.end - offset))
        sentences.append({"tokens": tokens, "chunks": chunks, "text": sent.text})
    return sentences


def convert(raw_text, language, doc_id):
    """Run the pipeline over raw text; empty input needs no models."""
    if not raw_text.strip():
        return assemble_interchange([], doc_id, language)
    nlp, versions = load_pipeline(language)
    doc = nlp(raw_text.strip())
    sentences = doc_to_sentences(doc)
    return assemble_interchange(sentences, doc_id, language,
                                meta={"pipeline": versions})


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--in", dest="infile", type=Path, required=True)
    parser.add_argument("--language", choices=sorted(MODELS), required=True)
    parser.add_argument("--out-dir", type=Path, required=True)
    parser.add_argument("--doc-id", default=None)
    args = parser.parse_args(argv)

    doc_id = args.doc_id or args.infile.stem
    raw = args.infile.read_text(encoding="utf-8")
    conllu_text, sidecar_text = convert(raw, args.language, doc_id)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    (args.out_dir / "source.conllu").write_text(conllu_text, encoding="utf-8")
    (args.out_dir / "sidecar.json").write_text(sidecar_text, encoding="utf-8")
    print(f"wrote {args.out_dir / 'source.conllu'} and sidecar.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())
