"""HTTP facade over the engine and corpus store.

Endpoints (JSON bodies, schema "emorole-api/1"):

    GET  /documents                         list document ids
    GET  /documents/{id}                    document with sidecar data
    GET  /documents/{id}/annotations?kind=  stored annotation set
    POST /documents/{id}/annotate           recompute + persist predicted
    PUT  /documents/{id}/gold               validate + persist gold
    GET  /documents/{id}/graph?layers=&format=
    GET  /ruleset                           active rule document
    PUT  /ruleset                           compile, then hot-swap
    POST /ruleset/preview                   match a draft rule, no mutation

Request handling is stateless over an immutable engine snapshot; a
ruleset swap replaces the snapshot atomically, so every request sees
either the old or the new ruleset, never a mixture.  Gold writes take
the per-document store lock and return 409 when it is already held.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .errors import (CompileError, EmoroleError, IntegrityError, NotFoundError,
                     ParseError, StoreLockError)
from .graph import ALL_LAYERS, build_graph, parse_layers, to_dot, to_json_graph
from .lexicon import Lexicons
from .model import (AnnotationSet, Document, EmotionCategory, RoleAnnotation,
                    RoleLabel, Span, canonicalize)
from .pipeline import PipelineConfig, annotate_document
from .rules import RULES_SCHEMA, RuleSet, compile_ruleset, find_matches
from .store import CorpusStore, check_against_document

API_SCHEMA = "emorole-api/1"


def annset_to_json(annset: AnnotationSet, kind: str | None = None) -> dict:
    body = {
        "schema": API_SCHEMA,
        "doc_id": annset.doc_id,
        "annotations": [
            {
                "id": a.id,
                "role": a.role.value,
                "span": {"sent": a.span.sentence, "start": a.span.start, "end": a.span.end},
                "emotion": a.emotion.value if a.emotion else None,
                "negated": a.negated,
                "intensity": (None if a.intensity_span is None else
                              {"sent": a.intensity_span.sentence,
                               "start": a.intensity_span.start,
                               "end": a.intensity_span.end}),
                "cue_link": a.cue_link,
                "provenance": a.provenance,
            }
            for a in annset.annotations
        ],
    }
    if kind is not None:
        body["kind"] = kind
    return body


def annset_from_json(data: dict, doc_id: str) -> AnnotationSet:
    def span(obj) -> Span:
        return Span(int(obj["sent"]), int(obj["start"]), int(obj["end"]))

    annotations = []
    for obj in data.get("annotations", ()):
        annotations.append(RoleAnnotation(
            id=int(obj["id"]),
            role=RoleLabel(obj["role"]),
            span=span(obj["span"]),
            emotion=EmotionCategory(obj["emotion"]) if obj.get("emotion") else None,
            negated=bool(obj.get("negated", False)),
            intensity_span=span(obj["intensity"]) if obj.get("intensity") else None,
            cue_link=obj.get("cue_link"),
            provenance=obj.get("provenance", ""),
        ))
    return AnnotationSet(doc_id=doc_id, annotations=tuple(annotations))


def document_to_json(doc: Document) -> dict:
    return {
        "schema": API_SCHEMA,
        "id": doc.id,
        "language": doc.language,
        "sentences": [
            {
                "index": s.index,
                "section": s.section.value,
                "tokens": [
                    {"index": t.index, "surface": t.surface, "lemma": t.lemma,
                     "upos": t.upos, "head": t.head, "deprel": t.deprel,
                     "feats": dict(t.feats)}
                    for t in s.tokens
                ],
                "chunks": [{"sent": c.sentence, "start": c.start, "end": c.end}
                           for c in s.chunks],
            }
            for s in doc.sentences
        ],
        "chains": [
            {"id": c.id,
             "mentions": [{"sent": m.sentence, "start": m.start, "end": m.end}
                          for m in c.mentions]}
            for c in doc.chains
        ],
        "meta": dict(doc.meta),
    }


@dataclass(frozen=True)
class EngineSnapshot:
    rules_doc: dict
    ruleset: RuleSet


class WorkbenchService:
    def __init__(self, store: CorpusStore, rules_doc: dict, ruleset: RuleSet,
                 lexicons: Lexicons, cfg: PipelineConfig):
        self.store = store
        self.lexicons = lexicons
        self.cfg = cfg
        self._snapshot = EngineSnapshot(rules_doc=rules_doc, ruleset=ruleset)
        self._swap_lock = threading.Lock()

    @property
    def snapshot(self) -> EngineSnapshot:
        return self._snapshot

    def swap_ruleset(self, rules_doc: dict) -> RuleSet:
        """Compile, then atomically publish; a failed compile changes nothing."""
        with self._swap_lock:
            ruleset = compile_ruleset(rules_doc,
                                      context=self.cfg.compile_context(self.lexicons))
            self._snapshot = EngineSnapshot(rules_doc=rules_doc, ruleset=ruleset)
            return ruleset


def _error(status: int, message: str, reasons=None) -> JSONResponse:
    body = {"schema": API_SCHEMA, "error": message}
    if reasons:
        body["reasons"] = list(reasons)
    return JSONResponse(body, status_code=status)


def create_app(store_path, rules_text: str, lexicons: Lexicons,
               cfg: PipelineConfig | None = None,
               frontend_dir=None) -> FastAPI:
    cfg = cfg or PipelineConfig()
    rules_doc = json.loads(rules_text)
    ruleset = compile_ruleset(rules_doc, context=cfg.compile_context(lexicons))
    service = WorkbenchService(CorpusStore(store_path), rules_doc, ruleset, lexicons, cfg)

    app = FastAPI(title="emorole workbench service", version=API_SCHEMA)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    app.state.service = service

    @app.exception_handler(EmoroleError)
    async def handle_domain_error(_request, exc: EmoroleError):
        if isinstance(exc, NotFoundError):
            return _error(404, str(exc))
        if isinstance(exc, StoreLockError):
            return _error(409, str(exc))
        if isinstance(exc, (CompileError, ParseError, IntegrityError)):
            return _error(422, str(exc))
        return _error(500, str(exc))

    @app.get("/documents")
    def list_documents():
        return {"schema": API_SCHEMA, "documents": service.store.document_ids()}

    @app.get("/documents/{doc_id}")
    def get_document(doc_id: str):
        return document_to_json(service.store.load_document(doc_id))

    @app.get("/documents/{doc_id}/annotations")
    def get_annotations(doc_id: str, kind: str = "predicted"):
        if kind not in ("predicted", "gold"):
            return _error(422, f"kind must be predicted or gold, got {kind!r}")
        service.store.load_document(doc_id)          # 404 before 404-on-kind
        annset = service.store.load_annotations(doc_id, kind=kind)
        return annset_to_json(annset, kind=kind)

    @app.post("/documents/{doc_id}/annotate")
    def annotate(doc_id: str):
        doc = service.store.load_document(doc_id)
        snapshot = service.snapshot
        annset = annotate_document(doc, snapshot.ruleset, service.lexicons, service.cfg)
        with service.store.lock(doc_id):
            service.store.save_annotations(doc_id, annset, kind="predicted")
        return annset_to_json(annset, kind="predicted")

    @app.put("/documents/{doc_id}/gold")
    async def put_gold(doc_id: str, request: Request):
        doc = service.store.load_document(doc_id)
        try:
            data = await request.json()
        except Exception:
            return _error(422, "body is not valid JSON")
        try:
            annset = canonicalize(annset_from_json(data, doc_id))
        except (KeyError, TypeError, ValueError) as exc:
            return _error(422, f"malformed annotation set: {exc}")
        problems = check_against_document(annset, doc)
        if problems:
            return _error(422, "annotation set does not fit the document",
                          reasons=problems)
        with service.store.lock(doc_id):
            receipt = service.store.save_annotations(doc_id, annset, kind="gold")
        return {"schema": API_SCHEMA, "doc_id": doc_id, "kind": "gold",
                "count": receipt.count, "replaced": receipt.replaced}

    @app.get("/documents/{doc_id}/graph")
    def get_graph(doc_id: str, layers: str = "seq,dep,chunk,coref",
                  format: str = "json", kind: str = "predicted"):
        doc = service.store.load_document(doc_id)
        try:
            annset = service.store.load_annotations(doc_id, kind=kind)
        except NotFoundError:
            annset = AnnotationSet(doc_id=doc_id)
        try:
            layer_set = parse_layers(layers) if layers else ALL_LAYERS
        except ValueError as exc:
            return _error(422, str(exc))
        g = build_graph(doc, annset, layer_set)
        if format == "dot":
            return PlainTextResponse(to_dot(g))
        return JSONResponse(json.loads(to_json_graph(g)))

    @app.get("/ruleset")
    def get_ruleset():
        snapshot = service.snapshot
        return {"schema": API_SCHEMA, "ruleset": snapshot.rules_doc}

    @app.put("/ruleset")
    async def put_ruleset(request: Request):
        try:
            data = await request.json()
        except Exception:
            return _error(422, "body is not valid JSON")
        rules_doc = data.get("ruleset", data)
        ruleset = service.swap_ruleset(rules_doc)   # CompileError -> 422 handler
        return {"schema": API_SCHEMA, "rules": [r.id for r in ruleset]}

    @app.post("/ruleset/preview")
    async def preview_rule(request: Request):
        try:
            data = await request.json()
        except Exception:
            return _error(422, "body is not valid JSON")
        if "rule" not in data:
            return _error(422, "body needs a 'rule' field")
        draft_doc = {"schema": RULES_SCHEMA, "rules": [data["rule"]]}
        ruleset = compile_ruleset(draft_doc,
                                  context=service.cfg.compile_context(service.lexicons))
        rule = ruleset.rules[0]
        doc_ids = data.get("doc_ids") or service.store.document_ids()
        results = {}
        for doc_id in doc_ids:
            doc = service.store.load_document(doc_id)
            matches = []
            for sentence in doc.sentences:
                for m in find_matches(rule, sentence):
                    matches.append({
                        "sent": sentence.index,
                        "bindings": {
                            name: {"index": tok.index, "surface": tok.surface}
                            for name, tok in sorted(m.bindings.items())
                        },
                    })
            results[doc_id] = {"count": len(matches), "matches": matches}
        return {"schema": API_SCHEMA, "rule": rule.id, "documents": results}

    if frontend_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="workbench")

    return app
