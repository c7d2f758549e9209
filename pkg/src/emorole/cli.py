"""Command line entry point.

Subcommands: annotate, graph, eval, rules check, rules preview,
lexicon build, serve.  Exit codes: 0 success, 1 processing error,
2 usage error.  The EMOROLE_STORE environment variable supplies the
default corpus store path.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import os
import sys
from pathlib import Path

from . import SCHEMAS, __version__
from .conllu import parse_conllu
from .errors import EmoroleError, NotFoundError
from .evaluate import MatchPolicy, score
from .graph import ALL_LAYERS, build_graph, parse_layers, to_dot, to_json_graph
from .ingest import attach_sidecar, load_sidecar
from .lexicon import (Lexicons, dump_term_set, expand_seeds, load_lexicon_dir,
                      load_synonym_graph)
from .model import AnnotationSet
from .pipeline import PipelineConfig, annotate_document, parse_config
from .resources import default_lexicon_dir, default_rules_path
from .rules import RuleSet, compile_ruleset, find_matches
from .store import CorpusStore, dump_annotations, parse_annotations

_RELATION_ALIASES = {
    "syn": "synonym", "synonym": "synonym",
    "hypo": "hyponym", "hyponym": "hyponym",
    "hyper": "hypernym", "hypernym": "hypernym",
    "mero": "meronym", "meronym": "meronym",
    "holo": "holonym", "holonym": "holonym",
    "anto": "antonym", "antonym": "antonym",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emorole",
        description="Emotion and semantic-role annotation over dependency parses.")
    parser.add_argument("--version", action="version",
                        version=f"emorole {__version__} ("
                                + ", ".join(f"{k}={v}" for k, v in sorted(SCHEMAS.items()))
                                + ")")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None,
                        help="key=value configuration file")
    common.add_argument("--rules", type=Path, default=None,
                        help="rule document (default: packaged ruleset)")
    common.add_argument("--lexicons", type=Path, default=None,
                        help="lexicon directory (default: packaged lexicons)")

    p = sub.add_parser("annotate", parents=[common],
                       help="annotate a document or a whole corpus store")
    p.add_argument("--in", dest="infile", type=Path, help="interchange file")
    p.add_argument("--sidecar", type=Path, help="sidecar JSON for --in")
    p.add_argument("--doc-id", help="document id for --in (default: file stem)")
    p.add_argument("--out", type=Path, help="annotation output for --in (default: stdout)")
    p.add_argument("--store", type=Path, default=_default_store(),
                   help="corpus store to annotate (all documents)")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers in store mode")

    p = sub.add_parser("graph", parents=[common], help="export the token graph")
    p.add_argument("--in", dest="infile", type=Path, help="interchange file")
    p.add_argument("--sidecar", type=Path)
    p.add_argument("--doc-id")
    p.add_argument("--ann", type=Path, help="annotation file to overlay")
    p.add_argument("--store", type=Path, default=_default_store())
    p.add_argument("--doc", help="document id inside --store")
    p.add_argument("--kind", choices=("predicted", "gold"), default="predicted")
    p.add_argument("--layers", default="seq,dep,chunk,coref")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("--out", type=Path, help="output file (default: stdout)")

    p = sub.add_parser("eval", help="score predicted annotations against gold")
    p.add_argument("--gold", type=Path, required=True)
    p.add_argument("--pred", type=Path, required=True)
    p.add_argument("--policy", default="exact",
                   help="exact | overlap | jaccard:<threshold>")
    p.add_argument("--json", action="store_true", help="emit the JSON report")

    p = sub.add_parser("rules", help="rule development utilities")
    rules_sub = p.add_subparsers(dest="rules_command", required=True)
    rc = rules_sub.add_parser("check", parents=[common], help="compile-check a rule document")
    rc.add_argument("rulefile", type=Path)
    rp = rules_sub.add_parser("preview", parents=[common],
                              help="match counts per rule per document")
    rp.add_argument("rulefile", type=Path)
    rp.add_argument("--corpus", type=Path, default=_default_store(), required=False)

    p = sub.add_parser("lexicon", help="lexicon utilities")
    lex_sub = p.add_subparsers(dest="lexicon_command", required=True)
    lb = lex_sub.add_parser("build", help="expand seed lemmas into a term set cache")
    lb.add_argument("--seeds", type=Path, required=True, help="one seed lemma per line")
    lb.add_argument("--graph", type=Path, required=True, help="synonym graph file")
    lb.add_argument("--depth", type=int, default=2)
    lb.add_argument("--relations", default="syn,hypo")
    lb.add_argument("--name", default="terms")
    lb.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("serve", parents=[common], help="run the workbench HTTP service")
    p.add_argument("--store", type=Path, default=_default_store(), required=False)
    p.add_argument("--listen", default="127.0.0.1:8400")
    p.add_argument("--frontend", type=Path, default=None,
                   help="directory with the built workbench to serve at /")

    return parser


def _default_store():
    value = os.environ.get("EMOROLE_STORE")
    return Path(value) if value else None


def _load_pipeline(args) -> tuple[PipelineConfig, Lexicons, RuleSet]:
    cfg = PipelineConfig()
    if args.config:
        cfg = parse_config(args.config.read_text(encoding="utf-8"), base=cfg)
    lexicons = load_lexicon_dir(args.lexicons or default_lexicon_dir())
    rules_path = args.rules or default_rules_path()
    ruleset = compile_ruleset(rules_path.read_text(encoding="utf-8"),
                              context=cfg.compile_context(lexicons))
    return cfg, lexicons, ruleset


def _load_single_document(infile: Path, sidecar: Path | None, doc_id: str | None):
    doc = parse_conllu(infile.read_text(encoding="utf-8"),
                       doc_id=doc_id or infile.stem)
    if sidecar:
        doc = attach_sidecar(doc, load_sidecar(sidecar.read_text(encoding="utf-8")))
    return doc


def _cmd_annotate(args) -> int:
    cfg, lexicons, ruleset = _load_pipeline(args)
    if args.infile:
        doc = _load_single_document(args.infile, args.sidecar, args.doc_id)
        annset = annotate_document(doc, ruleset, lexicons, cfg)
        text = dump_annotations(annset)
        if args.out:
            args.out.write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return 0
    if not args.store:
        raise EmoroleError("annotate needs --in or --store")
    store = CorpusStore(args.store)

    def work(doc_id: str) -> str:
        doc = store.load_document(doc_id)
        annset = annotate_document(doc, ruleset, lexicons, cfg)
        store.save_annotations(doc_id, annset, kind="predicted")
        return doc_id

    ids = store.document_ids()
    if args.jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=args.jobs) as pool:
            done = list(pool.map(work, ids))
    else:
        done = [work(i) for i in ids]
    for doc_id in sorted(done):
        print(f"annotated {doc_id}")
    return 0


def _cmd_graph(args) -> int:
    if args.infile:
        doc = _load_single_document(args.infile, args.sidecar, args.doc_id)
        annset = AnnotationSet(doc_id=doc.id)
        if args.ann:
            annset = parse_annotations(args.ann.read_text(encoding="utf-8"), doc_id=doc.id)
    else:
        if not (args.store and args.doc):
            raise EmoroleError("graph needs --in or (--store and --doc)")
        store = CorpusStore(args.store)
        doc = store.load_document(args.doc)
        try:
            annset = store.load_annotations(args.doc, kind=args.kind)
        except NotFoundError:
            annset = AnnotationSet(doc_id=doc.id)
    layers = parse_layers(args.layers) if args.layers else ALL_LAYERS
    g = build_graph(doc, annset, layers)
    text = to_dot(g) if args.format == "dot" else to_json_graph(g)
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_eval(args) -> int:
    gold = parse_annotations(args.gold.read_text(encoding="utf-8"))
    pred = parse_annotations(args.pred.read_text(encoding="utf-8"))
    policy = MatchPolicy.parse(args.policy)
    report = score(gold, pred, policy)
    sys.stdout.write(report.to_json() if args.json else report.to_table())
    return 0


def _cmd_rules_check(args) -> int:
    cfg, lexicons, _ = _load_pipeline(args)
    ruleset = compile_ruleset(args.rulefile.read_text(encoding="utf-8"),
                              context=cfg.compile_context(lexicons))
    enabled = sum(1 for r in ruleset if r.enabled)
    print(f"ok: {len(ruleset)} rules ({enabled} enabled)")
    return 0


def _cmd_rules_preview(args) -> int:
    cfg, lexicons, _ = _load_pipeline(args)
    ruleset = compile_ruleset(args.rulefile.read_text(encoding="utf-8"),
                              context=cfg.compile_context(lexicons))
    if not args.corpus:
        raise EmoroleError("rules preview needs --corpus")
    store = CorpusStore(args.corpus)
    for doc_id in store.document_ids():
        doc = store.load_document(doc_id)
        for rule in ruleset:
            count = sum(len(find_matches(rule, s)) for s in doc.sentences)
            print(f"{doc_id}\t{rule.id}\t{count}")
    return 0


def _cmd_lexicon_build(args) -> int:
    seeds = [line.strip() for line in args.seeds.read_text(encoding="utf-8").splitlines()
             if line.strip() and not line.startswith("#")]
    graph = load_synonym_graph(args.graph.read_text(encoding="utf-8").splitlines())
    try:
        relations = [_RELATION_ALIASES[r.strip().casefold()]
                     for r in args.relations.split(",") if r.strip()]
    except KeyError as exc:
        raise EmoroleError(f"unknown relation {exc.args[0]!r}") from None
    ts = expand_seeds(seeds, graph, relations, args.depth, name=args.name)
    args.out.write_text(dump_term_set(ts), encoding="utf-8")
    print(f"wrote {len(ts)} lemmas to {args.out}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    if not args.store:
        raise EmoroleError("serve needs --store")
    cfg, lexicons, ruleset = _load_pipeline(args)
    rules_path = args.rules or default_rules_path()
    app = create_app(args.store, rules_text=rules_path.read_text(encoding="utf-8"),
                     lexicons=lexicons, cfg=cfg, frontend_dir=args.frontend)
    host, _, port = args.listen.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


_COMMANDS = {
    ("annotate", None): _cmd_annotate,
    ("graph", None): _cmd_graph,
    ("eval", None): _cmd_eval,
    ("rules", "check"): _cmd_rules_check,
    ("rules", "preview"): _cmd_rules_preview,
    ("lexicon", "build"): _cmd_lexicon_build,
    ("serve", None): _cmd_serve,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    key = (args.command, getattr(args, "rules_command", None)
           or getattr(args, "lexicon_command", None))
    handler = _COMMANDS[key]
    try:
        return handler(args)
    except EmoroleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
