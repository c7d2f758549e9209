"""emorole: emotion and semantic-role annotation over dependency parses.

The package identifies emotion cues via lexicons and their semantic
roles (experiencer, target, cause, territory, object, attack, attacker,
modifier, negation) via declarative dependency-pattern rules, represents
the result as a multi-layer token graph, and ships an evaluation harness,
a file-based corpus store, a command line, and an HTTP service for the
annotation workbench.
"""

from .conllu import parse_conllu, serialize_conllu
from .evaluate import MatchPolicy, Report, diff, score
from .graph import EdgeType, TextGraph, build_graph, parse_layers, to_dot, to_json_graph
from .ingest import SidecarData, attach_sidecar, load_sidecar, validate
from .lexicon import (Lexicons, TermSet, classify_cue, expand_seeds,
                      load_emotion_lexicon, load_lexicon_dir,
                      load_sentiment_lexicon, load_synonym_graph)
from .model import (AnnotationSet, CorefChain, Document, EmotionCategory,
                    RoleAnnotation, RoleLabel, SceneSection, Sentence, Span,
                    Token, canonicalize)
from .pipeline import PipelineConfig, annotate_document, parse_config, propagate_coref
from .rules import ExtentPolicy, Rule, RuleSet, compile_ruleset, extract_span, find_matches
from .store import CorpusStore, dump_annotations, parse_annotations

__version__ = "0.1.0"

SCHEMAS = {
    "annotations": "emorole-ann/1",
    "rules": "emorole-rules/1",
    "sidecar": "emorole-sidecar/1",
    "graph": "emorole-graph/1",
    "report": "emorole-report/1",
    "api": "emorole-api/1",
}

__all__ = [
    "AnnotationSet", "CorefChain", "CorpusStore", "Document", "EdgeType",
    "EmotionCategory", "ExtentPolicy", "Lexicons", "MatchPolicy",
    "PipelineConfig", "Report", "RoleAnnotation", "RoleLabel", "Rule",
    "RuleSet", "SceneSection", "Sentence", "SidecarData", "Span", "TermSet",
    "TextGraph", "Token", "annotate_document", "attach_sidecar",
    "build_graph", "canonicalize", "classify_cue", "compile_ruleset",
    "diff", "dump_annotations", "expand_seeds", "extract_span",
    "find_matches", "load_emotion_lexicon", "load_lexicon_dir",
    "load_sentiment_lexicon", "load_sidecar", "load_synonym_graph",
    "parse_annotations", "parse_config", "parse_conllu", "parse_layers",
    "propagate_coref", "score", "serialize_conllu", "to_dot",
    "to_json_graph", "validate",
]
