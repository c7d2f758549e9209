"""Multi-layer token graph and its DOT / JSON exports.

Nodes are tokens, labeled "surface-index" with the token's position in
its sentence.  Edge layers: Sequential (adjacent tokens), Dependency
(head to dependent, labeled), ChunkMembership (adjacent tokens of one
chunk), Coref (consecutive mention heads of one chain).  Each node
carries the set of roles whose spans cover its token.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Tuple

from .errors import IntegrityError, ParseError
from .model import AnnotationSet, Document, RoleLabel, Sentence, Span

GRAPH_SCHEMA = "emorole-graph/1"


class EdgeType(Enum):
    SEQUENTIAL = "Sequential"
    DEPENDENCY = "Dependency"
    CHUNK = "ChunkMembership"
    COREF = "Coref"


ALL_LAYERS = frozenset(EdgeType)

_LAYER_ALIASES = {
    "seq": EdgeType.SEQUENTIAL, "sequential": EdgeType.SEQUENTIAL,
    "dep": EdgeType.DEPENDENCY, "dependency": EdgeType.DEPENDENCY,
    "chunk": EdgeType.CHUNK, "chunkmembership": EdgeType.CHUNK,
    "coref": EdgeType.COREF,
}


def parse_layers(spec: str) -> FrozenSet[EdgeType]:
    """Parse a comma-separated layer list such as "seq,dep,chunk,coref"."""
    layers = set()
    for part in spec.split(","):
        part = part.strip().casefold()
        if not part:
            continue
        if part == "all":
            return ALL_LAYERS
        if part not in _LAYER_ALIASES:
            raise ValueError(f"unknown graph layer {part!r}")
        layers.add(_LAYER_ALIASES[part])
    return frozenset(layers)


@dataclass(frozen=True)
class GraphNode:
    sent: int
    index: int
    surface: str
    roles: FrozenSet[RoleLabel] = frozenset()

    @property
    def label(self) -> str:
        return f"{self.surface}-{self.index}"

    @property
    def key(self) -> str:
        return f"{self.sent}:{self.index}"


@dataclass(frozen=True)
class GraphEdge:
    src: Tuple[int, int]
    dst: Tuple[int, int]
    type: EdgeType
    label: Optional[str] = None


@dataclass(frozen=True)
class TextGraph:
    nodes: Tuple[GraphNode, ...]
    edges: Tuple[GraphEdge, ...]
    layers: FrozenSet[EdgeType]


def _mention_head(sentence: Sentence, span: Span) -> int:
    inside = set(range(span.start, span.end))
    for idx in sorted(inside):
        if sentence.tokens[idx].head not in inside:
            return idx
    return span.start


def build_graph(doc: Document, anns: AnnotationSet,
                layers: FrozenSet[EdgeType] = ALL_LAYERS) -> TextGraph:
    """Materialize the requested layers over the whole document.

    Raises IntegrityError when the annotation set does not belong to the
    document or contains out-of-range spans.
    """
    if anns.doc_id != doc.id:
        raise IntegrityError(f"annotation set for {anns.doc_id!r} does not match "
                             f"document {doc.id!r}")
    for ann in anns:
        if not doc.span_valid(ann.span):
            raise IntegrityError(f"annotation {ann.id}: span {ann.span} out of range")

    nodes = []
    for sentence in doc.sentences:
        for tok in sentence.tokens:
            roles = frozenset(a.role for a in anns
                              if a.span.covers(sentence.index, tok.index))
            nodes.append(GraphNode(sent=sentence.index, index=tok.index,
                                   surface=tok.surface, roles=roles))

    edges: List[GraphEdge] = []
    if EdgeType.SEQUENTIAL in layers:
        for sentence in doc.sentences:
            for tok in sentence.tokens[:-1]:
                edges.append(GraphEdge((sentence.index, tok.index),
                                       (sentence.index, tok.index + 1),
                                       EdgeType.SEQUENTIAL))
    if EdgeType.DEPENDENCY in layers:
        for sentence in doc.sentences:
            for tok in sentence.tokens:
                if tok.head >= 0:
                    edges.append(GraphEdge((sentence.index, tok.head),
                                           (sentence.index, tok.index),
                                           EdgeType.DEPENDENCY, label=tok.deprel))
    if EdgeType.CHUNK in layers:
        for sentence in doc.sentences:
            for chunk in sentence.chunks:
                for idx in range(chunk.start, chunk.end - 1):
                    edges.append(GraphEdge((sentence.index, idx),
                                           (sentence.index, idx + 1),
                                           EdgeType.CHUNK))
    if EdgeType.COREF in layers:
        for chain in doc.chains:
            heads = [(m.sentence, _mention_head(doc.sentences[m.sentence], m))
                     for m in chain.mentions]
            for a, b in zip(heads, heads[1:]):
                edges.append(GraphEdge(a, b, EdgeType.COREF, label=f"chain-{chain.id}"))

    edges.sort(key=lambda e: (_EDGE_ORDER[e.type], e.src, e.dst, e.label or ""))
    return TextGraph(nodes=tuple(nodes), edges=tuple(edges), layers=frozenset(layers))


# Node fill colors by role, in priority order: a node with several roles
# is painted with the first matching entry.
ROLE_COLORS = (
    (RoleLabel.EXPERIENCER, "red"),
    (RoleLabel.TERRITORY, "purple"),
    (RoleLabel.ATTACKER, "brown"),
    (RoleLabel.ATTACK, "yellow"),
    (RoleLabel.CUE, "orange"),
)
DEFAULT_ROLE_COLOR = "gray"

EDGE_STYLE = {
    EdgeType.SEQUENTIAL: ("pink", None),
    EdgeType.CHUNK: ("green", None),
    EdgeType.DEPENDENCY: ("gray", None),
    EdgeType.COREF: ("blue", "dashed"),
}

_EDGE_ORDER = {t: i for i, t in enumerate(EdgeType)}


def _fill_color(roles: FrozenSet[RoleLabel]) -> Optional[str]:
    if not roles:
        return None
    for role, color in ROLE_COLORS:
        if role in roles:
            return color
    return DEFAULT_ROLE_COLOR


def to_dot(graph: TextGraph, name: str = "textgraph") -> str:
    """Deterministic DOT rendering of the graph.

    Node identifiers are the "surface-index" labels; when two sentences
    produce the same label, every occurrence is disambiguated with a
    "#<sentence>" suffix (the visible label stays unchanged).
    """
    nodes = sorted(graph.nodes, key=lambda n: (n.sent, n.index))
    label_counts: Dict[str, int] = {}
    for node in nodes:
        label_counts[node.label] = label_counts.get(node.label, 0) + 1
    node_id = {
        (n.sent, n.index): n.label if label_counts[n.label] == 1 else f"{n.label}#{n.sent}"
        for n in nodes
    }

    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for node in nodes:
        attrs = []
        color = _fill_color(node.roles)
        if color is not None:
            attrs.append(f'fillcolor="{color}"')
            attrs.append('style="filled"')
        attrs.append(f'label="{_dot_escape(node.label)}"')
        if node.roles:
            roles = "|".join(sorted(r.value for r in node.roles))
            attrs.append(f'tooltip="{roles}"')
        lines.append(f'  "{_dot_escape(node_id[(node.sent, node.index)])}" [{", ".join(attrs)}];')
    edges = sorted(graph.edges,
                   key=lambda e: (_EDGE_ORDER[e.type], e.src, e.dst, e.label or ""))
    for edge in edges:
        color, style = EDGE_STYLE[edge.type]
        attrs = [f'color="{color}"']
        if style:
            attrs.append(f'style="{style}"')
        if edge.type is EdgeType.DEPENDENCY and edge.label:
            attrs.append(f'label="{_dot_escape(edge.label)}"')
        lines.append(f'  "{_dot_escape(node_id[edge.src])}" -> '
                     f'"{_dot_escape(node_id[edge.dst])}" [{", ".join(attrs)}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def to_json_graph(graph: TextGraph) -> str:
    """Lossless JSON export; node ids are "sent:index" pairs."""
    data = {
        "schema": GRAPH_SCHEMA,
        "layers": sorted(l.value for l in graph.layers),
        "nodes": [
            {"id": n.key, "surface": n.surface, "sent": n.sent, "index": n.index,
             "roles": sorted(r.value for r in n.roles)}
            for n in sorted(graph.nodes, key=lambda n: (n.sent, n.index))
        ],
        "edges": [
            {"src": f"{e.src[0]}:{e.src[1]}", "dst": f"{e.dst[0]}:{e.dst[1]}",
             "type": e.type.value, "label": e.label}
            for e in sorted(graph.edges,
                            key=lambda e: (_EDGE_ORDER[e.type], e.src, e.dst, e.label or ""))
        ],
    }
    return json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def graph_from_json(text: str) -> TextGraph:
    """Inverse of to_json_graph."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"graph document is not valid JSON: {exc}") from None
    if data.get("schema") != GRAPH_SCHEMA:
        raise ParseError(f"unsupported graph schema {data.get('schema')!r}")
    nodes = tuple(
        GraphNode(sent=n["sent"], index=n["index"], surface=n["surface"],
                  roles=frozenset(RoleLabel(r) for r in n.get("roles", ())))
        for n in data.get("nodes", ())
    )

    def key(s):
        sent, index = s.split(":")
        return int(sent), int(index)

    edges = tuple(
        GraphEdge(src=key(e["src"]), dst=key(e["dst"]),
                  type=EdgeType(e["type"]), label=e.get("label"))
        for e in data.get("edges", ())
    )
    layers = frozenset(EdgeType(l) for l in data.get("layers", ()))
    return TextGraph(nodes=nodes, edges=edges, layers=layers)
