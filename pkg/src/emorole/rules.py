"""Declarative dependency-pattern rules and the matcher that applies them.

A rule document is JSON:

    {"schema": "emorole-rules/1",
     "rules": [
       {"id": "passive-attack", "priority": 100, "enabled": true,
        "vars": {"A": [{"lemma_in_set": "attack"},
                       {"upos_in": ["VERB"]},
                       {"feats_has": {"name": "Voice", "value": "Pass"}}],
                 "T": [], "G": []},
        "arcs": [{"gov": "A", "dep": "T", "deprels": ["nsubj", "nsubj:pass"]},
                 {"gov": "A", "dep": "G", "deprels": ["obl", "obl:agent", "agent"]}],
        "produce": [{"role": "Attack", "var": "A", "extent": "token"},
                    {"role": "Territory", "var": "T", "extent": "chunk", "link": "A"},
                    {"role": "Attacker", "var": "G", "extent": "chunk", "link": "A"}]}]}

Node predicates are conjunctions; an empty predicate list matches any
token.  Arc deprel sets match labels exactly; an empty set accepts any
label.  The `link` of a production names another variable: the produced
annotation will attach to the Cue/Attack annotation sitting on that
variable's token.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from .errors import CompileError, ParseError
from .lexicon import EmotionLexicon, TermSet
from .model import RoleLabel, Sentence, Span, Token

RULES_SCHEMA = "emorole-rules/1"

# Dependency labels (base part, before any ':' subtype) that mark clausal
# subordination; pruned by the SUBTREE_CORE extent policy.
CLAUSAL_DEPRELS = frozenset({"csubj", "ccomp", "xcomp", "advcl", "acl"})


class ExtentPolicy(Enum):
    TOKEN_ONLY = "token"
    ENCLOSING_CHUNK = "chunk"
    SUBTREE = "subtree"
    SUBTREE_CORE = "subtree_core"   # subtree minus clausal dependents


# ---------------------------------------------------------------------------
# Node predicates

@dataclass(frozen=True)
class LemmaIn:
    lemmas: FrozenSet[str]
    set_name: Optional[str] = None

    def matches(self, token: Token) -> bool:
        return token.lemma.casefold() in self.lemmas


@dataclass(frozen=True)
class UposIn:
    tags: FrozenSet[str]

    def matches(self, token: Token) -> bool:
        return token.upos in self.tags


@dataclass(frozen=True)
class FeatsHas:
    name: str
    value: str

    def matches(self, token: Token) -> bool:
        return token.feats.get(self.name) == self.value


@dataclass(frozen=True)
class SurfaceMatches:
    pattern: str
    _compiled: re.Pattern = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_compiled", re.compile(self.pattern))

    def matches(self, token: Token) -> bool:
        return self._compiled.fullmatch(token.surface) is not None


@dataclass(frozen=True)
class IsFirstPerson:
    surfaces: FrozenSet[str]

    def matches(self, token: Token) -> bool:
        return token.surface.casefold() in self.surfaces


@dataclass(frozen=True)
class InEmotionLexicon:
    lexicon: EmotionLexicon = field(compare=False, hash=False)

    def matches(self, token: Token) -> bool:
        return bool(self.lexicon.tags(token.lemma, token.upos))


@dataclass(frozen=True)
class DeprelIn:
    labels: FrozenSet[str]

    def matches(self, token: Token) -> bool:
        return token.deprel in self.labels


Predicate = object  # any of the classes above


@dataclass(frozen=True)
class Arc:
    gov: str
    dep: str
    deprels: FrozenSet[str] = frozenset()   # empty = any label

    def accepts(self, deprel: str) -> bool:
        return not self.deprels or deprel in self.deprels


@dataclass(frozen=True)
class Production:
    role: RoleLabel
    var: str
    extent: ExtentPolicy = ExtentPolicy.TOKEN_ONLY
    link: Optional[str] = None


@dataclass(frozen=True)
class Rule:
    id: str
    priority: int
    vars: Mapping[str, Tuple[Predicate, ...]]
    arcs: Tuple[Arc, ...] = ()
    produce: Tuple[Production, ...] = ()
    enabled: bool = True


@dataclass(frozen=True)
class RuleSet:
    rules: Tuple[Rule, ...]
    schema: str = RULES_SCHEMA

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def get(self, rule_id: str) -> Optional[Rule]:
        for rule in self.rules:
            if rule.id == rule_id:
                return rule
        return None


@dataclass(frozen=True)
class MatchResult:
    rule_id: str
    bindings: Mapping[str, Token]

    def sort_key(self):
        return tuple(self.bindings[name].index for name in sorted(self.bindings))


# ---------------------------------------------------------------------------
# Compilation

class CompileContext:
    """Resources a rule document may reference at compile time."""

    def __init__(self, term_sets: Mapping[str, TermSet] = (), *,
                 first_person: Sequence[str] = (),
                 emotion_lexicon: Optional[EmotionLexicon] = None):
        self.term_sets = dict(term_sets or {})
        self.first_person = frozenset(s.casefold() for s in first_person)
        self.emotion_lexicon = emotion_lexicon if emotion_lexicon is not None else EmotionLexicon()


def _compile_predicate(obj: dict, ctx: CompileContext, rule_id: str):
    if not isinstance(obj, dict) or len(obj) != 1:
        raise CompileError(f"predicate must be a single-key object, got {obj!r}", rule_id=rule_id)
    kind, arg = next(iter(obj.items()))
    if kind == "lemma_in":
        return LemmaIn(lemmas=frozenset(l.casefold() for l in arg))
    if kind == "lemma_in_set":
        if arg not in ctx.term_sets:
            raise CompileError(f"unknown term set {arg!r}", rule_id=rule_id)
        return LemmaIn(lemmas=ctx.term_sets[arg].lemmas, set_name=arg)
    if kind == "upos_in":
        return UposIn(tags=frozenset(arg))
    if kind == "feats_has":
        try:
            return FeatsHas(name=arg["name"], value=arg["value"])
        except (TypeError, KeyError):
            raise CompileError(f"feats_has needs name and value, got {arg!r}",
                               rule_id=rule_id) from None
    if kind == "surface_matches":
        try:
            return SurfaceMatches(pattern=arg)
        except re.error as exc:
            raise CompileError(f"bad surface pattern {arg!r}: {exc}", rule_id=rule_id) from None
    if kind == "is_first_person":
        return IsFirstPerson(surfaces=ctx.first_person)
    if kind == "in_emotion_lexicon":
        return InEmotionLexicon(lexicon=ctx.emotion_lexicon)
    if kind == "deprel_in":
        return DeprelIn(labels=frozenset(arg))
    raise CompileError(f"unknown predicate kind {kind!r}", rule_id=rule_id)


def _validate_rule(rule: Rule):
    if not rule.vars:
        raise CompileError("rule has no variables", rule_id=rule.id)
    if not rule.produce:
        raise CompileError("rule produces nothing", rule_id=rule.id)
    names = set(rule.vars)
    for arc in rule.arcs:
        if arc.gov not in names or arc.dep not in names:
            raise CompileError(f"arc references unknown variable "
                               f"{arc.gov!r} or {arc.dep!r}", rule_id=rule.id)
    # Connectivity of the variable constraint graph.
    if len(names) > 1:
        adjacent = {n: set() for n in names}
        for arc in rule.arcs:
            adjacent[arc.gov].add(arc.dep)
            adjacent[arc.dep].add(arc.gov)
        seen = set()
        stack = [next(iter(sorted(names)))]
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(adjacent[cur])
        if seen != names:
            missing = ", ".join(sorted(names - seen))
            raise CompileError(f"pattern is disconnected (unreachable: {missing})",
                               rule_id=rule.id)
    produced_roles = {}
    for prod in rule.produce:
        if prod.var not in names:
            raise CompileError(f"production references unknown variable {prod.var!r}",
                               rule_id=rule.id)
        produced_roles.setdefault(prod.var, set()).add(prod.role)
    for prod in rule.produce:
        if prod.link is None:
            continue
        if prod.link not in names:
            raise CompileError(f"link target {prod.link!r} is not a variable",
                               rule_id=rule.id)
        roles = produced_roles.get(prod.link)
        if roles and not roles & {RoleLabel.CUE, RoleLabel.ATTACK}:
            raise CompileError(
                f"link target {prod.link!r} produces {', '.join(sorted(r.value for r in roles))}, "
                f"expected Cue or Attack", rule_id=rule.id)


def compile_ruleset(doc: dict | str, term_sets: Mapping[str, TermSet] = (), *,
                    context: Optional[CompileContext] = None) -> RuleSet:
    """Validate a rule document and produce an executable RuleSet.

    doc -- the rule document, parsed or as JSON text.
    Rules come out ordered by (priority desc, id).  Raises CompileError
    naming the offending rule, or ParseError for malformed JSON.
    """
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"rule document is not valid JSON: {exc}") from None
    ctx = context if context is not None else CompileContext(term_sets)
    schema = doc.get("schema")
    if schema != RULES_SCHEMA:
        raise CompileError(f"missing or unsupported schema {schema!r} "
                           f"(expected {RULES_SCHEMA!r})")
    rules = []
    seen_ids = set()
    for entry in doc.get("rules", ()):
        rule_id = entry.get("id")
        if not rule_id:
            raise CompileError("rule without id")
        if rule_id in seen_ids:
            raise CompileError("duplicate rule id", rule_id=rule_id)
        seen_ids.add(rule_id)
        vars_ = {}
        for name, preds in entry.get("vars", {}).items():
            vars_[name] = tuple(_compile_predicate(p, ctx, rule_id) for p in preds)
        arcs = tuple(
            Arc(gov=a["gov"], dep=a["dep"], deprels=frozenset(a.get("deprels", ())))
            for a in entry.get("arcs", ())
        )
        produce = []
        for p in entry.get("produce", ()):
            try:
                role = RoleLabel(p["role"])
            except (KeyError, ValueError):
                raise CompileError(f"unknown role in production {p!r}", rule_id=rule_id) from None
            try:
                extent = ExtentPolicy(p.get("extent", "token"))
            except ValueError:
                raise CompileError(f"unknown extent {p.get('extent')!r}", rule_id=rule_id) from None
            produce.append(Production(role=role, var=p["var"], extent=extent,
                                      link=p.get("link")))
        rule = Rule(id=rule_id, priority=int(entry.get("priority", 0)),
                    vars=vars_, arcs=arcs, produce=tuple(produce),
                    enabled=bool(entry.get("enabled", True)))
        _validate_rule(rule)
        rules.append(rule)
    rules.sort(key=lambda r: (-r.priority, r.id))
    return RuleSet(rules=tuple(rules))


# ---------------------------------------------------------------------------
# Matching

def _candidates(rule: Rule, sentence: Sentence) -> Optional[Dict[str, List[Token]]]:
    cands = {}
    for name, predicates in rule.vars.items():
        toks = [t for t in sentence.tokens if all(p.matches(t) for p in predicates)]
        if not toks:
            return None
        cands[name] = toks
    return cands


def find_matches(rule: Rule, sentence: Sentence) -> List[MatchResult]:
    """All variable assignments satisfying the rule, sorted and duplicate-free.

    Results are ordered by the tuple of bound token indices taken in
    variable-name order.
    """
    cands = _candidates(rule, sentence)
    if cands is None:
        return []
    # Assign the most constrained variables first; check arcs as soon as
    # both ends are bound.
    order = sorted(rule.vars, key=lambda n: (len(cands[n]), n))
    position = {name: i for i, name in enumerate(order)}
    arcs_at = {name: [] for name in order}
    for arc in rule.arcs:
        later = arc.gov if position[arc.gov] > position[arc.dep] else arc.dep
        arcs_at[later].append(arc)

    results = []
    binding: Dict[str, Token] = {}

    def assign(depth: int):
        if depth == len(order):
            results.append(MatchResult(rule_id=rule.id, bindings=dict(binding)))
            return
        name = order[depth]
        for tok in cands[name]:
            binding[name] = tok
            ok = True
            for arc in arcs_at[name]:
                gov, dep = binding[arc.gov], binding[arc.dep]
                if dep.head != gov.index or not arc.accepts(dep.deprel):
                    ok = False
                    break
            if ok:
                assign(depth + 1)
        del binding[name]

    assign(0)
    results.sort(key=MatchResult.sort_key)
    return results


def extract_span(token: Token, policy: ExtentPolicy, sentence: Sentence) -> Span:
    """Turn a bound token into an annotation span under the given policy."""
    if policy is ExtentPolicy.TOKEN_ONLY:
        return Span(sentence.index, token.index, token.index + 1)
    if policy is ExtentPolicy.ENCLOSING_CHUNK:
        for chunk in sorted(sentence.chunks):
            if chunk.start <= token.index < chunk.end:
                return chunk
        return Span(sentence.index, token.index, token.index + 1)
    if policy is ExtentPolicy.SUBTREE:
        indices = sentence.subtree(token.index)
    elif policy is ExtentPolicy.SUBTREE_CORE:
        indices = sentence.subtree(
            token.index,
            prune=lambda t: t.deprel.split(":", 1)[0] in CLAUSAL_DEPRELS)
    else:
        raise ValueError(f"unknown extent policy {policy!r}")
    return Span(sentence.index, min(indices), max(indices) + 1)
