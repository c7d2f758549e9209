"""Emotion, sentiment and synonym resources, plus seed-expanded term sets.

File formats (all UTF-8, '#' comment lines skipped):

    emotion lexicon    word<TAB>tag<TAB>{0,1}            (one association per line)
    sentiment lexicon  POS<TAB>sense_id<TAB>pos<TAB>neg<TAB>terms
    synonym graph      lemma<TAB>relation<TAB>lemma
    term set cache     one lemma per line, '#' header records provenance

All lookups are lemma-based and case-folded.  Loaded resources are
immutable; concurrent lookup is safe.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Optional, Set, Tuple

from .errors import ParseError
from .model import EmotionCategory

EMOTION_TAGS = frozenset({
    "anger", "fear", "anticipation", "trust", "surprise", "sadness", "joy", "disgust",
})
POLARITY_TAGS = frozenset({"negative", "positive"})

# Fixed tie-break priority when a lemma carries several primary-emotion tags.
PRIMARY_PRIORITY = (
    ("fear", EmotionCategory.FEAR),
    ("anger", EmotionCategory.ANGER),
    ("sadness", EmotionCategory.SADNESS),
    ("joy", EmotionCategory.JOY),
)

RELATIONS = frozenset({"synonym", "hyponym", "hypernym", "antonym", "meronym", "holonym"})
_INVERSE = {"hyponym": "hypernym", "hypernym": "hyponym",
            "meronym": "holonym", "holonym": "meronym",
            "synonym": "synonym", "antonym": "antonym"}

# Single-letter sense POS tags of the sentiment lexicon source format.
_SENSE_POS = {"a": "ADJ", "s": "ADJ", "n": "NOUN", "v": "VERB", "r": "ADV"}


class EmotionLexicon:
    """Word to emotion/polarity tag associations."""

    def __init__(self):
        self._entries: Dict[Tuple[str, Optional[str]], Set[str]] = {}

    def add(self, lemma: str, tag: str, upos: Optional[str] = None):
        if tag not in EMOTION_TAGS and tag not in POLARITY_TAGS:
            raise ValueError(f"unknown tag {tag!r}")
        self._entries.setdefault((lemma.casefold(), upos), set()).add(tag)

    def tags(self, lemma: str, upos: Optional[str] = None) -> FrozenSet[str]:
        """Tags for the lemma; a POS-specific entry shadows the POS-free one."""
        key = lemma.casefold()
        if upos is not None and (key, upos) in self._entries:
            return frozenset(self._entries[(key, upos)])
        return frozenset(self._entries.get((key, None), ()))

    def __contains__(self, lemma: str) -> bool:
        return bool(self.tags(lemma))

    def __len__(self):
        return len(self._entries)


class SenseSentimentLexicon:
    """Per-(lemma, upos) positivity/negativity/objectivity, averaged over senses."""

    def __init__(self):
        self._senses: Dict[Tuple[str, str], list] = {}

    def add_sense(self, lemma: str, upos: str, pos: float, neg: float):
        if not (0.0 <= pos <= 1.0 and 0.0 <= neg <= 1.0 and pos + neg <= 1.0 + 1e-9):
            raise ValueError(f"scores out of range for {lemma!r}: pos={pos} neg={neg}")
        self._senses.setdefault((lemma.casefold(), upos), []).append((pos, neg, 1.0 - pos - neg))

    def scores(self, lemma: str, upos: str) -> Optional[Tuple[float, float, float]]:
        senses = self._senses.get((lemma.casefold(), upos))
        if not senses:
            return None
        n = len(senses)
        return (sum(s[0] for s in senses) / n,
                sum(s[1] for s in senses) / n,
                sum(s[2] for s in senses) / n)

    def __len__(self):
        return len(self._senses)


class SynonymGraph:
    """Lemma graph with labeled semantic relations.

    Synonym edges are stored symmetrically; hyponym/hypernym and
    meronym/holonym pairs are stored as mutual inverses.
    """

    def __init__(self):
        self._edges: Dict[str, Dict[str, Set[str]]] = {}

    def add(self, a: str, relation: str, b: str):
        if relation not in RELATIONS:
            raise ValueError(f"unknown relation {relation!r}")
        a, b = a.casefold(), b.casefold()
        self._edges.setdefault(a, {}).setdefault(relation, set()).add(b)
        self._edges.setdefault(b, {}).setdefault(_INVERSE[relation], set()).add(a)

    def neighbors(self, lemma: str, relations: Iterable[str]) -> Set[str]:
        out = set()
        edges = self._edges.get(lemma.casefold(), {})
        for rel in relations:
            out |= edges.get(rel, set())
        return out

    @property
    def nodes(self):
        return frozenset(self._edges)


@dataclass(frozen=True)
class TermSet:
    """A named lemma set together with how it was derived."""

    name: str
    lemmas: FrozenSet[str]
    seeds: FrozenSet[str] = frozenset()
    relations: Tuple[str, ...] = ()
    depth: int = 0

    def __contains__(self, lemma: str) -> bool:
        return lemma.casefold() in self.lemmas

    def __len__(self):
        return len(self.lemmas)


def load_emotion_lexicon(source: Iterable[str]) -> EmotionLexicon:
    """Load `word<TAB>tag<TAB>{0,1}` lines; only flag=1 associations are kept."""
    lex = EmotionLexicon()
    for line_no, line in enumerate(_lines(source), start=1):
        if line is None:
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise ParseError(f"expected 3 columns, got {len(cols)}", line=line_no)
        word, tag, flag = cols
        if flag not in ("0", "1"):
            raise ParseError(f"flag must be 0 or 1, got {flag!r}", line=line_no)
        if flag == "0":
            continue
        try:
            lex.add(word, tag)
        except ValueError as exc:
            raise ParseError(str(exc), line=line_no) from None
    return lex


def load_sentiment_lexicon(source: Iterable[str]) -> SenseSentimentLexicon:
    """Load per-sense records `POS<TAB>sense_id<TAB>pos<TAB>neg<TAB>terms`.

    POS is a single-letter sense tag (a/n/v/r/s) or a universal POS tag.
    Terms are space-separated lemmas, optionally suffixed '#<sense-rank>'.
    """
    lex = SenseSentimentLexicon()
    for line_no, line in enumerate(_lines(source), start=1):
        if line is None:
            continue
        cols = line.split("\t")
        if len(cols) < 5:
            raise ParseError(f"expected 5 columns, got {len(cols)}", line=line_no)
        pos_tag = _SENSE_POS.get(cols[0], cols[0])
        try:
            pos, neg = float(cols[2]), float(cols[3])
        except ValueError:
            raise ParseError(f"non-numeric score in {cols[2]!r}/{cols[3]!r}", line=line_no) from None
        for term in cols[4].split():
            lemma = term.split("#", 1)[0].replace("_", " ")
            try:
                lex.add_sense(lemma, pos_tag, pos, neg)
            except ValueError as exc:
                raise ParseError(str(exc), line=line_no) from None
    return lex


def load_synonym_graph(source: Iterable[str]) -> SynonymGraph:
    """Load `lemma<TAB>relation<TAB>lemma` lines."""
    graph = SynonymGraph()
    for line_no, line in enumerate(_lines(source), start=1):
        if line is None:
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise ParseError(f"expected 3 columns, got {len(cols)}", line=line_no)
        try:
            graph.add(cols[0], cols[1], cols[2])
        except ValueError as exc:
            raise ParseError(str(exc), line=line_no) from None
    return graph


def _lines(source: Iterable[str]):
    """Yield stripped content lines, None for blanks/comments."""
    for line in source:
        line = line.rstrip("\n").rstrip("\r")
        if not line or line.lstrip().startswith("#"):
            yield None
        else:
            yield line


def expand_seeds(seeds: Iterable[str], graph: SynonymGraph,
                 relations: Iterable[str], depth: int,
                 name: str = "terms") -> TermSet:
    """Breadth-first closure of the seeds over the chosen relations.

    Antonym edges are never followed, whatever the caller requests.
    Monotone in both depth and seeds; depth 0 returns exactly the seeds.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    relations = tuple(sorted(set(relations) - {"antonym"}))
    seeds = frozenset(s.casefold() for s in seeds)
    found = set(seeds)
    frontier = deque((s, 0) for s in sorted(seeds))
    while frontier:
        lemma, dist = frontier.popleft()
        if dist >= depth:
            continue
        for neighbor in graph.neighbors(lemma, relations):
            if neighbor not in found:
                found.add(neighbor)
                frontier.append((neighbor, dist + 1))
    return TermSet(name=name, lemmas=frozenset(found), seeds=seeds,
                   relations=relations, depth=depth)


def load_term_set(source: Iterable[str], name: str = "terms") -> TermSet:
    """Load a term set cache: one lemma per line, '#' header lines ignored."""
    lemmas = set()
    for line in source:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        lemmas.add(line.casefold())
    return TermSet(name=name, lemmas=frozenset(lemmas))


def dump_term_set(ts: TermSet) -> str:
    header = (f"# term set {ts.name}: seeds={','.join(sorted(ts.seeds))} "
              f"relations={','.join(ts.relations)} depth={ts.depth}\n")
    return header + "\n".join(sorted(ts.lemmas)) + "\n"


@dataclass(frozen=True)
class CueThresholds:
    """Decision parameters for classify_cue."""

    sentiment_threshold: float = 0.5
    map_disgust_to_anger: bool = False


def classify_cue(lemma: str, upos: str, emotions: EmotionLexicon,
                 sentiments: SenseSentimentLexicon,
                 cfg: CueThresholds = CueThresholds()
                 ) -> Optional[Tuple[EmotionCategory, float]]:
    """Decide whether a lemma marks an emotion, and which category.

    A primary-emotion tag in the emotion lexicon wins with strength 1,
    ties resolved by the fixed priority fear > anger > sadness > joy.
    Otherwise a sentiment score >= the threshold yields an Unspecified
    category with the score as strength.  Returns None when neither fires.
    """
    if not (0.0 <= cfg.sentiment_threshold <= 1.0):
        raise ValueError("sentiment_threshold must be in [0, 1]")
    tags = set(emotions.tags(lemma, upos))
    if cfg.map_disgust_to_anger and "disgust" in tags:
        tags.add("anger")
    for tag, category in PRIMARY_PRIORITY:
        if tag in tags:
            return category, 1.0
    scores = sentiments.scores(lemma, upos)
    if scores is not None:
        pos, neg, _obj = scores
        if max(pos, neg) >= cfg.sentiment_threshold:
            if neg >= pos:
                return EmotionCategory.UNSPECIFIED_NEGATIVE, neg
            return EmotionCategory.UNSPECIFIED_POSITIVE, pos
    return None


@dataclass(frozen=True)
class Lexicons:
    """The resource bundle consumed by the annotation pipeline."""

    emotions: EmotionLexicon = field(default_factory=EmotionLexicon)
    sentiments: SenseSentimentLexicon = field(default_factory=SenseSentimentLexicon)
    synonyms: SynonymGraph = field(default_factory=SynonymGraph)
    term_sets: Dict[str, TermSet] = field(default_factory=dict)


def load_lexicon_dir(path) -> Lexicons:
    """Load a lexicon directory by conventional file names.

    emotion.tsv, sentiment.tsv and synonyms.tsv feed the three lexicons;
    every *.terms file becomes a named TermSet (name = file stem).
    Missing files simply yield empty resources.
    """
    path = Path(path)
    emotions = EmotionLexicon()
    sentiments = SenseSentimentLexicon()
    synonyms = SynonymGraph()
    if (path / "emotion.tsv").exists():
        emotions = load_emotion_lexicon((path / "emotion.tsv").read_text(encoding="utf-8").splitlines())
    if (path / "sentiment.tsv").exists():
        sentiments = load_sentiment_lexicon((path / "sentiment.tsv").read_text(encoding="utf-8").splitlines())
    if (path / "synonyms.tsv").exists():
        synonyms = load_synonym_graph((path / "synonyms.tsv").read_text(encoding="utf-8").splitlines())
    term_sets = {}
    for ts_path in sorted(path.glob("*.terms")):
        term_sets[ts_path.stem] = load_term_set(
            ts_path.read_text(encoding="utf-8").splitlines(), name=ts_path.stem)
    return Lexicons(emotions=emotions, sentiments=sentiments,
                    synonyms=synonyms, term_sets=term_sets)
