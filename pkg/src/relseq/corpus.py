"""Sentences, syntax groups, relation graphs and the line-delimited corpus format.

A corpus file starts with the header line ``relseq-corpus v1`` and then holds
one JSON record per sentence::

    {"tokens": [{"text": "I", "pos": "PRP"}, ...],
     "groups": [{"kind": "noun", "span": [0, 0], "head": 0}, ...],
     "gold": [["subj", 0, 1], ...],
     "initial": [...]}

Group ids are positions in the ``groups`` list. Relations are sentence scoped
triples ``(label, source, target)`` over group ids.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import IO, Iterable, NamedTuple

log = logging.getLogger(__name__)

CORPUS_HEADER = "relseq-corpus v1"


class GroupKind(str, Enum):
    NOUN = "noun"
    VERB = "verb"
    ADVERB = "adverb"
    ADJECTIVE = "adjective"
    IN = "in"


class VerbProperty(str, Enum):
    PASSIVE = "passive"
    INFINITIVAL = "infinitival"
    PRESENT_PARTICIPLE = "unconjugated-present-participle"


class Label(str, Enum):
    SUBJ = "subj"
    OBJ = "obj"
    LOC_OBJ = "loc-obj"
    INDOBJ = "indobj"
    EMPTY = "empty"
    PP_SUBJ = "pp-subj"
    PP_OBJ = "pp-obj"
    PP_IO = "pp-io"
    COP_SUBJ = "cop-subj"
    N_COP_OBJ = "n-cop-obj"
    P_COP_OBJ = "p-cop-obj"
    SUBSET = "subset"
    MOD = "mod"
    MOD_LOC = "mod-loc"
    MOD_TIME = "mod-time"
    MOD_POSS = "mod-poss"
    MOD_QUANT = "mod-quant"
    MOD_IDENT = "mod-ident"
    MOD_SCALAR = "mod-scalar"


KIND_ORDER = {k: i for i, k in enumerate(GroupKind)}
LABEL_ORDER = {lab: i for i, lab in enumerate(Label)}


class Relation(NamedTuple):
    label: Label
    source: int
    target: int

    @property
    def offset(self) -> int:
        return self.target - self.source

    def sort_key(self):
        return (LABEL_ORDER[self.label], self.source, self.target)

    def __str__(self) -> str:
        return f"{self.label.value}({self.source}->{self.target})"


RelationSet = frozenset  # frozenset[Relation]


@dataclass(frozen=True)
class Lexeme:
    text: str
    pos: str
    index: int


@dataclass(frozen=True)
class SyntaxGroup:
    id: int
    kind: GroupKind
    span: tuple[int, int]
    head: int
    ne: str | None = None
    vprops: frozenset[VerbProperty] = frozenset()
    attach: int | None = None


@dataclass(frozen=True)
class Sentence:
    lexemes: tuple[Lexeme, ...]
    groups: tuple[SyntaxGroup, ...]

    def __len__(self) -> int:
        return len(self.groups)

    def head(self, group: SyntaxGroup) -> Lexeme:
        return self.lexemes[group.head]

    def group_lexemes(self, group: SyntaxGroup) -> tuple[Lexeme, ...]:
        lo, hi = group.span
        return self.lexemes[lo : hi + 1]

    def lexemes_between(self, a: int, b: int) -> tuple[Lexeme, ...]:
        """Lexemes strictly between the spans of groups ``a`` and ``b``."""
        if a > b:
            a, b = b, a
        lo = self.groups[a].span[1] + 1
        hi = self.groups[b].span[0]
        return self.lexemes[lo:hi]

    def text(self) -> str:
        """Bracketed rendering, e.g. ``[I] [saw] [the cat]``."""
        out = []
        starts = {g.span[0]: g for g in self.groups}
        i = 0
        while i < len(self.lexemes):
            g = starts.get(i)
            if g is not None:
                out.append("[" + " ".join(x.text for x in self.group_lexemes(g)) + "]")
                i = g.span[1] + 1
            else:
                out.append(self.lexemes[i].text)
                i += 1
        return " ".join(out)


@dataclass(frozen=True)
class AnnotatedSentence:
    sentence: Sentence
    gold: frozenset[Relation]
    initial: frozenset[Relation] = frozenset()


@dataclass(frozen=True)
class AnnotatedCorpus:
    sentences: tuple[AnnotatedSentence, ...] = ()

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    def __getitem__(self, i):
        return self.sentences[i]

    @property
    def gold(self) -> list[frozenset[Relation]]:
        return [s.gold for s in self.sentences]

    @property
    def initial(self) -> list[frozenset[Relation]]:
        return [s.initial for s in self.sentences]

    def with_initial(self, labelings: Iterable[Iterable[Relation]]) -> AnnotatedCorpus:
        labelings = list(labelings)
        if len(labelings) != len(self.sentences):
            raise ValueError(f"expected {len(self.sentences)} labelings, got {len(labelings)}")
        return AnnotatedCorpus(
            tuple(
                AnnotatedSentence(s.sentence, s.gold, frozenset(rels))
                for s, rels in zip(self.sentences, labelings)
            )
        )


def group_offset(a: int, b: int) -> int:
    """Signed distance from group ``a`` to group ``b``; positive is rightward."""
    return b - a


# --- validation ------------------------------------------------------------


@dataclass(frozen=True)
class Diagnostic:
    sentence: int
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        return f"sentence:{self.sentence} {self.message}"


def _check_relations(n: int, where: str, rels: Iterable[Relation], idx: int) -> list[Diagnostic]:
    out = []
    for r in sorted(rels, key=Relation.sort_key):
        for end, gid in (("source", r.source), ("target", r.target)):
            if not 0 <= gid < n:
                out.append(Diagnostic(idx, f"{where} relation {r}: {end} {gid} is not a group id (have {n} groups)"))
        if r.source == r.target:
            out.append(Diagnostic(idx, f"{where} relation {r}: source equals target"))
    return out


def validate_sentence(idx: int, item: AnnotatedSentence) -> list[Diagnostic]:
    s = item.sentence
    diags: list[Diagnostic] = []
    for i, lx in enumerate(s.lexemes):
        if not lx.text:
            diags.append(Diagnostic(idx, f"lexeme {i}: empty text"))
        if lx.index != i:
            diags.append(Diagnostic(idx, f"lexeme {i}: index {lx.index} is not its position"))
    if not s.groups:
        diags.append(Diagnostic(idx, "sentence has no groups", "warning"))
    n = len(s.groups)
    prev_hi = -1
    for i, g in enumerate(s.groups):
        lo, hi = g.span
        if g.id != i:
            diags.append(Diagnostic(idx, f"group {i}: id {g.id} is not its position"))
        if not (0 <= lo <= hi < len(s.lexemes)):
            diags.append(Diagnostic(idx, f"group {i}: span [{lo},{hi}] outside lexemes 0..{len(s.lexemes) - 1}"))
        elif not lo <= g.head <= hi:
            diags.append(Diagnostic(idx, f"group {i}: head {g.head} outside span [{lo},{hi}]"))
        if lo <= prev_hi:
            diags.append(Diagnostic(idx, f"group {i}: span [{lo},{hi}] overlaps or precedes previous group"))
        prev_hi = max(prev_hi, hi)
        if g.vprops and g.kind is not GroupKind.VERB:
            diags.append(Diagnostic(idx, f"group {i}: verb properties on a {g.kind.value} group"))
        if g.attach is not None:
            if g.kind is not GroupKind.IN:
                diags.append(Diagnostic(idx, f"group {i}: attachment on a {g.kind.value} group"))
            elif not 0 <= g.attach < n or g.attach == i:
                diags.append(Diagnostic(idx, f"group {i}: attachment target {g.attach} is not another group"))
    diags += _check_relations(n, "gold", item.gold, idx)
    diags += _check_relations(n, "initial", item.initial, idx)
    return diags


def validate(corpus: AnnotatedCorpus) -> list[Diagnostic]:
    """All invariant violations in ``corpus``; empty iff well formed."""
    out: list[Diagnostic] = []
    for i, item in enumerate(corpus.sentences):
        out += validate_sentence(i, item)
    return out


# --- reading and writing ----------------------------------------------------


class CorpusError(ValueError):
    pass


class CorpusFormatError(CorpusError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CorpusValidationError(CorpusError):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(str(d) for d in diagnostics))
        self.diagnostics = diagnostics


_RECORD_KEYS = {"tokens", "groups", "gold", "initial"}
_TOKEN_KEYS = {"text", "pos"}
_GROUP_KEYS = {"kind", "span", "head", "ne", "vprops", "attach"}


def _unknown(obj: dict, allowed: set, what: str, line: int):
    extra = sorted(set(obj) - allowed)
    if extra:
        raise CorpusFormatError(line, f"unknown {what} field(s): {', '.join(extra)}")


def _int(v, what: str, line: int) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise CorpusFormatError(line, f"{what} must be an integer, got {v!r}")
    return v


def _relations(raw, what: str, line: int, sent: int) -> frozenset[Relation]:
    if not isinstance(raw, list):
        raise CorpusFormatError(line, f"{what} must be a list")
    rels = []
    for item in raw:
        if not (isinstance(item, list) and len(item) == 3):
            raise CorpusFormatError(line, f"{what} entries must be [label, source, target], got {item!r}")
        try:
            label = Label(item[0])
        except ValueError:
            raise CorpusFormatError(line, f"unknown relation label {item[0]!r}") from None
        rels.append(Relation(label, _int(item[1], "relation source", line), _int(item[2], "relation target", line)))
    out = frozenset(rels)
    if len(out) != len(rels):
        log.warning("sentence:%d duplicate %s relation(s) collapsed", sent, what)
    return out


def _parse_record(rec, line: int, sent: int) -> AnnotatedSentence:
    if not isinstance(rec, dict):
        raise CorpusFormatError(line, "record must be an object")
    _unknown(rec, _RECORD_KEYS, "record", line)
    for key in ("tokens", "groups", "gold"):
        if key not in rec:
            raise CorpusFormatError(line, f"missing field {key!r}")
    if not isinstance(rec["tokens"], list) or not isinstance(rec["groups"], list):
        raise CorpusFormatError(line, "tokens and groups must be lists")

    lexemes = []
    for i, tok in enumerate(rec["tokens"]):
        if not isinstance(tok, dict):
            raise CorpusFormatError(line, f"token {i} must be an object")
        _unknown(tok, _TOKEN_KEYS, "token", line)
        if not isinstance(tok.get("text"), str) or not isinstance(tok.get("pos"), str):
            raise CorpusFormatError(line, f"token {i} needs string text and pos")
        lexemes.append(Lexeme(tok["text"], tok["pos"], i))

    groups = []
    for i, g in enumerate(rec["groups"]):
        if not isinstance(g, dict):
            raise CorpusFormatError(line, f"group {i} must be an object")
        _unknown(g, _GROUP_KEYS, "group", line)
        try:
            kind = GroupKind(g.get("kind"))
        except ValueError:
            raise CorpusFormatError(line, f"group {i}: unknown kind {g.get('kind')!r}") from None
        span = g.get("span")
        if not (isinstance(span, list) and len(span) == 2):
            raise CorpusFormatError(line, f"group {i}: span must be [lo, hi]")
        try:
            vprops = frozenset(VerbProperty(v) for v in g.get("vprops", []))
        except ValueError as e:
            raise CorpusFormatError(line, f"group {i}: {e}") from None
        ne = g.get("ne")
        if ne is not None and not isinstance(ne, str):
            raise CorpusFormatError(line, f"group {i}: ne must be a string")
        attach = g.get("attach")
        groups.append(
            SyntaxGroup(
                id=i,
                kind=kind,
                span=(_int(span[0], "span", line), _int(span[1], "span", line)),
                head=_int(g.get("head"), f"group {i} head", line),
                ne=ne,
                vprops=vprops,
                attach=None if attach is None else _int(attach, "attach", line),
            )
        )
    gold = _relations(rec["gold"], "gold", line, sent)
    initial = _relations(rec.get("initial", []), "initial", line, sent)
    return AnnotatedSentence(Sentence(tuple(lexemes), tuple(groups)), gold, initial)


def parse_corpus(stream: IO[str] | IO[bytes] | str | bytes, strict: bool = True) -> AnnotatedCorpus:
    """Parse and validate a corpus; raises CorpusFormatError, and
    CorpusValidationError when ``strict``."""
    if hasattr(stream, "read"):
        stream = stream.read()
    if isinstance(stream, bytes):
        stream = stream.decode("utf-8")
    lines = stream.splitlines()
    sentences = []
    seen_header = False
    for lineno, raw in enumerate(lines, 1):
        text = raw.strip()
        if not text:
            continue
        if not seen_header:
            if text != CORPUS_HEADER:
                raise CorpusFormatError(lineno, f"expected header {CORPUS_HEADER!r}, got {text[:40]!r}")
            seen_header = True
            continue
        try:
            rec = json.loads(text)
        except json.JSONDecodeError as e:
            raise CorpusFormatError(lineno, f"invalid JSON: {e.msg}") from None
        sentences.append(_parse_record(rec, lineno, len(sentences)))
    corpus = AnnotatedCorpus(tuple(sentences))
    if not strict:
        return corpus
    diags = validate(corpus)
    errors = [d for d in diags if d.severity == "error"]
    for d in diags:
        if d.severity != "error":
            log.warning("%s", d)
    if errors:
        raise CorpusValidationError(errors)
    return corpus


def read_corpus(path, strict: bool = True) -> AnnotatedCorpus:
    with open(path, encoding="utf-8") as f:
        return parse_corpus(f, strict)


def _rels_json(rels: Iterable[Relation]) -> list:
    return [[r.label.value, r.source, r.target] for r in sorted(rels, key=Relation.sort_key)]


def sentence_record(item: AnnotatedSentence) -> dict:
    s = item.sentence
    groups = []
    for g in s.groups:
        rec: dict = {"kind": g.kind.value, "span": list(g.span), "head": g.head}
        if g.ne is not None:
            rec["ne"] = g.ne
        if g.vprops:
            rec["vprops"] = sorted(v.value for v in g.vprops)
        if g.attach is not None:
            rec["attach"] = g.attach
        groups.append(rec)
    out = {
        "tokens": [{"text": x.text, "pos": x.pos} for x in s.lexemes],
        "groups": groups,
        "gold": _rels_json(item.gold),
    }
    if item.initial:
        out["initial"] = _rels_json(item.initial)
    return out


def serialize_corpus(corpus: AnnotatedCorpus) -> str:
    lines = [CORPUS_HEADER]
    for item in corpus.sentences:
        lines.append(json.dumps(sentence_record(item), ensure_ascii=False, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def write_corpus(corpus: AnnotatedCorpus, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_corpus(corpus))


# --- construction helpers ---------------------------------------------------


@dataclass
class SentenceBuilder:
    """Build a sentence group by group.

    >>> b = SentenceBuilder()
    >>> _ = b.group("noun", ("I", "PRP")).group("verb", ("saw", "VBD"))
    >>> b.sentence().text()
    '[I] [saw]'
    """

    lexemes: list = field(default_factory=list)
    groups: list = field(default_factory=list)

    def token(self, text: str, pos: str) -> SentenceBuilder:
        self.lexemes.append(Lexeme(text, pos, len(self.lexemes)))
        return self

    def group(self, kind, *tokens: tuple[str, str], head: int = -1, ne=None, vprops=(), attach=None) -> SentenceBuilder:
        lo = len(self.lexemes)
        for text, pos in tokens:
            self.token(text, pos)
        hi = len(self.lexemes) - 1
        self.groups.append(
            SyntaxGroup(
                id=len(self.groups),
                kind=GroupKind(kind),
                span=(lo, hi),
                head=lo + head if head >= 0 else hi + 1 + head,
                ne=ne,
                vprops=frozenset(VerbProperty(v) for v in vprops),
                attach=attach,
            )
        )
        return self

    def sentence(self) -> Sentence:
        return Sentence(tuple(self.lexemes), tuple(self.groups))


def rels(*triples) -> frozenset[Relation]:
    """``rels(("subj", 0, 1), ...)`` -> frozenset of Relation."""
    return frozenset(Relation(Label(lab), s, t) for lab, s, t in triples)
