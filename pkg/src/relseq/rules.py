"""Condition/action rules over syntax groups and their application.

A rule is anchored at a group of a given kind. Its conditions test groups at
signed offsets from the anchor, and its action attaches or unattaches one
labeled relation from the anchor to the group ``offset`` positions away.
Matching never looks at the current relations, so a rule's match sites in a
sentence are fixed; application within a sentence is a batch edit.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from enum import Enum
from typing import IO, Iterable, Sequence

from .corpus import (
    KIND_ORDER,
    LABEL_ORDER,
    AnnotatedCorpus,
    GroupKind,
    Label,
    Relation,
    Sentence,
)
from .lexicon import LexiconBundle

RULES_HEADER = "relseq-rules v1"


class ConditionKind(str, Enum):
    GROUP_TYPE = "group-type"
    VERB_PROPERTY = "verb-property"
    SENTENCE_END = "sentence-end"
    PP_ATTACHMENT = "pp-attachment"
    CONTAINS_LEXEME = "contains-lexeme"
    CONTAINS_POS = "contains-pos"
    BETWEEN_LEXEME = "between-lexeme"
    BETWEEN_POS = "between-pos"
    HEAD_WORD = "head-word"
    HEAD_POS = "head-pos"
    HEAD_NE = "head-ne"
    HEAD_SUBCAT = "head-subcat"
    HEAD_SEMCLASS = "head-semclass"
    BETWEEN_PUNCT_CC = "between-punct-cc"
    HEAD_WORDLIST = "head-wordlist"


CK = ConditionKind
COND_ORDER = {k: i for i, k in enumerate(ConditionKind)}
BETWEEN_KINDS = frozenset({CK.BETWEEN_LEXEME, CK.BETWEEN_POS, CK.BETWEEN_PUNCT_CC})
HEAD_KINDS = frozenset({CK.HEAD_WORD, CK.HEAD_POS, CK.HEAD_NE, CK.HEAD_SUBCAT, CK.HEAD_SEMCLASS, CK.HEAD_WORDLIST})
ARGLESS_KINDS = frozenset({CK.PP_ATTACHMENT, CK.BETWEEN_PUNCT_CC})

PUNCT_CC_TAGS = frozenset({"CC", ",", ".", ":", ";", "``", "''", "-LRB-", "-RRB-", "(", ")", "HYPH", "NFP"})


def is_punct_or_cc(text: str, pos: str) -> bool:
    return pos in PUNCT_CC_TAGS or all(ch in string.punctuation for ch in text)


def _signed(n: int) -> str:
    return f"{n:+d}" if n else "0"


@dataclass(frozen=True)
class Condition:
    kind: ConditionKind
    position: int
    argument: str = ""
    negated: bool = False
    second_position: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ConditionKind(self.kind))
        if self.kind in BETWEEN_KINDS:
            if self.second_position is None or self.second_position == self.position:
                raise ValueError(f"{self.kind.value} needs two distinct positions")
            if self.second_position < self.position:
                lo, hi = self.second_position, self.position
                object.__setattr__(self, "position", lo)
                object.__setattr__(self, "second_position", hi)
        elif self.second_position is not None:
            raise ValueError(f"{self.kind.value} takes a single position")

    @property
    def positions(self) -> tuple[int, ...]:
        if self.second_position is None:
            return (self.position,)
        return (self.position, self.second_position)

    def sort_key(self):
        return (
            self.position,
            COND_ORDER[self.kind],
            self.second_position if self.second_position is not None else self.position,
            self.argument,
            self.negated,
        )

    def negate(self) -> Condition:
        return Condition(self.kind, self.position, self.argument, not self.negated, self.second_position)

    def __str__(self) -> str:
        where = _signed(self.position)
        if self.second_position is not None:
            where += ":" + _signed(self.second_position)
        arg = f"={self.argument}" if self.argument else ""
        return f"{'!' if self.negated else ''}{self.kind.value}@{where}{arg}"


class Mode(str, Enum):
    ATTACH = "attach"
    UNATTACH = "unattach"


MODE_ORDER = {Mode.ATTACH: 0, Mode.UNATTACH: 1}


@dataclass(frozen=True)
class Action:
    mode: Mode
    label: Label
    offset: int

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "label", Label(self.label))
        if self.offset == 0:
            raise ValueError("action offset must be non-zero")

    def sort_key(self):
        return (MODE_ORDER[self.mode], LABEL_ORDER[self.label], self.offset)

    def __str__(self) -> str:
        return f"{self.mode.value} {self.label.value} {_signed(self.offset)}"


@dataclass(frozen=True)
class Rule:
    anchor_kind: GroupKind
    conditions: tuple[Condition, ...]
    action: Action

    def __post_init__(self):
        object.__setattr__(self, "anchor_kind", GroupKind(self.anchor_kind))
        conds = tuple(sorted(set(self.conditions), key=Condition.sort_key))
        object.__setattr__(self, "conditions", conds)

    def sort_key(self):
        return (
            KIND_ORDER[self.anchor_kind],
            self.action.sort_key(),
            len(self.conditions),
            tuple(c.sort_key() for c in self.conditions),
        )

    def __str__(self) -> str:
        conds = " ".join(str(c) for c in self.conditions)
        body = f"{self.anchor_kind.value}: {conds} " if conds else f"{self.anchor_kind.value}: "
        return f"{body}-> {self.action}"


def selection_key(rule: Rule, net: int):
    """Order for picking the best rule: higher net, then fewer conditions,
    then canonical rule order. Smaller is better."""
    return (-net, len(rule.conditions), rule.sort_key())


def position_window(offset: int) -> tuple[int, int]:
    """Groups spanned by a relation at ``offset`` plus their immediate neighbours."""
    return min(0, offset) - 1, max(0, offset) + 1


# --- evaluation -------------------------------------------------------------


def _group_test(c: Condition, gid: int, s: Sentence, lex: LexiconBundle) -> bool:
    g = s.groups[gid]
    k = c.kind
    if k is CK.GROUP_TYPE:
        return g.kind.value == c.argument
    if k is CK.VERB_PROPERTY:
        return any(v.value == c.argument for v in g.vprops)
    if k is CK.SENTENCE_END:
        if c.argument == "first":
            return gid == 0
        if c.argument == "last":
            return gid == len(s.groups) - 1
        return False
    if k is CK.PP_ATTACHMENT:
        return any(o.kind is GroupKind.IN and o.attach == gid for o in s.groups)
    if k is CK.CONTAINS_LEXEME:
        return any(x.text.lower() == c.argument for x in s.group_lexemes(g))
    if k is CK.CONTAINS_POS:
        return any(x.pos == c.argument for x in s.group_lexemes(g))
    head = s.head(g)
    if k is CK.HEAD_WORD:
        return c.argument in lex.forms_of(head.text)
    if k is CK.HEAD_POS:
        return head.pos == c.argument
    if k is CK.HEAD_NE:
        return g.ne == c.argument
    if k is CK.HEAD_SUBCAT:
        return c.argument in lex.subcats_of(head.text)
    if k is CK.HEAD_SEMCLASS:
        return c.argument in lex.classes_of(head.text, g.kind)
    if k is CK.HEAD_WORDLIST:
        return lex.in_wordlist(head.text, c.argument)
    raise ValueError(f"not a single-group test: {k}")


def eval_condition(c: Condition, anchor: int, s: Sentence, lex: LexiconBundle) -> bool:
    n = len(s.groups)
    if c.kind in BETWEEN_KINDS:
        a, b = anchor + c.position, anchor + c.second_position
        if not (0 <= a < n and 0 <= b < n):
            base = False
        else:
            between = s.lexemes_between(a, b)
            if c.kind is CK.BETWEEN_LEXEME:
                base = any(x.text.lower() == c.argument for x in between)
            elif c.kind is CK.BETWEEN_POS:
                base = any(x.pos == c.argument for x in between)
            else:
                base = any(is_punct_or_cc(x.text, x.pos) for x in between)
    else:
        gid = anchor + c.position
        base = 0 <= gid < n and _group_test(c, gid, s, lex)
    return base != c.negated


def rule_matches(r: Rule, anchor: int, s: Sentence, lex: LexiconBundle) -> bool:
    n = len(s.groups)
    if not 0 <= anchor < n or s.groups[anchor].kind is not r.anchor_kind:
        return False
    if not 0 <= anchor + r.action.offset < n:
        return False
    return all(eval_condition(c, anchor, s, lex) for c in r.conditions)


def match_sites(r: Rule, s: Sentence, lex: LexiconBundle) -> list[int]:
    return [a for a in range(len(s.groups)) if rule_matches(r, a, s, lex)]


def apply_rule(r: Rule, s: Sentence, rels: frozenset[Relation], lex: LexiconBundle) -> frozenset[Relation]:
    """Apply ``r`` at every matching anchor at once; all matches are decided
    on the sentence before any edit."""
    act = r.action
    edits = {Relation(act.label, a, a + act.offset) for a in match_sites(r, s, lex)}
    if not edits:
        return frozenset(rels)
    if act.mode is Mode.ATTACH:
        return frozenset(rels) | edits
    return frozenset(rels) - edits


# --- sequences --------------------------------------------------------------


@dataclass
class RuleSequence:
    rules: tuple[Rule, ...] = ()
    gains: tuple[int | None, ...] = ()
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rules = tuple(self.rules)
        self.gains = tuple(self.gains) if self.gains else (None,) * len(self.rules)
        if len(self.gains) != len(self.rules):
            raise ValueError("one gain entry per rule")

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


def apply_rules_to_sentence(rules: Iterable[Rule], s: Sentence, start, lex: LexiconBundle) -> frozenset[Relation]:
    state = frozenset(start)
    for r in rules:
        state = apply_rule(r, s, state, lex)
    return state


def apply_sequence(
    seq: RuleSequence | Sequence[Rule], corpus: AnnotatedCorpus, lex: LexiconBundle
) -> list[frozenset[Relation]]:
    """Run the rules in order over every sentence, starting from its
    ``initial`` labeling."""
    rules = tuple(seq.rules if isinstance(seq, RuleSequence) else seq)
    return [apply_rules_to_sentence(rules, item.sentence, item.initial, lex) for item in corpus]


# --- rule files ---------------------------------------------------------------


class RuleFileError(ValueError):
    pass


_COND_KEYS = {"kind", "pos", "pos2", "arg", "neg"}
_RULE_KEYS = {"anchor", "conditions", "action", "net", "comment"}


def condition_record(c: Condition) -> dict:
    rec: dict = {"kind": c.kind.value, "pos": c.position}
    if c.second_position is not None:
        rec["pos2"] = c.second_position
    rec["arg"] = c.argument
    rec["neg"] = c.negated
    return rec


def rule_record(r: Rule, net: int | None = None, comment: str | None = None) -> dict:
    rec: dict = {
        "anchor": r.anchor_kind.value,
        "conditions": [condition_record(c) for c in r.conditions],
        "action": [r.action.mode.value, r.action.label.value, r.action.offset],
    }
    if net is not None:
        rec["net"] = net
    if comment:
        rec["comment"] = comment
    return rec


def serialize_rules(seq: RuleSequence) -> str:
    lines = [RULES_HEADER, json.dumps({"meta": seq.metadata}, sort_keys=True, separators=(",", ":"))]
    for r, net in zip(seq.rules, seq.gains):
        lines.append(json.dumps(rule_record(r, net, str(r)), separators=(",", ":")))
    return "\n".join(lines) + "\n"


def _rule_from_record(rec, lineno: int) -> tuple[Rule, int | None]:
    if not isinstance(rec, dict):
        raise RuleFileError(f"line {lineno}: rule record must be an object")
    extra = set(rec) - _RULE_KEYS
    if extra:
        raise RuleFileError(f"line {lineno}: unknown rule field(s): {', '.join(sorted(extra))}")
    try:
        conds = []
        for c in rec["conditions"]:
            extra = set(c) - _COND_KEYS
            if extra:
                raise RuleFileError(f"line {lineno}: unknown condition field(s): {', '.join(sorted(extra))}")
            conds.append(Condition(CK(c["kind"]), int(c["pos"]), str(c.get("arg", "")), bool(c.get("neg", False)), c.get("pos2")))
        mode, label, offset = rec["action"]
        rule = Rule(GroupKind(rec["anchor"]), tuple(conds), Action(Mode(mode), Label(label), int(offset)))
    except RuleFileError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise RuleFileError(f"line {lineno}: bad rule record: {e}") from None
    return rule, rec.get("net")


def parse_rules(stream: IO[str] | str) -> RuleSequence:
    text = stream.read() if hasattr(stream, "read") else stream
    rules, gains, meta = [], [], {}
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if not header_seen:
            if line != RULES_HEADER:
                raise RuleFileError(f"line {lineno}: expected header {RULES_HEADER!r}, got {line[:40]!r}")
            header_seen = True
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as e:
            raise RuleFileError(f"line {lineno}: invalid JSON: {e.msg}") from None
        if isinstance(rec, dict) and set(rec) == {"meta"}:
            meta = rec["meta"]
            continue
        rule, net = _rule_from_record(rec, lineno)
        rules.append(rule)
        gains.append(net)
    if not header_seen:
        raise RuleFileError(f"empty rule file; expected header {RULES_HEADER!r}")
    return RuleSequence(tuple(rules), tuple(gains), meta)


def read_rules(path) -> RuleSequence:
    with open(path, encoding="utf-8") as f:
        return parse_rules(f)


def write_rules(seq: RuleSequence, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_rules(seq))
