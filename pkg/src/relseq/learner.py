"""Greedy error-driven induction of rule sequences.

Each iteration scores candidate rules by net gain against the gold
relations and keeps the best one. Candidates are grouped into partitions by
action ``(mode, label, offset)``. Applying a rule only edits triples of its
own ``(label, offset)``, so only the two partitions sharing that pair need
rescoring after a rule is selected; every other partition keeps its cached
best rule.

Inside a partition the search is exact. Each candidate site (an anchor whose
target group exists) is classified as beneficial (+1), harmful (-1) or
neutral for the partition's action given the current state, and every
condition is stored as a bitmask over sites. A rule's net gain is then
``popcount(mask & B) - popcount(mask & H)``. Condition sets are grown level
by level and cut off once their beneficial count cannot beat the best rule
found at a lower level.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .config import TrainingConfig, rule_violations
from .corpus import AnnotatedCorpus, GroupKind, Label, Relation, Sentence
from .lexicon import LexiconBundle
from .rules import (
    BETWEEN_KINDS,
    CK,
    HEAD_KINDS,
    Action,
    Condition,
    Mode,
    Rule,
    RuleSequence,
    apply_rule,
    is_punct_or_cc,
    match_sites,
    position_window,
    selection_key,
)

log = logging.getLogger(__name__)

State = list  # list[set[Relation]], one per sentence


@dataclass(frozen=True)
class CandidateScore:
    rule: Rule
    gained: int = 0
    spurious: int = 0
    lost: int = 0
    unspurious: int = 0

    @property
    def net(self) -> int:
        return (self.gained + self.unspurious) - (self.spurious + self.lost)


def net_gain(
    rule: Rule,
    corpus: AnnotatedCorpus,
    state: Sequence[frozenset[Relation]],
    gold: Sequence[frozenset[Relation]],
    lex: LexiconBundle,
) -> CandidateScore:
    """Score ``rule`` against the current labeling by walking its match sites."""
    act = rule.action
    gained = spurious = lost = unspurious = 0
    for item, cur, key in zip(corpus, state, gold):
        for a in match_sites(rule, item.sentence, lex):
            t = Relation(act.label, a, a + act.offset)
            if act.mode is Mode.ATTACH:
                if t not in cur:
                    if t in key:
                        gained += 1
                    else:
                        spurious += 1
            elif t in cur:
                if t in key:
                    lost += 1
                else:
                    unspurious += 1
    return CandidateScore(rule, gained, spurious, lost, unspurious)


# --- site features ------------------------------------------------------------


def site_features(s: Sentence, anchor: int, offset: int, cfg: TrainingConfig, lex: LexiconBundle) -> set[Condition]:
    """Every un-negated condition that holds at ``anchor`` and lies inside the
    window allowed for a relation at ``offset``."""
    kinds = cfg.condition_kinds
    n = len(s.groups)
    lo, hi = position_window(offset)
    out: set[Condition] = set()
    add = out.add
    for p in range(lo, hi + 1):
        gid = anchor + p
        if not 0 <= gid < n:
            continue
        g = s.groups[gid]
        head = s.head(g)
        if p != 0 and CK.GROUP_TYPE in kinds:
            add(Condition(CK.GROUP_TYPE, p, g.kind.value))
        if CK.VERB_PROPERTY in kinds:
            for v in g.vprops:
                add(Condition(CK.VERB_PROPERTY, p, v.value))
        if CK.SENTENCE_END in kinds:
            if gid == 0:
                add(Condition(CK.SENTENCE_END, p, "first"))
            if gid == n - 1:
                add(Condition(CK.SENTENCE_END, p, "last"))
        if CK.PP_ATTACHMENT in kinds and (p == 0 or not cfg.pp_attachment_anchor_only):
            if any(o.kind is GroupKind.IN and o.attach == gid for o in s.groups):
                add(Condition(CK.PP_ATTACHMENT, p))
        words = s.group_lexemes(g)
        if CK.CONTAINS_LEXEME in kinds:
            for x in words:
                w = x.text.lower()
                if w in cfg.lexeme_whitelist:
                    add(Condition(CK.CONTAINS_LEXEME, p, w))
        if CK.CONTAINS_POS in kinds:
            for x in words:
                add(Condition(CK.CONTAINS_POS, p, x.pos))
        if CK.HEAD_WORD in kinds:
            for w in lex.forms_of(head.text):
                add(Condition(CK.HEAD_WORD, p, w))
        if CK.HEAD_POS in kinds:
            add(Condition(CK.HEAD_POS, p, head.pos))
        if CK.HEAD_NE in kinds and g.ne is not None:
            add(Condition(CK.HEAD_NE, p, g.ne))
        if CK.HEAD_SUBCAT in kinds:
            for v in lex.subcats_of(head.text):
                add(Condition(CK.HEAD_SUBCAT, p, v))
        if CK.HEAD_SEMCLASS in kinds:
            for v in lex.classes_of(head.text, g.kind):
                add(Condition(CK.HEAD_SEMCLASS, p, v))
        if CK.HEAD_WORDLIST in kinds:
            for v in lex.lists_containing(head.text):
                add(Condition(CK.HEAD_WORDLIST, p, v))
    if kinds & BETWEEN_KINDS:
        for p, q in itertools.combinations(range(lo, hi + 1), 2):
            a, b = anchor + p, anchor + q
            if not (0 <= a < n and 0 <= b < n):
                continue
            between = s.lexemes_between(a, b)
            if not between:
                continue
            if CK.BETWEEN_LEXEME in kinds:
                for x in between:
                    w = x.text.lower()
                    if w in cfg.lexeme_whitelist:
                        add(Condition(CK.BETWEEN_LEXEME, p, w, second_position=q))
            if CK.BETWEEN_POS in kinds:
                for x in between:
                    add(Condition(CK.BETWEEN_POS, p, x.pos, second_position=q))
            if CK.BETWEEN_PUNCT_CC in kinds and any(is_punct_or_cc(x.text, x.pos) for x in between):
                add(Condition(CK.BETWEEN_PUNCT_CC, p, second_position=q))
    return out


@dataclass
class SiteTable:
    """Sites of one (offset, anchor kind) pair with per-condition bitmasks.

    Masks are exact only for conditions the config admits at that offset."""

    kind: GroupKind | None = None
    sites: list[tuple[int, int]] = field(default_factory=list)
    features: list[frozenset[Condition]] = field(default_factory=list)
    masks: dict[Condition, int] = field(default_factory=dict)

    @property
    def all_mask(self) -> int:
        return (1 << len(self.sites)) - 1

    def condition_mask(self, c: Condition) -> int:
        if c.kind is CK.GROUP_TYPE and c.position == 0:
            # implied by the anchor kind, so not stored per site
            holds = self.kind is not None and c.argument == self.kind.value
            return self.all_mask if holds != c.negated else 0
        if c.negated:
            return self.all_mask & ~self.masks.get(c.negate(), 0)
        return self.masks.get(c, 0)


class FeatureIndex:
    """Site tables for every offset and anchor kind, built lazily."""

    def __init__(self, corpus: AnnotatedCorpus, cfg: TrainingConfig, lex: LexiconBundle):
        self.corpus = corpus
        self.cfg = cfg
        self.lex = lex
        self._tables: dict[int, dict[GroupKind, SiteTable]] = {}

    def tables(self, offset: int) -> dict[GroupKind, SiteTable]:
        if offset not in self._tables:
            out = {k: SiteTable(k) for k in GroupKind}
            for si, item in enumerate(self.corpus):
                s = item.sentence
                n = len(s.groups)
                for a, g in enumerate(s.groups):
                    if not 0 <= a + offset < n:
                        continue
                    t = out[g.kind]
                    bit = 1 << len(t.sites)
                    t.sites.append((si, a))
                    feats = frozenset(site_features(s, a, offset, self.cfg, self.lex))
                    t.features.append(feats)
                    for c in feats:
                        t.masks[c] = t.masks.get(c, 0) | bit
            self._tables[offset] = out
        return self._tables[offset]

    def score(self, rule: Rule, present: set, gold_present: set) -> tuple[int, int]:
        """(beneficial, harmful) counts of ``rule``'s sites, via bitmasks.

        ``present``/``gold_present`` hold the ``(sentence, anchor)`` pairs whose
        triple for the rule's (label, offset) is in the state/gold."""
        t = self.tables(rule.action.offset)[rule.anchor_kind]
        b, h = classify_sites(t, rule.action.mode, present, gold_present)
        m = t.all_mask
        for c in rule.conditions:
            m &= t.condition_mask(c)
        return (m & b).bit_count(), (m & h).bit_count()


def classify_sites(t: SiteTable, mode: Mode, present: set, gold_present: set) -> tuple[int, int]:
    b = h = 0
    for i, site in enumerate(t.sites):
        in_state = site in present
        in_gold = site in gold_present
        if mode is Mode.ATTACH:
            if not in_state:
                if in_gold:
                    b |= 1 << i
                else:
                    h |= 1 << i
        elif in_state:
            if in_gold:
                h |= 1 << i
            else:
                b |= 1 << i
    return b, h


@dataclass(frozen=True)
class PartitionBest:
    rule: Rule
    net: int
    beneficial: int
    harmful: int

    def key(self):
        return selection_key(self.rule, self.net)


def _search_table(
    t: SiteTable, kind: GroupKind, action: Action, b: int, h: int, cfg: TrainingConfig, floor: int
) -> PartitionBest | None:
    full = t.all_mask
    ben = set()
    bits = b
    while bits:
        low = bits & -bits
        ben.add(low.bit_length() - 1)
        bits ^= low
    positives: set[Condition] = set()
    for i in ben:
        positives |= t.features[i]
    negatives: set[Condition] = set()
    bits = h
    while bits:
        low = bits & -bits
        for c in t.features[low.bit_length() - 1]:
            if cfg.negatable(c.kind):
                negatives.add(c.negate())
        bits ^= low
    universe = sorted(positives | negatives, key=Condition.sort_key)
    umasks = [t.condition_mask(c) for c in universe]

    best: PartitionBest | None = None

    def consider(conds, m):
        nonlocal best
        nb, nh = (m & b).bit_count(), (m & h).bit_count()
        net = nb - nh
        if net < floor:
            return
        rule = Rule(kind, conds, action)
        cand = PartitionBest(rule, net, nb, nh)
        if best is None or cand.key() < best.key():
            best = cand

    consider((), full)
    level = [((), full, -1, frozenset())]
    for _depth in range(cfg.max_conditions):
        need = best.net + 1 if best is not None else floor
        nxt = []
        for conds, m, last, heads in level:
            if (m & b).bit_count() < need:
                continue
            for j in range(last + 1, len(universe)):
                c = universe[j]
                if c.kind in HEAD_KINDS and c.position in heads:
                    continue
                m2 = m & umasks[j]
                if m2 == m or not (m & ~m2) & h:
                    continue
                if (m2 & b).bit_count() < need:
                    continue
                conds2 = conds + (c,)
                consider(conds2, m2)
                nxt.append((conds2, m2, j, heads | {c.position} if c.kind in HEAD_KINDS else heads))
        level = nxt
        if not level:
            break
    return best


def search_partition(
    index: FeatureIndex, mode: Mode, label: Label, offset: int, present: set, gold_present: set
) -> PartitionBest | None:
    """Best rule with action ``(mode, label, offset)`` whose net gain reaches
    the threshold, or None."""
    cfg = index.cfg
    action = Action(mode, label, offset)
    best = None
    for kind, t in index.tables(offset).items():
        if not t.sites:
            continue
        b, h = classify_sites(t, mode, present, gold_present)
        if b.bit_count() < cfg.gain_threshold:
            continue
        found = _search_table(t, kind, action, b, h, cfg, cfg.gain_threshold)
        if found is not None and (best is None or found.key() < best.key()):
            best = found
    return best


# --- candidate stream -----------------------------------------------------------


def error_sites(corpus: AnnotatedCorpus, state, gold, cfg: TrainingConfig) -> Iterator[tuple[Mode, Relation, int]]:
    """Missing gold triples (attach) and spurious triples (unattach) within reach."""
    for si, (cur, key) in enumerate(zip(state, gold)):
        for r in sorted(set(key) - set(cur), key=Relation.sort_key):
            if 1 <= abs(r.offset) <= cfg.max_distance:
                yield Mode.ATTACH, r, si
        for r in sorted(set(cur) - set(key), key=Relation.sort_key):
            if 1 <= abs(r.offset) <= cfg.max_distance:
                yield Mode.UNATTACH, r, si


def generate_candidates(
    corpus: AnnotatedCorpus, state, gold, cfg: TrainingConfig, lex: LexiconBundle
) -> Iterator[Rule]:
    """Every rule allowed by ``cfg`` that fires on at least one error site.

    Positive conditions come from what holds at the error site; negated ones
    from what holds at sites where the same action would do harm."""
    index = FeatureIndex(corpus, cfg, lex)
    seen: set[Rule] = set()
    by_partition: dict[tuple, list[tuple[int, int]]] = {}
    for mode, r, si in error_sites(corpus, state, gold, cfg):
        by_partition.setdefault((mode, r.label, r.offset), []).append((si, r.source))
    for (mode, label, offset), sites in sorted(by_partition.items(), key=lambda kv: Action(*kv[0]).sort_key()):
        present, gold_present = _presence(state, gold, label, offset)
        action = Action(mode, label, offset)
        tables = index.tables(offset)
        for si, a in sites:
            kind = corpus[si].sentence.groups[a].kind
            t = tables[kind]
            _, h = classify_sites(t, mode, present, gold_present)
            negatable = set()
            bits = h
            while bits:
                low = bits & -bits
                negatable |= {c for c in t.features[low.bit_length() - 1] if cfg.negatable(c.kind)}
                bits ^= low
            here = t.features[t.sites.index((si, a))]
            true_here = sorted(set(here) | {c.negate() for c in negatable - here}, key=Condition.sort_key)
            for k in range(cfg.max_conditions + 1):
                for conds in itertools.combinations(true_here, k):
                    rule = Rule(kind, conds, action)
                    if rule in seen or rule_violations(rule, cfg):
                        continue
                    seen.add(rule)
                    yield rule


def _presence(state, gold, label: Label, offset: int) -> tuple[set, set]:
    present = {(si, r.source) for si, rels in enumerate(state) for r in rels if r.label is label and r.offset == offset}
    gold_present = {(si, r.source) for si, rels in enumerate(gold) for r in rels if r.label is label and r.offset == offset}
    return present, gold_present


# --- training --------------------------------------------------------------------


@dataclass(frozen=True)
class Iteration:
    number: int
    score: CandidateScore
    matches: int
    spurious: int

    @property
    def rule(self) -> Rule:
        return self.score.rule

    def log_line(self) -> str:
        return f"iter={self.number} rule={self.rule} net={self.score.net} matches={self.matches} spurious={self.spurious}"


@dataclass
class TrainingRun:
    sequence: RuleSequence
    state: list[frozenset[Relation]]
    history: list[Iteration]
    initial_matches: int = 0
    initial_spurious: int = 0


def counts(state, gold) -> tuple[int, int]:
    m = s = 0
    for cur, key in zip(state, gold):
        m += len(cur & key)
        s += len(cur - key)
    return m, s


_worker: dict = {}


def _init_worker(corpus, cfg, lex):
    _worker["index"] = FeatureIndex(corpus, cfg, lex)


def _worker_search(task):
    mode, label, offset, present, gold_present = task
    return search_partition(_worker["index"], mode, label, offset, present, gold_present)


def run_training(
    corpus: AnnotatedCorpus,
    cfg: TrainingConfig | None = None,
    lex: LexiconBundle | None = None,
    *,
    from_initial: bool = False,
    jobs: int = 1,
    on_iteration=None,
) -> TrainingRun:
    """Learn a rule sequence; starts from an empty labeling unless
    ``from_initial`` is set."""
    cfg = cfg or TrainingConfig()
    lex = lex or LexiconBundle()
    gold = [frozenset(item.gold) for item in corpus]
    state = [frozenset(item.initial) if from_initial else frozenset() for item in corpus]
    m0, s0 = counts(state, gold)

    partitions = [(mode, label, off) for mode in Mode for label in Label for off in cfg.offsets()]
    gold_presence: dict[tuple[Label, int], set] = {}
    for si, key in enumerate(gold):
        for r in key:
            gold_presence.setdefault((r.label, r.offset), set()).add((si, r.source))

    index = FeatureIndex(corpus, cfg, lex)
    pool = ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(corpus, cfg, lex)) if jobs > 1 else None
    cache: dict[tuple, PartitionBest | None] = {}
    history: list[Iteration] = []
    try:
        while cfg.max_rules is None or len(history) < cfg.max_rules:
            presence: dict[tuple[Label, int], set] = {}
            for si, cur in enumerate(state):
                for r in cur:
                    presence.setdefault((r.label, r.offset), set()).add((si, r.source))
            tasks = []
            for p in partitions:
                if p in cache:
                    continue
                mode, label, off = p
                present = presence.get((label, off), set())
                gp = gold_presence.get((label, off), set())
                # cheap upper bound on the partition's beneficial sites
                upper = len(gp - present) if mode is Mode.ATTACH else len(present - gp)
                if upper < cfg.gain_threshold:
                    cache[p] = None
                    continue
                tasks.append((mode, label, off, present, gp))
            if pool is not None and len(tasks) > 1:
                results = list(pool.map(_worker_search, tasks))
            else:
                results = [search_partition(index, *t) for t in tasks]
            for t, res in zip(tasks, results):
                cache[t[:3]] = res
            found = [b for b in cache.values() if b is not None]
            if not found:
                break
            best = min(found, key=PartitionBest.key)
            if best.net < cfg.gain_threshold:
                break
            rule = best.rule
            score = net_gain(rule, corpus, state, gold, lex)
            if score.net != best.net:
                raise RuntimeError(f"index and direct scoring disagree on {rule}: {best.net} != {score.net}")
            state = [apply_rule(rule, item.sentence, cur, lex) for item, cur in zip(corpus, state)]
            m, s = counts(state, gold)
            it = Iteration(len(history) + 1, score, m, s)
            history.append(it)
            log.info("%s", it.log_line())
            if on_iteration is not None:
                on_iteration(it)
            act = rule.action
            for mode in Mode:
                cache.pop((mode, act.label, act.offset), None)
    finally:
        if pool is not None:
            pool.shutdown()

    seq = RuleSequence(
        tuple(it.rule for it in history),
        tuple(it.score.net for it in history),
        {"version": 1, "config": cfg.to_dict(), "start": "initial" if from_initial else "empty"},
    )
    return TrainingRun(seq, state, history, m0, s0)


def train(corpus: AnnotatedCorpus, cfg: TrainingConfig | None = None, lex: LexiconBundle | None = None, jobs: int = 1) -> RuleSequence:
    return run_training(corpus, cfg, lex, jobs=jobs).sequence


def train_from_initial(
    corpus: AnnotatedCorpus, cfg: TrainingConfig | None = None, lex: LexiconBundle | None = None, jobs: int = 1
) -> RuleSequence:
    return run_training(corpus, cfg, lex, from_initial=True, jobs=jobs).sequence
