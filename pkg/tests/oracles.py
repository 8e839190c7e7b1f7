"""Brute-force reference implementations the fast paths are checked against."""

from __future__ import annotations

import itertools
import random

from hypothesis import strategies as st

from relseq.config import TrainingConfig, rule_violations
from relseq.corpus import GroupKind, Label
from relseq.learner import counts
from relseq.synthetic import random_corpus
from relseq.rules import ARGLESS_KINDS, BETWEEN_KINDS, CK, Action, Condition, Mode, Rule, apply_rule, position_window, selection_key


def rescore(rule, corpus, state, gold, lex) -> int:
    """Net gain as (matches after - before) - (spurious after - before)."""
    after = [apply_rule(rule, item.sentence, cur, lex) for item, cur in zip(corpus, state)]
    m0, s0 = counts(state, gold)
    m1, s1 = counts(after, gold)
    return (m1 - m0) - (s1 - s0)


def observed_arguments(corpus, lex) -> dict[CK, set[str]]:
    """Every argument value any condition kind could take on this corpus."""
    out: dict[CK, set[str]] = {k: set() for k in CK}
    out[CK.SENTENCE_END] = {"first", "last"}
    for k in ARGLESS_KINDS:
        out[k] = {""}
    for item in corpus:
        s = item.sentence
        for x in s.lexemes:
            out[CK.CONTAINS_LEXEME].add(x.text.lower())
            out[CK.BETWEEN_LEXEME].add(x.text.lower())
            out[CK.CONTAINS_POS].add(x.pos)
            out[CK.BETWEEN_POS].add(x.pos)
        for g in s.groups:
            head = s.head(g)
            out[CK.GROUP_TYPE].add(g.kind.value)
            out[CK.VERB_PROPERTY] |= {v.value for v in g.vprops}
            out[CK.HEAD_WORD] |= set(lex.forms_of(head.text))
            out[CK.HEAD_POS].add(head.pos)
            if g.ne:
                out[CK.HEAD_NE].add(g.ne)
            out[CK.HEAD_SUBCAT] |= set(lex.subcats_of(head.text))
            out[CK.HEAD_SEMCLASS] |= set(lex.classes_of(head.text, g.kind))
            out[CK.HEAD_WORDLIST] |= set(lex.lists_containing(head.text))
    return out


def condition_universe(corpus, cfg: TrainingConfig, lex, offset: int) -> list[Condition]:
    lo, hi = position_window(offset)
    args = observed_arguments(corpus, lex)
    out = []
    for kind in sorted(cfg.condition_kinds, key=lambda k: list(CK).index(k)):
        if kind in BETWEEN_KINDS:
            spots = [(p, q) for p in range(lo, hi + 1) for q in range(p + 1, hi + 1)]
        else:
            spots = [(p, None) for p in range(lo, hi + 1)]
        for (p, q), arg in itertools.product(spots, sorted(args[kind])):
            for neg in (False, True):
                out.append(Condition(kind, p, arg, neg, q))
    return out


def exhaustive_rules(corpus, cfg: TrainingConfig, lex):
    """Every valid rule built from conditions over observed arguments."""
    for offset in cfg.offsets():
        universe = condition_universe(corpus, cfg, lex, offset)
        for kind in GroupKind:
            for mode in Mode:
                for label in Label:
                    action = Action(mode, label, offset)
                    for k in range(cfg.max_conditions + 1):
                        for conds in itertools.combinations(universe, k):
                            rule = Rule(kind, conds, action)
                            if len(rule.conditions) == k and not rule_violations(rule, cfg):
                                yield rule


def exhaustive_best(corpus, cfg: TrainingConfig, lex, labels=None):
    """Best rule and its net by full enumeration and brute-force rescoring."""
    state = [frozenset(item.initial) for item in corpus]
    gold = [frozenset(item.gold) for item in corpus]
    best = None
    for rule in exhaustive_rules(corpus, cfg, lex):
        if labels is not None and rule.action.label not in labels:
            continue
        net = rescore(rule, corpus, state, gold, lex)
        if net <= 0:
            continue
        key = selection_key(rule, net)
        if best is None or key < best[0]:
            best = (key, rule, net)
    return (best[1], best[2]) if best else (None, 0)


def corpora(**kw):
    """Random small corpora, driven by a hypothesis-chosen seed."""
    return st.integers(0, 2**32 - 1).map(lambda seed: random_corpus(random.Random(seed), **kw))
