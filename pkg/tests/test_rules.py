import io
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import corpora
from relseq.corpus import AnnotatedCorpus, AnnotatedSentence, GroupKind, Label, Relation, rels
from relseq.fixtures import response_sentences, copular, sample_rule
from relseq.rules import (
    CK,
    Action,
    Condition,
    Mode,
    Rule,
    RuleFileError,
    RuleSequence,
    apply_rule,
    apply_sequence,
    eval_condition,
    match_sites,
    parse_rules,
    rule_matches,
    serialize_rules,
)
from relseq.synthetic import RANDOM_LABELS, random_corpus, toy_lexicon

LEX = toy_lexicon()


def test_head_word_on_anchor():
    s, _ = copular()
    assert eval_condition(Condition(CK.HEAD_WORD, 0, "cat"), 0, s, LEX)


def test_head_word_matches_stems():
    s, _ = copular()
    assert eval_condition(Condition(CK.HEAD_WORD, 1, "be"), 0, s, LEX)
    assert eval_condition(Condition(CK.HEAD_WORD, 1, "was"), 0, s, LEX)


def test_out_of_range_position_is_false_and_negation_true():
    s, _ = copular()
    c = Condition(CK.GROUP_TYPE, -1, "in")
    assert not eval_condition(c, 0, s, LEX)
    assert eval_condition(c.negate(), 0, s, LEX)


def test_between_punct_cc_on_cars_and_trucks():
    s = response_sentences()[0][0]
    assert [s.head(g).text for g in s.groups[4:6]] == ["cars", "trucks"]
    c = Condition(CK.BETWEEN_PUNCT_CC, 0, second_position=1)
    assert eval_condition(c, 4, s, LEX)
    assert not eval_condition(c, 3, s, LEX)


def test_between_scans_only_the_gap():
    s = response_sentences()[0][0]
    assert eval_condition(Condition(CK.BETWEEN_LEXEME, -1, "and", second_position=0), 5, s, LEX)
    assert not eval_condition(Condition(CK.BETWEEN_LEXEME, -1, "cars", second_position=0), 5, s, LEX)
    # "contains" sees the group itself
    assert eval_condition(Condition(CK.CONTAINS_LEXEME, -1, "cars"), 5, s, LEX)


def test_between_positions_are_normalized():
    assert Condition(CK.BETWEEN_POS, 1, "CC", second_position=-1) == Condition(CK.BETWEEN_POS, -1, "CC", second_position=1)
    with pytest.raises(ValueError):
        Condition(CK.BETWEEN_POS, 1, "CC", second_position=1)
    with pytest.raises(ValueError):
        Condition(CK.HEAD_POS, 1, "NN", second_position=2)


def test_pp_attachment_and_other_group_tests():
    s = response_sentences()[0][0]
    assert eval_condition(Condition(CK.PP_ATTACHMENT, 0), 2, s, LEX)
    assert not eval_condition(Condition(CK.PP_ATTACHMENT, 0), 1, s, LEX)
    assert eval_condition(Condition(CK.SENTENCE_END, 0, "first"), 0, s, LEX)
    assert eval_condition(Condition(CK.SENTENCE_END, 0, "last"), 5, s, LEX)
    assert eval_condition(Condition(CK.HEAD_POS, 0, "NNS"), 4, s, LEX)
    passive = response_sentences()[3][0]
    assert eval_condition(Condition(CK.VERB_PROPERTY, 1, "passive"), 0, passive, LEX)
    assert eval_condition(Condition(CK.HEAD_NE, 0, "person"), 2, passive, LEX)
    assert eval_condition(Condition(CK.HEAD_SUBCAT, 0, "np"), 1, copular(verb="saw")[0], LEX)
    assert eval_condition(Condition(CK.HEAD_SEMCLASS, 0, "animal"), 0, copular()[0], LEX)
    that = response_sentences()[1][0]
    assert eval_condition(Condition(CK.HEAD_WORDLIST, 0, "relative-pronouns"), 0, that, LEX)
    assert not eval_condition(Condition(CK.HEAD_WORDLIST, 0, "partitive-quantities"), 0, that, LEX)


def test_sample_rule_matches_copular_subject():
    s, _ = copular()
    r = sample_rule()
    assert rule_matches(r, 0, s, LEX)
    assert not rule_matches(r, 2, s, LEX)  # [very happy] is not a noun group


def test_target_must_exist():
    s, _ = copular()
    r = Rule("noun", (), Action("attach", "subj", 2))
    assert not rule_matches(r, 1, s, LEX)
    r_verb = Rule("verb", (), Action("attach", "obj", 2))
    assert not rule_matches(r_verb, 1, s, LEX)  # second-to-last group, +2 falls off


def test_sample_rule_application():
    s, gold = copular()
    assert apply_rule(sample_rule(), s, frozenset(), LEX) == gold


def test_attach_present_and_unattach_absent_are_noops():
    s, gold = copular()
    assert apply_rule(sample_rule(), s, gold, LEX) == gold
    unattach = Rule("noun", (), Action("unattach", "obj", 1))
    assert apply_rule(unattach, s, gold, LEX) == gold


def test_empty_sequence_is_identity():
    s, gold = copular()
    corpus = AnnotatedCorpus((AnnotatedSentence(s, gold, rels(("mod", 2, 1))),))
    assert apply_sequence(RuleSequence(), corpus, LEX) == [rels(("mod", 2, 1))]


def test_attach_then_unattach_is_identity():
    s, gold = copular()
    corpus = AnnotatedCorpus((AnnotatedSentence(s, gold, rels(("obj", 2, 1))),))
    a = Rule("noun", (), Action("attach", "mod", 1))
    u = Rule("noun", (), Action("unattach", "mod", 1))
    assert apply_sequence([a, u], corpus, LEX) == [rels(("obj", 2, 1))]


def test_rule_canonical_form():
    r = sample_rule()
    assert str(r) == "noun: !group-type@-1=in !head-word@0=there head-word@+1=be -> attach subj +2"
    assert Rule("noun", tuple(reversed(r.conditions)), r.action) == r
    with pytest.raises(ValueError):
        Action("attach", "subj", 0)


# --- properties -------------------------------------------------------------

POSITIONS = st.integers(-2, 2)
SIMPLE_CONDS = st.builds(
    Condition,
    st.sampled_from([CK.GROUP_TYPE, CK.HEAD_POS, CK.HEAD_WORD, CK.CONTAINS_POS, CK.SENTENCE_END]),
    POSITIONS,
    st.sampled_from(["noun", "verb", "in", "NN", "VBD", "DT", "the", "cat", "be", "first", "last"]),
    st.booleans(),
)
RULES = st.builds(
    Rule,
    st.sampled_from(list(GroupKind)),
    st.lists(SIMPLE_CONDS, max_size=3).map(tuple),
    st.builds(Action, st.sampled_from(list(Mode)), st.sampled_from(RANDOM_LABELS), st.sampled_from([-3, -2, -1, 1, 2, 3])),
)


@given(corpora(with_initial=True), RULES)
def test_locality(corpus, rule):
    act = rule.action
    for item in corpus:
        out = apply_rule(rule, item.sentence, item.initial, LEX)
        for r in out ^ item.initial:
            assert (r.label, r.offset) == (act.label, act.offset)
            assert (r in out) == (act.mode is Mode.ATTACH)


@given(corpora(with_initial=True), RULES)
def test_simultaneity(corpus, rule):
    for item in corpus:
        n = len(item.sentence.groups)
        forward = [a for a in range(n) if rule_matches(rule, a, item.sentence, LEX)]
        backward = [a for a in reversed(range(n)) if rule_matches(rule, a, item.sentence, LEX)]
        assert forward == sorted(backward) == match_sites(rule, item.sentence, LEX)


@given(corpora(with_initial=True), st.lists(RULES, max_size=4))
def test_sentence_independence(corpus, rules):
    whole = apply_sequence(rules, corpus, LEX)
    one_by_one = [apply_sequence(rules, AnnotatedCorpus((item,)), LEX)[0] for item in corpus]
    assert whole == one_by_one


@given(corpora(with_initial=True), RULES)
def test_application_is_idempotent(corpus, rule):
    for item in corpus:
        once = apply_rule(rule, item.sentence, item.initial, LEX)
        assert apply_rule(rule, item.sentence, once, LEX) == once


@given(st.lists(RULES, max_size=6), st.lists(st.none() | st.integers(1, 99), max_size=6))
def test_rule_file_round_trip(rules, gains):
    gains = (gains + [None] * len(rules))[: len(rules)]
    seq = RuleSequence(tuple(rules), tuple(gains), {"version": 1, "note": "x"})
    again = parse_rules(serialize_rules(seq))
    assert again == seq
    assert serialize_rules(again) == serialize_rules(seq)


def test_rule_file_with_between_condition_round_trips():
    r = Rule("noun", (Condition(CK.BETWEEN_PUNCT_CC, -1, second_position=0),), Action("attach", "obj", -2))
    seq = RuleSequence((r,))
    assert parse_rules(io.StringIO(serialize_rules(seq))) == seq


def test_rule_file_version_mismatch():
    with pytest.raises(RuleFileError, match="header"):
        parse_rules("relseq-rules v2\n")
    with pytest.raises(RuleFileError):
        parse_rules("")


def test_rule_file_rejects_unknown_fields():
    text = serialize_rules(RuleSequence((sample_rule(),)))
    bad = text.replace('"anchor"', '"priority":1,"anchor"')
    with pytest.raises(RuleFileError, match="unknown rule field"):
        parse_rules(bad)


def test_random_sequence_is_deterministic():
    rng = random.Random(3)
    corpus = random_corpus(rng, with_initial=True)
    rules = [sample_rule(), Rule("verb", (), Action("attach", Label.MOD, -1))]
    assert apply_sequence(rules, corpus, LEX) == apply_sequence(rules, corpus, LEX)
    assert all(isinstance(x, frozenset) and all(isinstance(r, Relation) for r in x) for x in apply_sequence(rules, corpus, LEX))
