import random
import re
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import corpora
from relseq.corpus import Label, Relation, SentenceBuilder, rels
from relseq.evaluate import (
    COMBINED_MERGE,
    MOD_MERGE,
    Score,
    ShapeMismatch,
    combined_eval,
    emit_propositions,
    format_report,
    fscore,
    merged_modifier_eval,
    score,
)
from relseq.fixtures import response_corpus, response_rules, copular, fred_promised, saw_the_cat
from relseq.rules import apply_sequence
from relseq.synthetic import random_relations, toy_lexicon

DATA = Path(__file__).parent / "data"
unit = st.floats(0, 1, allow_nan=False)


def test_fscore_examples():
    assert fscore(0.773, 0.636) == pytest.approx(0.6978, abs=5e-5)
    assert fscore(0.705, 0.546) == pytest.approx(0.6154, abs=5e-5)
    assert fscore(0, 0) == 0
    assert fscore(1, 1) == 1


@given(unit, unit)
def test_fscore_symmetric_and_bounded(p, r):
    assert fscore(p, r) == pytest.approx(fscore(r, p))
    assert fscore(p, r) <= max(p, r) + 1e-12
    assert fscore(p, r) >= 0


@given(unit)
def test_fscore_equal_arguments(x):
    assert fscore(x, x) == pytest.approx(x)


def test_perfect_response():
    gold = response_corpus().gold
    o = score(gold, gold).overall
    assert o.recall == o.precision == o.fscore == 1.0


def test_empty_response():
    gold = response_corpus().gold
    o = score([frozenset()] * len(gold), gold).overall
    assert (o.recall, o.precision, o.fscore) == (0, 0, 0)


def test_shape_mismatch_names_sentence():
    with pytest.raises(ShapeMismatch, match="sentence:"):
        score([frozenset()], [frozenset(), frozenset()])


def test_mistyped_modifier_double_penalty():
    gold = [rels(("mod-time", 2, 1))]
    wrong = [rels(("mod", 2, 1))]
    plain = score(wrong, gold).overall
    assert (plain.matches, plain.missed, plain.spurious) == (0, 1, 1)
    deleted = score([frozenset()], gold).overall
    assert (deleted.missed, deleted.spurious) == (1, 0)
    merged = merged_modifier_eval(wrong, gold)
    assert (merged.matches, merged.missed, merged.spurious) == (1, 0, 0)


def test_merge_on_identical_labels_is_neutral():
    gold = [rels(("subj", 0, 1), ("obj", 2, 1))]
    pred = [rels(("subj", 0, 1), ("obj", 3, 1))]
    assert merged_modifier_eval(pred, gold) == score(pred, gold).overall


def test_combined_merge_folds_pp_labels():
    gold = [rels(("pp-obj", 3, 2), ("loc-obj", 1, 0))]
    pred = [rels(("mod", 3, 2), ("mod-loc", 1, 0))]
    assert combined_eval(pred, gold).matches == 2
    assert merged_modifier_eval(pred, gold).matches == 0
    assert set(MOD_MERGE) < set(COMBINED_MERGE)


def test_merge_keeps_totals():
    # two distinct triples that merge to one still count twice
    gold = [rels(("mod", 2, 1), ("mod-time", 2, 1))]
    pred = [rels(("mod-loc", 2, 1))]
    s = merged_modifier_eval(pred, gold)
    assert (s.matches, s.key_total, s.response_total) == (1, 2, 1)


@given(corpora(max_sentences=5, max_groups=6), st.integers(0, 2**32 - 1))
def test_merging_never_lowers_recall_or_precision(corpus, seed):
    rng = random.Random(seed)
    labels = list(Label)
    pred = [random_relations(rng, len(item.sentence.groups), rng.randint(0, 6), labels) for item in corpus]
    gold = [random_relations(rng, len(item.sentence.groups), rng.randint(0, 6), labels) for item in corpus]
    plain = score(pred, gold).overall
    for merge in (MOD_MERGE, COMBINED_MERGE):
        merged = score(pred, gold, merge).overall
        assert merged.matches >= plain.matches
        assert merged.recall >= plain.recall
        assert merged.precision >= plain.precision


@given(corpora(with_initial=True), st.randoms())
def test_score_ignores_sentence_order(corpus, rng):
    pairs = list(zip(corpus.initial, corpus.gold))
    rng.shuffle(pairs)
    pred, gold = zip(*pairs)
    assert score(pred, gold).overall == score(corpus.initial, corpus.gold).overall


def test_score_addition():
    assert Score(1, 2, 3) + Score(4, 5, 6) == Score(5, 7, 9)


def test_distance_table_is_cumulative():
    gold = [rels(("subj", 0, 1), ("obj", 0, 2), ("mod", 4, 1), ("mod", 0, 5))]
    rep = score([frozenset()], gold)
    assert rep.distances == {"<=1": 1, "<=2": 2, "<=3": 3, ">3": 1}
    assert rep.distance_percent("<=3") == 75.0


def test_report_golden():
    corpus = response_corpus()
    pred = apply_sequence(response_rules(), corpus, toy_lexicon())
    text = format_report(score(pred, corpus.gold))
    assert text == (DATA / "response_report.txt").read_text(encoding="utf-8")
    assert re.match(r"R=\d+\.\d\d% P=\d+\.\d\d% F=\d+\.\d\d\n", text)


# --- propositions ------------------------------------------------------------


def canonical(props: list[str]) -> list[str]:
    """Rename variables in order of first appearance."""
    names: dict[str, str] = {}

    def rename(m):
        v = m.group(0)
        names.setdefault(v, f"{v[0]}{len(names) + 1}")
        return names[v]

    return sorted(re.sub(r"\b[xe]\d+\b", rename, p) for p in props)


def test_saw_the_cat_propositions():
    s, gold = saw_the_cat()
    got = emit_propositions(s, gold, toy_lexicon())
    expected = ["saw(x1 x2)", "I(x1)", "cat(x2)", "ran(x2)=e3", "mod(e3 x2)"]
    assert sorted(got.strings()) == sorted(expected)
    assert got.unmapped == []


def test_no_relations_only_unary_predicates():
    s, _ = copular()
    got = emit_propositions(s, frozenset())
    assert got.strings() == ["cat(x1)", "was(_)"]


def test_shared_subject_fills_both_first_arguments():
    s, gold = fred_promised()
    got = emit_propositions(s, gold).strings()
    assert "promised(x1 e3)" in got
    assert "help(x1 x2)=e3" in got


def test_other_labels_are_unmapped():
    s, gold = saw_the_cat()
    extra = gold | rels(("mod-poss", 0, 2))
    got = emit_propositions(s, extra)
    assert got.unmapped == [Relation(Label.MOD_POSS, 0, 2)]


def test_act_noun_gets_event_variable():
    b = SentenceBuilder()
    b.group("noun", ("the", "DT"), ("attack", "NN"))
    b.group("in", ("on", "IN"), attach=0)
    b.group("noun", ("the", "DT"), ("ship", "NN"))
    s = b.sentence()
    got = emit_propositions(s, rels(("obj", 2, 0), ("mod", 0, 2)), toy_lexicon()).strings()
    assert "attack(_ x2)=e3" in got
    assert "mod(x1 x2)" in got
