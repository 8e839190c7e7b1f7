"""Hand-built sentences used throughout the tests and demo scripts."""

from __future__ import annotations

from .corpus import AnnotatedCorpus, AnnotatedSentence, SentenceBuilder, rels
from .rules import CK, Action, Condition, Rule


def saw_the_cat():
    """[I] [saw] [the cat] [that] [ran] with its four gold arcs."""
    b = SentenceBuilder()
    b.group("noun", ("I", "PRP"))
    b.group("verb", ("saw", "VBD"))
    b.group("noun", ("the", "DT"), ("cat", "NN"))
    b.group("in", ("that", "WDT"), attach=2)
    b.group("verb", ("ran", "VBD"))
    b.token(".", ".")
    return b.sentence(), rels(("subj", 0, 1), ("obj", 2, 1), ("subj", 2, 4), ("mod", 4, 2))


def fred_promised():
    b = SentenceBuilder()
    b.group("noun", ("Fred", "NNP"), ne="person")
    b.group("verb", ("promised", "VBD"))
    b.group("verb", ("to", "TO"), ("help", "VB"), vprops=["infinitival"])
    b.group("noun", ("John", "NNP"), ne="person")
    return b.sentence(), rels(("subj", 0, 1), ("subj", 0, 2), ("obj", 2, 1), ("obj", 3, 2))


def copular(noun: str = "cat", adj: str = "happy", verb: str = "was"):
    """[The <noun>] [<verb>] [very <adj>], gold SUBJ from the noun to the adjective."""
    b = SentenceBuilder()
    b.group("noun", ("The", "DT"), (noun, "NN"))
    b.group("verb", (verb, "VBD"))
    b.group("adjective", ("very", "RB"), (adj, "JJ"))
    b.token(".", ".")
    return b.sentence(), rels(("subj", 0, 2))


# subject group tokens, ne tag, complement group (kind, tokens)
_COPULAR_VARIANTS = [
    ((("The", "DT"), ("cat", "NN")), None, ("adjective", (("very", "RB"), ("happy", "JJ")))),
    ((("A", "DT"), ("dog", "NN")), None, ("noun", (("a", "DT"), ("pet", "NN")))),
    ((("Fred", "NNP"),), "person", ("adjective", (("very", "RB"), ("tired", "JJ")))),
    ((("She", "PRP"),), None, ("noun", (("a", "DT"), ("farmer", "NN")))),
    ((("This", "DT"), ("girl", "NN")), None, ("adjective", (("quiet", "JJ"),))),
    ((("My", "PRP$"), ("boy", "NN")), None, ("noun", (("the", "DT"), ("winner", "NN")))),
]


def copular_variant(i: int):
    """The i-th of six copular sentences that share only the copula."""
    subj, ne, (kind, comp) = _COPULAR_VARIANTS[i % len(_COPULAR_VARIANTS)]
    b = SentenceBuilder()
    b.group("noun", *subj, ne=ne)
    b.group("verb", ("was", "VBD"))
    b.group(kind, *comp)
    b.token(".", ".")
    return b.sentence(), rels(("subj", 0, 2))


def existential(noun: str = "cat"):
    """[There] [was] [a <noun>]; no SUBJ from [There]."""
    b = SentenceBuilder()
    b.group("noun", ("There", "EX"))
    b.group("verb", ("was", "VBD"))
    b.group("noun", ("a", "DT"), (noun, "NN"))
    b.token(".", ".")
    return b.sentence(), frozenset()


def left_in(noun: str = "tree"):
    """[Near] [the house] [was] [a <noun>]: the noun after a preposition is not a subject."""
    b = SentenceBuilder()
    b.group("in", ("Near", "IN"), attach=2)
    b.group("noun", ("the", "DT"), ("house", "NN"))
    b.group("verb", ("was", "VBD"))
    b.group("noun", ("a", "DT"), (noun, "NN"))
    b.token(".", ".")
    return b.sentence(), rels(("obj", 1, 0), ("subj", 3, 2))


def corpus_of(*pairs) -> AnnotatedCorpus:
    return AnnotatedCorpus(tuple(AnnotatedSentence(s, g) for s, g in pairs))


DISTRACTOR_NOUNS = ["tree", "rock", "box", "cup", "hat", "pen"]


def copular_corpus(copies: int = 6, distractors: int = 0, left_in_distractors: int = 0) -> AnnotatedCorpus:
    """``copies`` copular sentences, plus existential-"there" distractors and,
    optionally, sentences whose candidate subject follows an IN group. All
    distractors carry no gold arcs."""
    pairs = [copular_variant(i) for i in range(copies)]
    pairs += [existential(DISTRACTOR_NOUNS[i % 6]) for i in range(distractors)]
    for i in range(left_in_distractors):
        s, _ = left_in(DISTRACTOR_NOUNS[i % 6])
        pairs.append((s, frozenset()))
    return corpus_of(*pairs)


def sample_rule() -> Rule:
    """Noun group whose right neighbour is headed by "be", whose left
    neighbour is not an IN group and which is not "there": SUBJ two groups
    to the right."""
    return Rule(
        "noun",
        (
            Condition(CK.HEAD_WORD, 1, "be"),
            Condition(CK.GROUP_TYPE, -1, "in", negated=True),
            Condition(CK.HEAD_WORD, 0, "there", negated=True),
        ),
        Action("attach", "subj", 2),
    )


def sample_rule_corpus() -> AnnotatedCorpus:
    """One copular sentence, one existential, one with a left IN group."""
    s3, _ = left_in()
    return corpus_of(copular(), (existential()[0], frozenset(rels(("empty", 0, 2)))), (s3, rels(("obj", 1, 0), ("subj", 3, 2))))


# --- example responses to four test sentences ----------------------------------


def response_sentences():
    out = []
    b = SentenceBuilder()
    b.group("noun", ("The", "DT"), ("ship", "NN"))
    b.group("verb", ("was", "VBD"), ("carrying", "VBG"))
    b.group("noun", ("oil", "NN"))
    b.group("in", ("for", "IN"), attach=2)
    b.group("noun", ("cars", "NNS"))
    b.token("and", "CC")
    b.group("noun", ("trucks", "NNS"))
    b.token(".", ".")
    out.append((b.sentence(), rels(("subj", 0, 1), ("obj", 2, 1), ("mod", 3, 2), ("obj", 4, 3), ("obj", 5, 3))))

    b = SentenceBuilder()
    b.group("noun", ("That", "DT"))
    b.group("verb", ("means", "VBZ"))
    b.group("noun", ("the", "DT"), ("same", "JJ"), ("word", "NN"))
    b.group("verb", ("might", "MD"), ("have", "VB"))
    b.group("noun", ("two", "CD"), ("or", "CC"), ("three", "CD"), ("spellings", "NNS"))
    b.token(".", ".")
    out.append((b.sentence(), rels(("subj", 0, 1), ("obj", 3, 1), ("subj", 2, 3), ("obj", 4, 3))))

    b = SentenceBuilder()
    b.group("noun", ("He", "PRP"))
    b.group("verb", ("loves", "VBZ"))
    b.group("verb", ("to", "TO"), ("work", "VB"), vprops=["infinitival"])
    b.group("in", ("with", "IN"), attach=2)
    b.group("noun", ("words", "NNS"))
    b.token(".", ".")
    out.append((b.sentence(), rels(("subj", 0, 1), ("obj", 2, 1), ("subj", 0, 2), ("pp-obj", 3, 2), ("obj", 4, 3))))

    b = SentenceBuilder()
    b.group("noun", ("A", "DT"), ("man", "NN"))
    b.group("verb", ("named", "VBN"), vprops=["passive"])
    b.group("noun", ("Noah", "NNP"), ne="person")
    b.group("verb", ("wrote", "VBD"))
    b.group("noun", ("this", "DT"), ("book", "NN"))
    b.token(".", ".")
    out.append(
        (
            b.sentence(),
            rels(("subj", 0, 3), ("obj", 0, 1), ("obj", 2, 1), ("mod", 1, 0), ("mod-ident", 2, 0), ("obj", 4, 3)),
        )
    )
    return out


def response_corpus() -> AnnotatedCorpus:
    return corpus_of(*response_sentences())


def _r(anchor, conds, mode, label, offset) -> Rule:
    return Rule(anchor, tuple(Condition(*c) if isinstance(c, tuple) else c for c in conds), Action(mode, label, offset))


def response_rules() -> list[Rule]:
    """Hand-written rules whose output on ``response_corpus`` is the example
    response: every key arc except one PP-OBJ, plus one extra SUBJ."""
    neg = lambda kind, pos, arg: Condition(kind, pos, arg, negated=True)  # noqa: E731
    return [
        _r("noun", [(CK.GROUP_TYPE, 1, "verb"), neg(CK.VERB_PROPERTY, 1, "passive")], "attach", "subj", 1),
        _r("noun", [(CK.GROUP_TYPE, -1, "verb"), neg(CK.GROUP_TYPE, 1, "verb")], "attach", "obj", -1),
        _r("noun", [(CK.VERB_PROPERTY, -1, "passive")], "attach", "obj", -1),
        _r("noun", [(CK.VERB_PROPERTY, 1, "passive")], "attach", "obj", 1),
        _r("verb", [(CK.VERB_PROPERTY, 0, "passive")], "attach", "mod", -1),
        _r("noun", [(CK.HEAD_NE, 0, "person"), (CK.VERB_PROPERTY, -1, "passive")], "attach", "mod-ident", -2),
        _r("noun", [(CK.VERB_PROPERTY, 1, "passive")], "attach", "subj", 3),
        _r("verb", [(CK.HEAD_WORD, -2, "means")], "attach", "obj", -2),
        _r("verb", [(CK.VERB_PROPERTY, 0, "infinitival")], "attach", "obj", -1),
        _r("noun", [(CK.VERB_PROPERTY, 2, "infinitival")], "attach", "subj", 2),
        _r("noun", [(CK.GROUP_TYPE, -1, "in")], "attach", "obj", -1),
        _r("noun", [(CK.GROUP_TYPE, -2, "in"), Condition(CK.BETWEEN_PUNCT_CC, -1, second_position=0)], "attach", "obj", -2),
        _r("in", [(CK.GROUP_TYPE, -1, "noun")], "attach", "mod", -1),
    ]
