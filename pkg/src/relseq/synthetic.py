"""Synthetic corpora: a small template grammar with gold relations, and
fully random corpora for property tests."""

from __future__ import annotations

import random

from .corpus import AnnotatedCorpus, AnnotatedSentence, GroupKind, Label, Relation, SentenceBuilder, rels
from .lexicon import LexiconBundle

NOUNS = ["cat", "dog", "boy", "girl", "teacher", "ship", "book", "tree", "bird", "farmer"]
NAMES = ["Fred", "Mary", "Noah", "Pat"]
PLACES = ["park", "house", "school", "farm"]
TIMES = ["midnight", "noon", "dawn"]
TRANSITIVE = [("saw", "see"), ("chased", "chase"), ("found", "find"), ("liked", "like"), ("carried", "carry")]
INTRANSITIVE = [("ran", "run"), ("slept", "sleep"), ("smiled", "smile")]
PARTICIPLES = [("seen", "see"), ("chased", "chase"), ("found", "find")]
ADJECTIVES = ["happy", "tired", "quiet", "hungry"]
DETS = ["the", "a", "this"]


def toy_lexicon() -> LexiconBundle:
    stems = {"was": {"be"}, "is": {"be"}, "are": {"be"}, "were": {"be"}}
    for surface, stem in TRANSITIVE + INTRANSITIVE + PARTICIPLES:
        stems.setdefault(surface, set()).add(stem)
    stems["cats"] = {"cat"}
    noun_classes = {n: {"animal"} for n in ("cat", "dog", "bird")}
    noun_classes.update({n: {"person"} for n in ("boy", "girl", "teacher", "farmer")})
    noun_classes.update({p: {"location"} for p in PLACES})
    noun_classes.update({t: {"time"} for t in TIMES})
    noun_classes["attack"] = {"act"}
    verb_classes = {"see": {"perception"}, "chase": {"motion"}, "run": {"motion", "change"}, "find": {"possession"}}
    subcat = {v: {"np"} for _, v in TRANSITIVE}
    subcat.update({v: {"intrans"} for _, v in INTRANSITIVE})
    subcat["be"] = {"copula"}
    return LexiconBundle(
        stems={k: frozenset(v) for k, v in stems.items()},
        subcat={k: frozenset(v) for k, v in subcat.items()},
        noun_classes={k: frozenset(v) for k, v in noun_classes.items()},
        verb_classes={k: frozenset(v) for k, v in verb_classes.items()},
        wordlists={
            "relative-pronouns": frozenset({"that", "which", "who"}),
            "partitive-quantities": frozenset({"some", "many", "hundreds", "five"}),
        },
    )


def _np(b: SentenceBuilder, rng: random.Random, nouns=NOUNS):
    if nouns is NAMES:
        return b.group("noun", (rng.choice(NAMES), "NNP"), ne="person")
    det = rng.choice(DETS)
    return b.group("noun", (det.capitalize() if not b.lexemes else det, "DT"), (rng.choice(nouns), "NN"))


def _template(rng: random.Random, attach_noise: float):
    b = SentenceBuilder()
    t = rng.randrange(9)

    def attach(right: int, wrong: int) -> int:
        return wrong if rng.random() < attach_noise else right

    if t == 0:
        _np(b, rng)
        b.group("verb", (rng.choice(TRANSITIVE)[0], "VBD"))
        _np(b, rng)
        gold = rels(("subj", 0, 1), ("obj", 2, 1))
    elif t == 1:
        _np(b, rng)
        b.group("verb", (rng.choice(["was", "is"]), "VBD"))
        b.group("adjective", ("very", "RB"), (rng.choice(ADJECTIVES), "JJ"))
        gold = rels(("subj", 0, 2), ("cop-subj", 0, 1), ("p-cop-obj", 2, 1))
    elif t == 2:
        _np(b, rng)
        b.group("verb", (rng.choice(TRANSITIVE)[0], "VBD"))
        _np(b, rng)
        b.group("in", (rng.choice(["at", "in"]), "IN"), attach=attach(1, 2))
        b.group("noun", ("the", "DT"), (rng.choice(PLACES), "NN"))
        gold = rels(("subj", 0, 1), ("obj", 2, 1), ("mod-loc", 3, 1), ("obj", 4, 3))
    elif t == 3:
        _np(b, rng)
        b.group("verb", (rng.choice(INTRANSITIVE)[0], "VBD"))
        b.group("in", ("at", "IN"), attach=1)
        b.group("noun", (rng.choice(TIMES), "NN"))
        gold = rels(("subj", 0, 1), ("mod-time", 2, 1), ("obj", 3, 2))
    elif t == 4:
        b.group("noun", ("There", "EX"))
        b.group("verb", (rng.choice(["was", "is"]), "VBD"))
        _np(b, rng)
        gold = rels(("empty", 0, 2))
    elif t == 5:
        # the true attachment decides the gold arc; the group carries an estimate
        true = rng.choice([1, 2])
        _np(b, rng)
        b.group("verb", (rng.choice(TRANSITIVE)[0], "VBD"))
        _np(b, rng)
        b.group("in", ("with", "IN"), attach=attach(true, 3 - true))
        _np(b, rng)
        gold = rels(("subj", 0, 1), ("obj", 2, 1), ("mod", 3, true), ("obj", 4, 3))
    elif t == 6:
        _np(b, rng, NAMES)
        b.group("verb", (rng.choice(TRANSITIVE)[0], "VBD"))
        _np(b, rng)
        b.token("and", "CC")
        _np(b, rng)
        gold = rels(("subj", 0, 1), ("obj", 2, 1), ("obj", 3, 1))
    elif t == 7:
        _np(b, rng)
        b.group("verb", ("was", "VBD"), (rng.choice(PARTICIPLES)[0], "VBN"), vprops=["passive"])
        b.group("in", ("by", "IN"), attach=1)
        _np(b, rng)
        gold = rels(("obj", 0, 1), ("pp-subj", 2, 1), ("obj", 3, 2))
    else:
        _np(b, rng)
        b.group("in", ("that", "WDT"), attach=0)
        b.group("verb", (rng.choice(INTRANSITIVE)[0], "VBD"))
        b.group("verb", (rng.choice(TRANSITIVE)[0], "VBD"))
        _np(b, rng)
        gold = rels(("subj", 0, 2), ("mod", 2, 0), ("subj", 0, 3), ("obj", 4, 3))
    b.token(".", ".")
    return b.sentence(), gold


MOD_FAMILY = (Label.MOD, Label.MOD_LOC, Label.MOD_TIME)


def template_corpus(n: int, seed: int = 0, attach_noise: float = 0.25, label_noise: float = 0.0) -> AnnotatedCorpus:
    """``n`` sentences drawn from a small English template grammar.

    ``attach_noise`` is the rate of wrong IN-group attachment estimates;
    ``label_noise`` the rate at which a gold modifier arc gets a random
    label from the modifier family, as an inconsistent annotator would."""
    rng = random.Random(seed)
    items = []
    for _ in range(n):
        s, gold = _template(rng, attach_noise)
        if label_noise:
            gold = frozenset(
                Relation(rng.choice(MOD_FAMILY), r.source, r.target) if r.label in MOD_FAMILY and rng.random() < label_noise else r
                for r in gold
            )
        items.append(AnnotatedSentence(s, gold))
    return AnnotatedCorpus(tuple(items))


RANDOM_WORDS = [("the", "DT"), ("cat", "NN"), ("was", "VBD"), ("of", "IN"), ("ran", "VBD"), ("happy", "JJ"), ("there", "EX"), ("and", "CC")]
RANDOM_LABELS = [Label.SUBJ, Label.OBJ, Label.MOD, Label.MOD_TIME, Label.MOD_LOC, Label.PP_OBJ]


def random_sentence(rng: random.Random, max_groups: int = 6):
    b = SentenceBuilder()
    n = rng.randint(1, max_groups)
    kinds = list(GroupKind)
    for _ in range(n):
        if rng.random() < 0.2:
            b.token(*rng.choice([(",", ","), ("and", "CC"), ("of", "IN")]))
        kind = rng.choice(kinds)
        words = [rng.choice(RANDOM_WORDS) for _ in range(rng.randint(1, 2))]
        b.group(
            kind,
            *words,
            ne=rng.choice([None, None, "person"]) if kind is GroupKind.NOUN else None,
            vprops=[rng.choice(["passive", "infinitival"])] if kind is GroupKind.VERB and rng.random() < 0.3 else (),
        )
    s = b.sentence()
    groups = list(s.groups)
    for i, g in enumerate(groups):
        if g.kind is GroupKind.IN and n > 1 and rng.random() < 0.7:
            target = rng.choice([j for j in range(n) if j != i])
            groups[i] = type(g)(g.id, g.kind, g.span, g.head, g.ne, g.vprops, target)
    return type(s)(s.lexemes, tuple(groups))


def random_relations(rng: random.Random, n: int, k: int, labels=RANDOM_LABELS, max_distance: int = 3) -> frozenset[Relation]:
    if n < 2:
        return frozenset()
    out = set()
    for _ in range(k):
        a = rng.randrange(n)
        choices = [b for b in range(max(0, a - max_distance), min(n, a + max_distance + 1)) if b != a]
        out.add(Relation(rng.choice(labels), a, rng.choice(choices)))
    return frozenset(out)


def random_corpus(
    rng: random.Random, max_sentences: int = 5, max_groups: int = 6, labels=RANDOM_LABELS, with_initial: bool = False
) -> AnnotatedCorpus:
    items = []
    for _ in range(rng.randint(1, max_sentences)):
        s = random_sentence(rng, max_groups)
        n = len(s.groups)
        gold = random_relations(rng, n, rng.randint(0, 2 * n), labels)
        initial = random_relations(rng, n, rng.randint(0, n), labels) if with_initial else frozenset()
        items.append(AnnotatedSentence(s, gold, initial))
    return AnnotatedCorpus(tuple(items))
