"""Recall/precision/f-score over relation triples, label merging, and the
neo-Davidsonian proposition view of a relation graph."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .corpus import GroupKind, Label, Relation, Sentence
from .lexicon import LexiconBundle

MOD_MERGED = "mod-merged"
MOD_MERGE: dict[Label, str] = {Label.MOD: MOD_MERGED, Label.MOD_LOC: MOD_MERGED, Label.MOD_TIME: MOD_MERGED}
COMBINED_MERGE: dict[Label, str] = {
    **MOD_MERGE,
    Label.LOC_OBJ: MOD_MERGED,
    Label.PP_SUBJ: MOD_MERGED,
    Label.PP_OBJ: MOD_MERGED,
    Label.PP_IO: MOD_MERGED,
}

DISTANCE_BUCKETS = ("<=1", "<=2", "<=3", ">3")


def fscore(p: float, r: float) -> float:
    if p + r == 0:
        return 0.0
    return 2 * p * r / (p + r)


@dataclass(frozen=True)
class Score:
    matches: int = 0
    key_total: int = 0
    response_total: int = 0

    @property
    def recall(self) -> float:
        return self.matches / self.key_total if self.key_total else 0.0

    @property
    def precision(self) -> float:
        # an empty response scores 0, not undefined
        return self.matches / self.response_total if self.response_total else 0.0

    @property
    def fscore(self) -> float:
        return fscore(self.precision, self.recall)

    @property
    def missed(self) -> int:
        return self.key_total - self.matches

    @property
    def spurious(self) -> int:
        return self.response_total - self.matches

    def __add__(self, other: Score) -> Score:
        return Score(
            self.matches + other.matches,
            self.key_total + other.key_total,
            self.response_total + other.response_total,
        )


@dataclass
class EvalReport:
    overall: Score
    per_label: dict[str, Score] = field(default_factory=dict)
    distances: dict[str, int] = field(default_factory=dict)

    def distance_percent(self, bucket: str) -> float:
        total = self.overall.key_total
        return 100.0 * self.distances.get(bucket, 0) / total if total else 0.0


class ShapeMismatch(ValueError):
    def __init__(self, sentence: int, message: str):
        super().__init__(f"sentence:{sentence} {message}")
        self.sentence = sentence


def _merged(rels, merge: Mapping[Label, str] | None) -> Counter:
    m = merge or {}
    return Counter((m.get(r.label, r.label.value), r.source, r.target) for r in rels)


def score(
    predicted: Sequence[frozenset[Relation]],
    gold: Sequence[frozenset[Relation]],
    merge: Mapping[Label, str] | None = None,
) -> EvalReport:
    """Exact-triple scoring. Under a merge, triples are compared by merged
    label as multisets, so totals never shrink."""
    if len(predicted) != len(gold):
        raise ShapeMismatch(min(len(predicted), len(gold)), f"{len(predicted)} predicted vs {len(gold)} gold sentences")
    matches: Counter = Counter()
    keys: Counter = Counter()
    resps: Counter = Counter()
    dist: Counter = Counter()
    for pred, key in zip(predicted, gold):
        p, k = _merged(pred, merge), _merged(key, merge)
        for (lab, _, _), c in (p & k).items():
            matches[lab] += c
        for (lab, s, t), c in k.items():
            keys[lab] += c
            d = abs(t - s)
            dist[DISTANCE_BUCKETS[min(d, 4) - 1] if d >= 1 else "<=1"] += c
        for (lab, _, _), c in p.items():
            resps[lab] += c
    labels = sorted(set(keys) | set(resps), key=_label_order)
    per_label = {lab: Score(matches[lab], keys[lab], resps[lab]) for lab in labels}
    overall = Score(sum(matches.values()), sum(keys.values()), sum(resps.values()))
    cumulative = {}
    running = 0
    for b in DISTANCE_BUCKETS[:3]:
        running += dist[b]
        cumulative[b] = running
    cumulative[">3"] = dist[">3"]
    return EvalReport(overall, per_label, cumulative)


def _label_order(name: str):
    order = [lab.value for lab in Label]
    return (order.index(name), name) if name in order else (len(order), name)


def merged_modifier_eval(predicted, gold) -> Score:
    return score(predicted, gold, MOD_MERGE).overall


def combined_eval(predicted, gold) -> Score:
    return score(predicted, gold, COMBINED_MERGE).overall


def format_report(report: EvalReport) -> str:
    o = report.overall
    lines = [f"R={100 * o.recall:.2f}% P={100 * o.precision:.2f}% F={100 * o.fscore:.2f}"]
    lines.append(f"{'label':<12}{'key':>6}{'resp':>6}{'match':>7}{'R%':>8}{'P%':>8}{'F':>8}")
    for lab, s in report.per_label.items():
        lines.append(
            f"{lab:<12}{s.key_total:>6}{s.response_total:>6}{s.matches:>7}"
            f"{100 * s.recall:>8.1f}{100 * s.precision:>8.1f}{100 * s.fscore:>8.1f}"
        )
    lines.append("Percent of Relations with Length")
    lines.append(f"{'set':<12}" + "".join(f"{b:>8}" for b in DISTANCE_BUCKETS))
    lines.append(f"{'key':<12}" + "".join(f"{report.distance_percent(b):>7.0f}%" for b in DISTANCE_BUCKETS))
    return "\n".join(lines) + "\n"


# --- propositions -------------------------------------------------------------

EVENT_NOUN_CLASSES = frozenset({"act", "process"})


@dataclass(frozen=True)
class Proposition:
    predicate: str
    args: tuple[str, ...]
    event: str | None = None

    def __str__(self) -> str:
        body = f"{self.predicate}({' '.join(self.args)})"
        return f"{body}={self.event}" if self.event else body


@dataclass
class Propositions:
    propositions: list[Proposition]
    unmapped: list[Relation]

    def strings(self) -> list[str]:
        return [str(p) for p in self.propositions]


def emit_propositions(s: Sentence, rels, lex: LexiconBundle | None = None) -> Propositions:
    """Map SUBJ/OBJ/MOD arcs to predicate-argument propositions.

    Noun groups get an entity variable; verb groups (and nouns of class
    act/process) are events. SUBJ sources fill the first argument of their
    target's predicate, OBJ sources the second; MOD(m -> x) yields
    ``mod(m x)``. An event variable is only printed once something refers
    to it."""
    lex = lex or LexiconBundle()
    rels = sorted(rels, key=Relation.sort_key)
    is_event = {}
    for g in s.groups:
        is_event[g.id] = g.kind is GroupKind.VERB or (
            g.kind is GroupKind.NOUN and bool(lex.classes_of(s.head(g).text, g.kind) & EVENT_NOUN_CLASSES)
        )

    counter = 0
    names: dict[tuple[str, int], str] = {}

    def var(kind: str, gid: int) -> str:
        nonlocal counter
        if (kind, gid) not in names:
            counter += 1
            names[(kind, gid)] = f"{kind}{counter}"
        return names[(kind, gid)]

    for g in s.groups:
        if g.kind is GroupKind.NOUN:
            var("x", g.id)

    def ref(gid: int) -> str:
        if is_event[gid] and s.groups[gid].kind is GroupKind.VERB:
            return var("e", gid)
        return var("x", gid)

    subj: dict[int, list[int]] = {}
    obj: dict[int, list[int]] = {}
    mods: list[Relation] = []
    unmapped: list[Relation] = []
    for r in rels:
        if r.label is Label.SUBJ:
            subj.setdefault(r.target, []).append(r.source)
        elif r.label is Label.OBJ:
            obj.setdefault(r.target, []).append(r.source)
        elif r.label is Label.MOD:
            mods.append(r)
        else:
            unmapped.append(r)

    # (group id or None, predicate, args); event variables are attached
    # afterwards so that only referenced ones are shown
    pending: list[tuple[int | None, str, tuple[str, ...]]] = []
    consumed: set[int] = set()
    for g in s.groups:
        head = s.head(g).text
        if g.kind is GroupKind.NOUN:
            pending.append((None, head, (var("x", g.id),)))
        if not is_event[g.id]:
            continue
        subjects, objects = subj.get(g.id, []), obj.get(g.id, [])
        if g.kind is GroupKind.NOUN:
            if not (subjects or objects):
                continue
            var("e", g.id)
        consumed.add(g.id)
        # one predicate per subject/object pairing; "_" marks an empty slot
        for a in subjects or [None]:
            for b in objects or [None]:
                args = (ref(a) if a is not None else "_",)
                if b is not None:
                    args += (ref(b),)
                pending.append((g.id, head, args))
    mod_props = [Proposition("mod", (ref(r.source), ref(r.target))) for r in mods]
    unmapped += [r for r in rels if r.label in (Label.SUBJ, Label.OBJ) and r.target not in consumed]
    unmapped.sort(key=Relation.sort_key)
    props = [Proposition(head, args, names.get(("e", gid)) if gid is not None else None) for gid, head, args in pending]
    return Propositions(props + mod_props, unmapped)
