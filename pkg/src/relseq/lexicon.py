"""Word knowledge behind the head-word tests: stems, subcategorization
frames, semantic classes and closed word lists.

Each source is a TSV file, one entry per line, ``word<TAB>value value ...``,
``#`` starting a comment. Files in a lexicon directory:

    stems.tsv            surface form -> stems
    subcat.tsv           stem -> subcategorization/complement categories
    semclass-noun.tsv    stem -> noun semantic classes
    semclass-verb.tsv    stem -> verb semantic classes
    wordlist-<name>.tsv  one member per line

Semantic class values may carry their partition as a prefix
(``verb:motion``); the prefix must agree with the file.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import GroupKind

log = logging.getLogger(__name__)


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class LexiconBundle:
    stems: dict[str, frozenset[str]] = field(default_factory=dict)
    subcat: dict[str, frozenset[str]] = field(default_factory=dict)
    noun_classes: dict[str, frozenset[str]] = field(default_factory=dict)
    verb_classes: dict[str, frozenset[str]] = field(default_factory=dict)
    wordlists: dict[str, frozenset[str]] = field(default_factory=dict)

    def stems_of(self, word: str) -> frozenset[str]:
        w = word.lower()
        return self.stems.get(w) or frozenset((w,))

    def forms_of(self, word: str) -> frozenset[str]:
        """Lowercased surface form together with its stems."""
        return self.stems_of(word) | {word.lower()}

    def subcats_of(self, word: str) -> frozenset[str]:
        out: set[str] = set()
        for stem in self.stems_of(word):
            out |= self.subcat.get(stem, frozenset())
        return frozenset(out)

    def classes_of(self, word: str, kind: GroupKind) -> frozenset[str]:
        if kind is GroupKind.NOUN:
            table = self.noun_classes
        elif kind is GroupKind.VERB:
            table = self.verb_classes
        else:
            return frozenset()
        out: set[str] = set()
        for stem in self.stems_of(word):
            out |= table.get(stem, frozenset())
        return frozenset(out)

    def lists_containing(self, word: str) -> frozenset[str]:
        forms = self.forms_of(word)
        return frozenset(name for name, members in self.wordlists.items() if forms & members)

    def in_wordlist(self, word: str, name: str) -> bool:
        return bool(self.forms_of(word) & self.wordlists.get(name, frozenset()))


def _read_tsv(path: Path, min_values: int = 1):
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if "\t" in line:
                key, rest = line.split("\t", 1)
                values = rest.split()
            else:
                key, values = line, []
            key = key.strip()
            if not key or " " in key or len(values) < min_values:
                raise LexiconError(f"{path}:{lineno}: expected 'word<TAB>value ...', got {line!r}")
            yield lineno, key.lower(), values


def _load_table(path: Path, partition: str | None = None) -> dict[str, frozenset[str]]:
    table: dict[str, set[str]] = {}
    if not path.exists():
        return {}
    for lineno, key, values in _read_tsv(path):
        for v in values:
            if partition is not None and ":" in v:
                prefix, v = v.split(":", 1)
                if prefix != partition:
                    raise LexiconError(f"{path}:{lineno}: class {prefix}:{v} in the {partition} file")
            if not v:
                raise LexiconError(f"{path}:{lineno}: empty value")
            table.setdefault(key, set()).add(v)
    return {k: frozenset(v) for k, v in table.items()}


def load_lexicons(directory) -> LexiconBundle:
    """Load every lexicon file found in ``directory``; missing files are empty."""
    d = Path(directory) if directory is not None else None
    if d is None or not d.is_dir():
        log.warning("lexicon directory %s not found; using empty lexicons", directory)
        return LexiconBundle()
    stems = {k: frozenset(s.lower() for s in v) for k, v in _load_table(d / "stems.tsv").items()}
    wordlists = {}
    for p in sorted(d.glob("wordlist-*.tsv")):
        name = p.stem[len("wordlist-") :]
        if not name:
            raise LexiconError(f"{p}: word list needs a name")
        wordlists[name] = frozenset(key for _, key, _ in _read_tsv(p, min_values=0))
    return LexiconBundle(
        stems=stems,
        subcat=_load_table(d / "subcat.tsv"),
        noun_classes=_load_table(d / "semclass-noun.tsv", "noun"),
        verb_classes=_load_table(d / "semclass-verb.tsv", "verb"),
        wordlists=wordlists,
    )


def write_lexicons(bundle: LexiconBundle, directory) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)

    def dump(name, table):
        with open(d / name, "w", encoding="utf-8") as f:
            for k in sorted(table):
                f.write(f"{k}\t{' '.join(sorted(table[k]))}\n")

    dump("stems.tsv", bundle.stems)
    dump("subcat.tsv", bundle.subcat)
    dump("semclass-noun.tsv", bundle.noun_classes)
    dump("semclass-verb.tsv", bundle.verb_classes)
    for name, members in bundle.wordlists.items():
        with open(d / f"wordlist-{name}.tsv", "w", encoding="utf-8") as f:
            f.writelines(m + "\n" for m in sorted(members))
