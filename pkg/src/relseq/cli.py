"""``relseq train|apply|eval|inspect``.

Exit codes: 0 success, 1 validation or semantic error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .config import ConfigError, TrainingConfig, parse_config
from .corpus import CorpusError, CorpusValidationError, read_corpus, validate, write_corpus
from .evaluate import COMBINED_MERGE, MOD_MERGE, ShapeMismatch, format_report, score
from .learner import run_training
from .lexicon import LexiconBundle, LexiconError, load_lexicons
from .rules import RuleFileError, apply_sequence, read_rules, write_rules

log = logging.getLogger("relseq")

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    command: str
    config: dict
    inputs: dict[str, str] = field(default_factory=dict)
    outputs: dict[str, str] = field(default_factory=dict)
    tool_version: str = __version__
    jobs: int = 1
    started: float = 0.0
    duration_seconds: float = 0.0

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.__dict__, f, indent=2, sort_keys=True)
            f.write("\n")


def _lexicons(path) -> tuple[LexiconBundle, dict[str, str]]:
    if path is None:
        return LexiconBundle(), {}
    d = Path(path)
    bundle = load_lexicons(d)
    digests = {}
    if d.is_dir():
        for p in sorted(d.glob("*.tsv")):
            digests[f"lexicon:{p.name}"] = sha256_file(p)
    return bundle, digests


def _config(args) -> TrainingConfig:
    cfg = TrainingConfig()
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as f:
            cfg = parse_config(f.read(), cfg)
    return cfg.updated(
        gain_threshold=args.threshold,
        max_distance=args.max_distance,
        max_conditions=args.max_conditions,
    )


def _read_corpus(path):
    try:
        return read_corpus(path)
    except CorpusValidationError as e:
        for d in e.diagnostics:
            print(d, file=sys.stderr)
        raise Failure(EXIT_INVALID, f"{path}: corpus failed validation") from None


def cmd_train(args) -> int:
    t0 = time.time()
    cfg = _config(args)
    corpus = _read_corpus(args.corpus)
    lex, lex_digests = _lexicons(args.lexicons)
    out = Path(args.out)
    log_path = Path(args.log) if args.log else out.with_name(out.name + ".log")
    with open(log_path, "w", encoding="utf-8") as logf:
        run = run_training(
            corpus,
            cfg,
            lex,
            from_initial=args.from_initial,
            jobs=args.jobs,
            on_iteration=lambda it: logf.write(it.log_line() + "\n"),
        )
    write_rules(run.sequence, out)
    m = RunManifest(
        command="train",
        config=cfg.to_dict(),
        inputs={"corpus": sha256_file(args.corpus), **lex_digests},
        outputs={"rules": sha256_file(out), "log": sha256_file(log_path)},
        jobs=args.jobs,
        started=t0,
        duration_seconds=round(time.time() - t0, 3),
    )
    m.write(out.with_name(out.name + ".manifest.json"))
    print(f"{len(run.sequence)} rules written to {out}", file=sys.stderr)
    return EXIT_OK


def cmd_apply(args) -> int:
    seq = read_rules(args.rules)
    corpus = _read_corpus(args.corpus)
    lex, _ = _lexicons(args.lexicons)
    predicted = apply_sequence(seq, corpus, lex)
    write_corpus(corpus.with_initial(predicted), args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    pred = _read_corpus(args.pred)
    gold = _read_corpus(args.corpus)
    if len(pred) != len(gold):
        raise ShapeMismatch(min(len(pred), len(gold)), f"{len(pred)} predicted vs {len(gold)} gold sentences")
    for i, (p, g) in enumerate(zip(pred, gold)):
        if p.sentence != g.sentence:
            raise ShapeMismatch(i, "predicted and gold sentences differ")
    merge = COMBINED_MERGE if args.merge_combined else MOD_MERGE if args.merge_mod else None
    report = score(pred.initial, gold.gold, merge)
    text = format_report(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK


def cmd_inspect(args) -> int:
    if not args.rules and not args.corpus:
        raise Failure(EXIT_INVALID, "inspect needs --rules and/or --corpus")
    code = EXIT_OK
    if args.rules:
        seq = read_rules(args.rules)
        print(f"# {len(seq)} rules; meta={json.dumps(seq.metadata, sort_keys=True)}")
        for i, (r, net) in enumerate(zip(seq.rules, seq.gains), 1):
            print(f"{i:4d} {r}" + (f"  [net {net}]" if net is not None else ""))
    if args.corpus:
        corpus = read_corpus(args.corpus, strict=False)
        diags = validate(corpus)
        n_groups = sum(len(s.sentence.groups) for s in corpus)
        n_gold = sum(len(s.gold) for s in corpus)
        n_init = sum(len(s.initial) for s in corpus)
        print(f"sentences={len(corpus)} groups={n_groups} gold={n_gold} initial={n_init}")
        for d in diags:
            print(d, file=sys.stderr)
        if any(d.severity == "error" for d in diags):
            code = EXIT_INVALID
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="relseq", description="Learn and apply grammatical-relation rule sequences.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="learn a rule sequence from an annotated corpus")
    t.add_argument("--corpus", required=True)
    t.add_argument("--lexicons")
    t.add_argument("--config")
    t.add_argument("--out", "--rules", dest="out", required=True, help="rule file to write")
    t.add_argument("--log", help="training log (default: <out>.log)")
    t.add_argument("--jobs", type=int, default=1)
    t.add_argument("--threshold", type=int)
    t.add_argument("--max-distance", type=int)
    t.add_argument("--max-conditions", type=int)
    t.add_argument("--from-initial", action="store_true", help="start from each sentence's initial labeling")
    t.set_defaults(func=cmd_train)

    a = sub.add_parser("apply", help="run a rule sequence over a corpus")
    a.add_argument("--rules", required=True)
    a.add_argument("--corpus", required=True)
    a.add_argument("--lexicons")
    a.add_argument("--out", required=True)
    a.set_defaults(func=cmd_apply)

    e = sub.add_parser("eval", help="score predictions against gold relations")
    e.add_argument("--pred", required=True, help="corpus whose initial relations are the predictions")
    e.add_argument("--corpus", required=True, help="gold corpus")
    e.add_argument("--merge-mod", action="store_true")
    e.add_argument("--merge-combined", action="store_true")
    e.add_argument("--out")
    e.set_defaults(func=cmd_eval)

    i = sub.add_parser("inspect", help="list rules or summarize and validate a corpus")
    i.add_argument("--rules")
    i.add_argument("--corpus")
    i.set_defaults(func=cmd_inspect)
    return p


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("RELSEQ_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("relseq: --jobs must be >= 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except Failure as e:
        print(f"relseq: {e}", file=sys.stderr)
        return e.code
    except (CorpusError, RuleFileError, ConfigError, LexiconError, ShapeMismatch) as e:
        print(f"relseq: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"relseq: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
