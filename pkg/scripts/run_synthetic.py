"""Train on one synthetic template corpus and score on another.

    python3 scripts/run_synthetic.py --train 200 --test 100 --noise 0.3
"""

import argparse
import logging
import time

from relseq.config import TrainingConfig
from relseq.evaluate import MOD_MERGE, format_report, score
from relseq.learner import run_training
from relseq.rules import apply_sequence
from relseq.synthetic import template_corpus, toy_lexicon


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--train", type=int, default=200, help="training sentences")
    ap.add_argument("--test", type=int, default=100, help="test sentences")
    ap.add_argument("--noise", type=float, default=0.3, help="rate of wrong IN-group attachments")
    ap.add_argument("--label-noise", type=float, default=0.1, help="rate of random modifier labels in gold")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threshold", type=int, default=4)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--merge-mod", action="store_true")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    lex = toy_lexicon()
    train = template_corpus(args.train, seed=args.seed, attach_noise=args.noise, label_noise=args.label_noise)
    test = template_corpus(args.test, seed=args.seed + 1, attach_noise=args.noise, label_noise=args.label_noise)
    t0 = time.time()
    run = run_training(train, TrainingConfig(gain_threshold=args.threshold), lex, jobs=args.jobs)
    elapsed = time.time() - t0
    merge = MOD_MERGE if args.merge_mod else None

    print(f"{len(run.sequence)} rules in {elapsed:.1f}s")
    for name, corpus in (("train", train), ("test", test)):
        print(f"== {name} ({len(corpus)} sentences)")
        print(format_report(score(apply_sequence(run.sequence, corpus, lex), corpus.gold, merge)), end="")


if __name__ == "__main__":
    main()
