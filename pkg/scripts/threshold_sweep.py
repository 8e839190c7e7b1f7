"""Sweep the gain threshold and condition budget; print test scores as a table.

    python3 scripts/threshold_sweep.py --thresholds 1 2 4 8 --conditions 1 3
"""

import argparse
import itertools

from relseq.config import TrainingConfig
from relseq.evaluate import score
from relseq.learner import run_training
from relseq.rules import apply_sequence
from relseq.synthetic import template_corpus, toy_lexicon


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--thresholds", type=int, nargs="+", default=[1, 2, 4, 8])
    ap.add_argument("--conditions", type=int, nargs="+", default=[0, 1, 2, 3])
    ap.add_argument("--train", type=int, default=150)
    ap.add_argument("--test", type=int, default=100)
    ap.add_argument("--noise", type=float, default=0.3)
    ap.add_argument("--label-noise", type=float, default=0.1, help="rate of random modifier labels in gold")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    lex = toy_lexicon()
    train = template_corpus(args.train, seed=args.seed, attach_noise=args.noise, label_noise=args.label_noise)
    test = template_corpus(args.test, seed=args.seed + 1, attach_noise=args.noise, label_noise=args.label_noise)
    print(f"{'threshold':>9} {'conds':>5} {'rules':>5} {'train F':>8} {'test R':>7} {'test P':>7} {'test F':>7}")
    for t, c in itertools.product(args.thresholds, args.conditions):
        run = run_training(train, TrainingConfig(gain_threshold=t, max_conditions=c), lex)
        tr = score(run.state, train.gold).overall
        te = score(apply_sequence(run.sequence, test, lex), test.gold).overall
        print(
            f"{t:>9} {c:>5} {len(run.sequence):>5} {100 * tr.fscore:>8.1f}"
            f" {100 * te.recall:>7.1f} {100 * te.precision:>7.1f} {100 * te.fscore:>7.1f}"
        )


if __name__ == "__main__":
    main()
