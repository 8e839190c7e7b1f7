"""Transformation rule sequences for finding grammatical relations between
chunked syntax groups."""

__version__ = "0.1.0"

from .config import TrainingConfig  # noqa: E402
from .corpus import (  # noqa: E402
    AnnotatedCorpus,
    AnnotatedSentence,
    GroupKind,
    Label,
    Relation,
    Sentence,
    SyntaxGroup,
    group_offset,
    parse_corpus,
    serialize_corpus,
    validate,
)
from .evaluate import emit_propositions, fscore, merged_modifier_eval, score  # noqa: E402
from .learner import generate_candidates, net_gain, run_training, train, train_from_initial  # noqa: E402
from .lexicon import LexiconBundle, load_lexicons  # noqa: E402
from .rules import (  # noqa: E402
    Action,
    Condition,
    ConditionKind,
    Rule,
    RuleSequence,
    apply_rule,
    apply_sequence,
    eval_condition,
    rule_matches,
)

__all__ = [
    "Action",
    "AnnotatedCorpus",
    "AnnotatedSentence",
    "Condition",
    "ConditionKind",
    "GroupKind",
    "Label",
    "LexiconBundle",
    "Relation",
    "Rule",
    "RuleSequence",
    "Sentence",
    "SyntaxGroup",
    "TrainingConfig",
    "apply_rule",
    "apply_sequence",
    "emit_propositions",
    "eval_condition",
    "fscore",
    "generate_candidates",
    "group_offset",
    "load_lexicons",
    "merged_modifier_eval",
    "net_gain",
    "parse_corpus",
    "rule_matches",
    "run_training",
    "score",
    "serialize_corpus",
    "train",
    "train_from_initial",
    "validate",
]
