from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from relseq.config import DETERMINERS, ConfigError, TrainingConfig, format_config, parse_config, rule_violations
from relseq.fixtures import sample_rule
from relseq.rules import CK, Action, Condition, Rule


def test_defaults():
    cfg = TrainingConfig()
    assert (cfg.gain_threshold, cfg.max_conditions, cfg.max_distance) == (4, 3, 3)
    assert {"of", "?"} | DETERMINERS == cfg.lexeme_whitelist
    assert not cfg.negatable(CK.CONTAINS_POS)
    assert cfg.negatable(CK.HEAD_WORD)
    assert cfg.offsets() == [-3, -2, -1, 1, 2, 3]


@pytest.mark.parametrize("field", ["gain_threshold", "max_distance"])
def test_invalid_values(field):
    with pytest.raises(ConfigError):
        TrainingConfig(**{field: 0})
    with pytest.raises(ConfigError):
        TrainingConfig(max_conditions=-1)


def test_parse_flat_file():
    text = "# sweep\ngain_threshold = 2\nlexeme_whitelist = of, the\ncondition_kinds = group-type,head-word\npp_attachment_anchor_only = false\n"
    cfg = parse_config(text)
    assert cfg.gain_threshold == 2
    assert cfg.lexeme_whitelist == {"of", "the"}
    assert cfg.condition_kinds == {CK.GROUP_TYPE, CK.HEAD_WORD}
    assert cfg.pp_attachment_anchor_only is False


@pytest.mark.parametrize("text", ["bogus = 1", "gain_threshold", "gain_threshold = x", "no_negation = nope"])
def test_parse_errors(text):
    with pytest.raises(ConfigError, match="line 1"):
        parse_config(text)


@given(st.integers(1, 9), st.integers(0, 4), st.integers(1, 5), st.booleans())
def test_format_parse_round_trip(t, c, d, pp):
    cfg = TrainingConfig(gain_threshold=t, max_conditions=c, max_distance=d, pp_attachment_anchor_only=pp)
    assert parse_config(format_config(cfg)) == cfg


def test_updated_skips_none():
    assert TrainingConfig().updated(gain_threshold=None, max_distance=2).max_distance == 2


def test_sample_rule_is_valid():
    assert rule_violations(sample_rule(), TrainingConfig()) == []


@pytest.mark.parametrize(
    "cond, fragment",
    [
        (Condition(CK.GROUP_TYPE, 4, "verb"), "outside"),
        (Condition(CK.CONTAINS_POS, 0, "DT", negated=True), "negation"),
        (Condition(CK.CONTAINS_LEXEME, 0, "cat"), "whitelist"),
        (Condition(CK.PP_ATTACHMENT, 1), "only at the anchor"),
    ],
)
def test_violations(cond, fragment):
    rule = Rule("noun", (cond,), Action("attach", "subj", 2))
    assert any(fragment in v for v in rule_violations(rule, TrainingConfig()))


def test_one_head_condition_per_position():
    rule = Rule("noun", (Condition(CK.HEAD_WORD, 1, "be"), Condition(CK.HEAD_POS, 1, "VBD")), Action("attach", "subj", 2))
    assert rule_violations(rule, TrainingConfig())
    ok = Rule("noun", (Condition(CK.HEAD_WORD, 1, "be"), Condition(CK.HEAD_POS, 0, "NN")), Action("attach", "subj", 2))
    assert rule_violations(ok, TrainingConfig()) == []


def test_too_many_conditions_and_long_offsets():
    conds = tuple(Condition(CK.GROUP_TYPE, p, "noun") for p in (-1, 0, 1, 2))
    assert rule_violations(Rule("noun", conds, Action("attach", "subj", 1)), TrainingConfig())
    assert rule_violations(Rule("noun", (), Action("attach", "subj", 4)), TrainingConfig())


def test_shipped_config_is_the_default():
    path = Path(__file__).parent.parent / "data" / "default.cfg"
    assert parse_config(path.read_text(encoding="utf-8")) == TrainingConfig()
