"""Training configuration and the search-space restrictions it implies."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace

from .rules import ARGLESS_KINDS, CK, HEAD_KINDS, ConditionKind, Rule, position_window

DETERMINERS = frozenset({"the", "a", "an", "this", "that", "these", "those"})
DEFAULT_LEXEME_WHITELIST = frozenset({"of", "?"}) | DETERMINERS
DEFAULT_NO_NEGATION = frozenset({CK.CONTAINS_LEXEME, CK.BETWEEN_LEXEME, CK.CONTAINS_POS})


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class TrainingConfig:
    gain_threshold: int = 4
    max_conditions: int = 3
    max_distance: int = 3
    lexeme_whitelist: frozenset[str] = DEFAULT_LEXEME_WHITELIST
    no_negation: frozenset[ConditionKind] = DEFAULT_NO_NEGATION
    condition_kinds: frozenset[ConditionKind] = frozenset(ConditionKind)
    pp_attachment_anchor_only: bool = True
    max_rules: int | None = None

    def __post_init__(self):
        if self.gain_threshold < 1:
            raise ConfigError("gain_threshold must be >= 1")
        if self.max_conditions < 0:
            raise ConfigError("max_conditions must be >= 0")
        if self.max_distance < 1:
            raise ConfigError("max_distance must be >= 1")
        if self.max_rules is not None and self.max_rules < 0:
            raise ConfigError("max_rules must be >= 0")
        object.__setattr__(self, "lexeme_whitelist", frozenset(w.lower() for w in self.lexeme_whitelist))
        object.__setattr__(self, "no_negation", frozenset(CK(k) for k in self.no_negation))
        object.__setattr__(self, "condition_kinds", frozenset(CK(k) for k in self.condition_kinds))

    def negatable(self, kind: ConditionKind) -> bool:
        return kind not in self.no_negation

    def offsets(self) -> list[int]:
        d = self.max_distance
        return [o for o in range(-d, d + 1) if o]

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, frozenset):
                v = sorted(x.value if hasattr(x, "value") else x for x in v)
            out[f.name] = v
        return out

    def updated(self, **changes) -> TrainingConfig:
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


_SET_FIELDS = {"lexeme_whitelist", "no_negation", "condition_kinds"}
_INT_FIELDS = {"gain_threshold", "max_conditions", "max_distance", "max_rules"}


def parse_config(text: str, base: TrainingConfig | None = None) -> TrainingConfig:
    """Flat ``key = value`` lines; sets are comma separated, ``#`` starts a
    comment line."""
    known = {f.name for f in fields(TrainingConfig)}
    changes: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, value = (x.strip() for x in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            if key in _INT_FIELDS:
                changes[key] = None if value.lower() in ("", "none") and key == "max_rules" else int(value)
            elif key in _SET_FIELDS:
                items = [x.strip() for x in value.split(",") if x.strip()]
                changes[key] = frozenset(CK(x) for x in items) if key != "lexeme_whitelist" else frozenset(items)
            else:
                if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                    raise ValueError(f"not a boolean: {value!r}")
                changes[key] = value.lower() in ("true", "1", "yes")
        except ValueError as e:
            raise ConfigError(f"line {lineno}: {key}: {e}") from None
    return replace(base or TrainingConfig(), **changes)


def format_config(cfg: TrainingConfig) -> str:
    lines = []
    for k, v in cfg.to_dict().items():
        if isinstance(v, list):
            v = ",".join(v)
        elif isinstance(v, bool):
            v = str(v).lower()
        lines.append(f"{k} = {'none' if v is None else v}")
    return "\n".join(lines) + "\n"


def rule_violations(rule: Rule, cfg: TrainingConfig) -> list[str]:
    """Ways ``rule`` falls outside the search space ``cfg`` describes."""
    out = []
    off = rule.action.offset
    if not 1 <= abs(off) <= cfg.max_distance:
        out.append(f"offset {off} beyond max distance {cfg.max_distance}")
    if len(rule.conditions) > cfg.max_conditions:
        out.append(f"{len(rule.conditions)} conditions > {cfg.max_conditions}")
    lo, hi = position_window(off)
    head_positions: set[int] = set()
    for c in rule.conditions:
        if c.kind not in cfg.condition_kinds:
            out.append(f"{c}: kind disabled")
        if any(not lo <= p <= hi for p in c.positions):
            out.append(f"{c}: position outside [{lo},{hi}]")
        if c.negated and not cfg.negatable(c.kind):
            out.append(f"{c}: negation not allowed")
        if c.kind in (CK.CONTAINS_LEXEME, CK.BETWEEN_LEXEME) and c.argument not in cfg.lexeme_whitelist:
            out.append(f"{c}: lexeme not in whitelist")
        if c.kind is CK.PP_ATTACHMENT and cfg.pp_attachment_anchor_only and c.position != 0:
            out.append(f"{c}: pp-attachment only at the anchor")
        if c.kind in ARGLESS_KINDS and c.argument:
            out.append(f"{c}: takes no argument")
        if c.kind in HEAD_KINDS:
            if c.position in head_positions:
                out.append(f"{c}: second head-word test at position {c.position}")
            head_positions.add(c.position)
    return out
