"""
Strategy labels in the `|`-separated approach vocabulary, e.g.
INTERNAL_BATCH|PUSH|UNIFORM|100 or PULL|RECIPIENT_COST
"""
from airdrop_svc.errors import LabelError
from .enums import Side, StrategyFamily
from .schemas import StrategyDescriptor

SEP = "|"

NAIVE_PUSH = "NAIVE|PUSH"
RECIPIENT_COST = "PULL|RECIPIENT_COST"
POOLED_MERKLE = "POOLED|MERKLE"
POOLED_RECIPIENT_COST = "POOLED|RECIPIENT_COST"
BASELINE_PREFIX = "BASE_LINE|INTERNAL_BATCH|PUSH|UNIFORM"

VALID_LABEL_FORMS = [
    NAIVE_PUSH,
    RECIPIENT_COST,
    POOLED_MERKLE,
    POOLED_RECIPIENT_COST,
    "EXTERNAL_BATCH|PUSH[|UNIFORM]|<bs>",
    "INTERNAL_BATCH|PUSH[|UNIFORM]|<bs>",
    "INTERNAL_BATCH|PULL[|ZERO_RESET][|UNIFORM]|<bs>",
    f"{BASELINE_PREFIX}|<bs>",
]

_BATCHED = {
    ("EXTERNAL_BATCH", "PUSH"): StrategyFamily.EXTERNAL_BATCH_PUSH,
    ("INTERNAL_BATCH", "PUSH"): StrategyFamily.INTERNAL_BATCH_PUSH,
    ("INTERNAL_BATCH", "PULL"): StrategyFamily.INTERNAL_BATCH_PULL,
}
_BATCHED_NAMES = {family: tokens for tokens, family in _BATCHED.items()}


def _batch_size(token: str, label: str) -> int:
    if not token.isdigit() or int(token) < 1:
        raise LabelError(f"batch size must be a positive integer in {label!r}")
    return int(token)


def parse_label(label: str) -> StrategyDescriptor:
    """Parse a strategy label into an uncalibrated descriptor"""
    text = label.strip().upper()
    if text == NAIVE_PUSH:
        return StrategyDescriptor(family=StrategyFamily.NAIVE_PUSH)
    if text == RECIPIENT_COST:
        return StrategyDescriptor(family=StrategyFamily.INTERNAL_BATCH_PULL, side=Side.RECIPIENT)
    if text == POOLED_MERKLE:
        return StrategyDescriptor(family=StrategyFamily.POOLED_MERKLE)
    if text == POOLED_RECIPIENT_COST:
        return StrategyDescriptor(family=StrategyFamily.POOLED_MERKLE, side=Side.RECIPIENT)
    if text.startswith(BASELINE_PREFIX + SEP):
        return StrategyDescriptor(
            family=StrategyFamily.BASELINE,
            batch_size=_batch_size(text[len(BASELINE_PREFIX) + 1:], label),
            uniform=True,
        )

    tokens = text.split(SEP)
    if len(tokens) < 3 or (tokens[0], tokens[1]) not in _BATCHED:
        raise LabelError(f"unknown strategy label {label!r}")
    family = _BATCHED[(tokens[0], tokens[1])]
    flags = tokens[2:-1]
    zero_reset = "ZERO_RESET" in flags
    uniform = "UNIFORM" in flags
    expected = (["ZERO_RESET"] if zero_reset else []) + (["UNIFORM"] if uniform else [])
    if flags != expected:
        raise LabelError(f"unexpected flags {flags} in {label!r}")
    if zero_reset and family != StrategyFamily.INTERNAL_BATCH_PULL:
        raise LabelError(f"ZERO_RESET only applies to pull strategies: {label!r}")
    return StrategyDescriptor(
        family=family,
        batch_size=_batch_size(tokens[-1], label),
        uniform=uniform,
        zero_reset=zero_reset,
    )


def format_label(d: StrategyDescriptor) -> str:
    if d.family == StrategyFamily.NAIVE_PUSH:
        return NAIVE_PUSH
    if d.side == Side.RECIPIENT:
        return POOLED_RECIPIENT_COST if d.family == StrategyFamily.POOLED_MERKLE else RECIPIENT_COST
    if d.family == StrategyFamily.POOLED_MERKLE:
        return POOLED_MERKLE
    if d.family == StrategyFamily.BASELINE:
        return f"{BASELINE_PREFIX}{SEP}{d.batch_size}"
    tokens = list(_BATCHED_NAMES[d.family])
    if d.zero_reset:
        tokens.append("ZERO_RESET")
    if d.uniform:
        tokens.append("UNIFORM")
    tokens.append(str(d.batch_size))
    return SEP.join(tokens)


def calibration_key(d: StrategyDescriptor) -> str:
    """Label of the measured scenario whose residual applies to d (reset pass is priced, not fitted)"""
    return format_label(d.model_copy(update={"zero_reset": False}))
