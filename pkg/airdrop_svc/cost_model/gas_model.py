"""
Fee schedule and primitive gas cost functions
Every strategy model is a composition of these primitives; all arithmetic is
integer so totals are exact
"""
import logging
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

from pydantic import ValidationError

from airdrop_svc import config
from airdrop_svc.errors import DomainError, ScheduleError
from .schemas import GasSchedule

logger = logging.getLogger(__name__)

WORD_BYTES = 32

DEFAULT_SCHEDULE = GasSchedule()


def input_word_cost(b_set: int, schedule: GasSchedule = DEFAULT_SCHEDULE) -> int:
    """
    Price of one 32-byte calldata word with b_set nonzero bytes

    Args:
        b_set: Number of nonzero bytes in the word, 0..32

    Returns:
        Gas for the word
    """
    if not 0 <= b_set <= WORD_BYTES:
        raise DomainError(f"b_set must be within [0, 32], got {b_set}")
    return schedule.g_calldata_nonzero * b_set + schedule.g_calldata_zero * (WORD_BYTES - b_set)


def calldata_cost(payload: bytes, schedule: GasSchedule = DEFAULT_SCHEDULE) -> int:
    nonzero = len(payload) - payload.count(0)
    return schedule.g_calldata_nonzero * nonzero + schedule.g_calldata_zero * (len(payload) - nonzero)


def log_cost(n_topics: int, data_bytes: int, schedule: GasSchedule = DEFAULT_SCHEDULE) -> int:
    if n_topics < 0 or data_bytes < 0:
        raise DomainError(f"log shape must be non-negative, got topics={n_topics} data={data_bytes}")
    return schedule.g_log_base + n_topics * schedule.g_log_topic + data_bytes * schedule.g_log_data


def keccak_cost(data_bytes: int, schedule: GasSchedule = DEFAULT_SCHEDULE) -> int:
    if data_bytes < 0:
        raise DomainError(f"data_bytes must be non-negative, got {data_bytes}")
    words = -(-data_bytes // WORD_BYTES)
    return schedule.g_keccak_base + words * schedule.g_keccak_word


def sstore_cost(prior_zero: bool, new_zero: bool,
                schedule: GasSchedule = DEFAULT_SCHEDULE) -> Tuple[int, int]:
    """
    Gas and refund of a single storage write

    Returns:
        (gas charged, refund earned)
    """
    if prior_zero and not new_zero:
        return schedule.g_sstore_new, 0
    if not prior_zero and new_zero:
        return schedule.g_sstore_update, schedule.r_sstore_clear
    return schedule.g_sstore_update, 0


def capped_refund(pre_refund_gas: int, refund: int) -> int:
    # refunds within one transaction never exceed half its pre-refund gas
    return min(refund, pre_refund_gas // 2)


# ------------------------------------------------------------
# Schedule override files
# ------------------------------------------------------------

def parse_schedule(text: str, base: GasSchedule = DEFAULT_SCHEDULE) -> GasSchedule:
    """Parse flat `key=value` lines on top of base; blank lines and # comments are skipped"""
    overrides: Dict[str, int] = {}
    known = set(GasSchedule.model_fields)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ScheduleError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ScheduleError(f"line {lineno}: unknown schedule constant {key!r}")
        try:
            overrides[key] = int(value)
        except ValueError:
            raise ScheduleError(f"line {lineno}: {key} must be an integer, got {value!r}")
    try:
        return GasSchedule(**{**base.model_dump(), **overrides})
    except ValidationError as e:
        raise ScheduleError(f"invalid schedule: {e}") from e


def load_schedule(path: Optional[Union[str, Path]] = None) -> GasSchedule:
    """Load the schedule from path, else from AIRDROP_SCHEDULE_FILE, else defaults"""
    path = Path(path) if path else config.schedule_file()
    if path is None:
        return DEFAULT_SCHEDULE
    if not path.exists():
        raise ScheduleError(f"schedule file not found: {path}")
    schedule = parse_schedule(path.read_text())
    logger.info(f"[schedule] loaded overrides from {path}")
    return schedule
