"""
Closed-form gas models for every airdrop strategy

Distributor side: per-batch itemization (intrinsic, calldata, storage, calls,
logs, calibrated overhead, refunds). Recipient side: one claim transaction per
recipient for pull and pooled strategies.
"""
import logging
from decimal import ROUND_HALF_EVEN, ROUND_HALF_UP, Decimal
from fractions import Fraction
from functools import lru_cache
from math import ceil
from typing import Dict, List, Tuple, Union

from eth_abi import encode

from airdrop_svc.errors import CalibrationError, DescriptorError, DiscountError, DomainError
from .enums import Side, StrategyFamily
from .gas_model import (
    DEFAULT_SCHEDULE,
    calldata_cost,
    capped_refund,
    input_word_cost,
    keccak_cost,
    log_cost,
    sstore_cost,
)
from .schemas import (
    FILL_GRADES,
    BatchCost,
    CostBreakdown,
    CostItem,
    FeasibilityReport,
    GasSchedule,
    StrategyDescriptor,
)

logger = logging.getLogger(__name__)

ITEM_ORDER = ("intrinsic", "calldata", "storage", "calls", "logs", "overhead", "refunds")

# Representative call arguments: addresses carry 20 nonzero bytes, hashes 32
SELECTOR = bytes.fromhex("a9059cbb")
REPRESENTATIVE_ADDRESS = "0x" + "11" * 20
FULL_ENTROPY_WORD = b"\xff" * 32
TRANSFER_LOG = (3, 32)  # Transfer/Approval: 3 topics, one data word
LEAF_BYTES = 1 + 20 + 32
PAIR_BYTES = 1 + 32 + 32
CENT = Decimal("0.01")

FillGrade = Union[float, int, str, Decimal, Fraction]


# ------------------------------------------------------------
# Closed-form savings and batch planning
# ------------------------------------------------------------

def savings_external(n: int, schedule: GasSchedule = DEFAULT_SCHEDULE) -> int:
    if n < 1:
        raise DomainError(f"recipient count must be >= 1, got {n}")
    return n * schedule.g_tx - (n * schedule.g_call_external + schedule.g_tx)


def savings_internal(n: int, schedule: GasSchedule = DEFAULT_SCHEDULE) -> int:
    if n < 1:
        raise DomainError(f"recipient count must be >= 1, got {n}")
    return n * schedule.g_tx - (n * schedule.g_call_internal + schedule.g_tx)


def batch_plan(n: int, batch_size: int) -> List[int]:
    if n < 1 or batch_size < 1:
        raise DomainError(f"n and batch_size must be >= 1, got n={n} batch_size={batch_size}")
    full, rest = divmod(n, batch_size)
    return [batch_size] * full + ([rest] if rest else [])


def baseline_cost(n: int, batch_size: int, schedule: GasSchedule = DEFAULT_SCHEDULE) -> int:
    """Lower bound counting only transactions, calldata and fresh storage writes"""
    n_tx = len(batch_plan(n, batch_size))
    return (n_tx * schedule.g_tx
            + n * schedule.g_sstore_new
            + n * input_word_cost(20, schedule)
            + input_word_cost(2, schedule))


# ------------------------------------------------------------
# Calldata layouts
# ------------------------------------------------------------

def _amount(amount_bytes: int) -> int:
    return int.from_bytes(b"\x01" * amount_bytes, "big")


@lru_cache(maxsize=1024)
def encode_payload(family: StrategyFamily, batch: int, uniform: bool, amount_bytes: int = 2) -> bytes:
    """Selector plus ABI-encoded arguments of one distributor transaction"""
    amount = _amount(amount_bytes)
    if family == StrategyFamily.NAIVE_PUSH:
        return SELECTOR + encode(["address", "uint256"], [REPRESENTATIVE_ADDRESS, amount])
    if family == StrategyFamily.POOLED_MERKLE:
        return SELECTOR + encode(["bytes32"], [FULL_ENTROPY_WORD])
    recipients = [REPRESENTATIVE_ADDRESS] * batch
    if uniform:
        return SELECTOR + encode(["address[]", "uint256"], [recipients, amount])
    return SELECTOR + encode(["address[]", "uint256[]"], [recipients, [amount] * batch])


@lru_cache(maxsize=64)
def encode_transfer_from(amount_bytes: int = 2) -> bytes:
    return SELECTOR + encode(
        ["address", "address", "uint256"],
        [REPRESENTATIVE_ADDRESS, REPRESENTATIVE_ADDRESS, _amount(amount_bytes)],
    )


def abi_payload_bytes(family: StrategyFamily, batch: int, uniform: bool,
                      amount_bytes: int = 2) -> Tuple[int, int]:
    """(total bytes, nonzero bytes) of one transaction's calldata"""
    if batch < 1:
        raise DomainError(f"batch must be >= 1, got {batch}")
    payload = encode_payload(family, batch, uniform, amount_bytes)
    return len(payload), len(payload) - payload.count(0)


# ------------------------------------------------------------
# Per-batch structure
# ------------------------------------------------------------

def round_gas(value: Decimal) -> int:
    return int(value.to_integral_value(rounding=ROUND_HALF_UP))


def _overhead_through(epsilon: Decimal, k: int) -> int:
    return round_gas(epsilon * k)


def _batch_structure(d: StrategyDescriptor, b: int, schedule: GasSchedule,
                     new_holders: bool) -> Tuple[Dict[str, int], int]:
    """Structural gas of one distributor transaction of b recipients, plus its uncapped refund"""
    items = {"intrinsic": schedule.g_tx, "calldata": 0, "storage": 0, "calls": 0, "logs": 0}
    refund = 0
    family = d.family

    if family == StrategyFamily.POOLED_MERKLE:
        items["calldata"] = calldata_cost(encode_payload(family, 1, True), schedule)
        items["storage"] = sstore_cost(True, False, schedule)[0]
        return items, 0

    items["calldata"] = calldata_cost(encode_payload(family, b, d.uniform, d.amount_bytes), schedule)
    transfer_log = log_cost(*TRANSFER_LOG, schedule=schedule)

    if family.is_push:
        recipient_write, _ = sstore_cost(new_holders, False, schedule)
        sender_write, _ = sstore_cost(False, False, schedule)
        # the distributor balance is debited once per transaction
        items["storage"] = b * recipient_write + sender_write
        if family == StrategyFamily.EXTERNAL_BATCH_PUSH:
            items["calls"] = b * schedule.g_call_external
        elif family == StrategyFamily.INTERNAL_BATCH_PUSH:
            items["calls"] = b * schedule.g_call_internal
        items["logs"] = b * transfer_log
        return items, 0

    if family == StrategyFamily.INTERNAL_BATCH_PULL:
        # after a reset pass every allowance is written from zero
        approve_gas, _ = sstore_cost(new_holders or d.zero_reset, False, schedule)
        items["calls"] = b * schedule.g_call_internal
        items["storage"] = b * approve_gas
        items["logs"] = b * transfer_log
        return items, refund

    raise DescriptorError(f"no batch model for {family.value}")


def _reset_structure(d: StrategyDescriptor, b: int, schedule: GasSchedule) -> Tuple[Dict[str, int], int]:
    """Transaction clearing b outstanding allowances ahead of their re-approval"""
    clear_gas, clear_refund = sstore_cost(False, True, schedule)
    items = {
        "intrinsic": schedule.g_tx,
        "calldata": calldata_cost(encode_payload(d.family, b, d.uniform, 0), schedule),
        "storage": b * clear_gas,
        "calls": b * schedule.g_call_internal,
        "logs": b * log_cost(*TRANSFER_LOG, schedule=schedule),
    }
    return items, b * clear_refund


def _transactions(d: StrategyDescriptor, b: int, schedule: GasSchedule,
                  new_holders: bool) -> List[Tuple[Dict[str, int], int, bool]]:
    """(structural items, uncapped refund, is reset) of every transaction serving one batch"""
    approve = (*_batch_structure(d, b, schedule, new_holders), False)
    if d.zero_reset:
        return [(*_reset_structure(d, b, schedule), True), approve]
    return [approve]


def _baseline_breakdown(d: StrategyDescriptor, n: int, schedule: GasSchedule,
                        new_holders: bool) -> CostBreakdown:
    store = schedule.g_sstore_new if new_holders else schedule.g_sstore_update
    batches: List[BatchCost] = []
    totals = dict.fromkeys(("intrinsic", "calldata", "storage"), 0)
    for i, b in enumerate(batch_plan(n, d.batch_size)):
        calldata = b * input_word_cost(20, schedule) + (input_word_cost(2, schedule) if i == 0 else 0)
        totals["intrinsic"] += schedule.g_tx
        totals["calldata"] += calldata
        totals["storage"] += b * store
        batches.append(BatchCost(batch_size=b, gas=schedule.g_tx + calldata + b * store))
    items = [CostItem(label=k, gas=v) for k, v in totals.items()]
    return CostBreakdown(descriptor=d, n=n, distributor_gas=sum(b.gas for b in batches),
                         items=items, batches=batches, new_holders=new_holders)


# ------------------------------------------------------------
# Public cost operations
# ------------------------------------------------------------

def recipient_cost(d: StrategyDescriptor, n: int, schedule: GasSchedule = DEFAULT_SCHEDULE) -> Decimal:
    """
    Gas one recipient pays to withdraw their allocation

    Pull: transferFrom against the allowance (cleared, earning a refund).
    Pooled: the same claim plus proof calldata, proof hashing and a claim record.
    Push families cost recipients nothing.
    """
    if n < 1:
        raise DomainError(f"recipient count must be >= 1, got {n}")
    if not d.family.has_recipient_side:
        return Decimal(0)

    each, _ = pull_claim_items(d, schedule)
    if d.family == StrategyFamily.POOLED_MERKLE:
        each += merkle_claim_extra(proof_length(n), schedule)
    return each


def pull_claim_items(d: StrategyDescriptor, schedule: GasSchedule = DEFAULT_SCHEDULE) -> Tuple[Decimal, List[CostItem]]:
    allowance_gas, allowance_refund = sstore_cost(False, True, schedule)
    recipient_write, _ = sstore_cost(True, False, schedule)
    sender_write, _ = sstore_cost(False, False, schedule)
    structural = {
        "intrinsic": schedule.g_tx,
        "calldata": calldata_cost(encode_transfer_from(d.amount_bytes), schedule),
        "storage": allowance_gas + recipient_write + sender_write,
        "logs": log_cost(*TRANSFER_LOG, schedule=schedule),
    }
    pre_refund = sum(structural.values()) + d.claim_overhead
    refund = capped_refund(int(pre_refund), allowance_refund)
    items = [CostItem(label=k, gas=v) for k, v in structural.items()]
    items.append(CostItem(label="overhead", gas=round_gas(d.claim_overhead)))
    items.append(CostItem(label="refunds", gas=-refund))
    return pre_refund - refund, items


def proof_length(n: int) -> int:
    """Siblings in a proof for a paired leaf: ceil(log2 n)"""
    if n < 1:
        raise DomainError(f"recipient count must be >= 1, got {n}")
    return (n - 1).bit_length()


def merkle_claim_extra(k: int, schedule: GasSchedule = DEFAULT_SCHEDULE) -> int:
    """Proof words, pair hashes, leaf hash and claim record on top of a pull claim"""
    return (k * input_word_cost(32, schedule)
            + k * keccak_cost(PAIR_BYTES - 1, schedule)
            + keccak_cost(LEAF_BYTES, schedule)
            + schedule.g_sstore_new)


def distributor_cost(d: StrategyDescriptor, n: int, schedule: GasSchedule = DEFAULT_SCHEDULE,
                     new_holders: bool = True) -> CostBreakdown:
    """
    Itemized distributor gas for n recipients

    Args:
        d: Strategy descriptor (calibrated or not)
        n: Number of recipients
        new_holders: Recipients receive a fresh storage slot (False: they already hold the token)

    Returns:
        CostBreakdown; pull and pooled strategies also carry the recipient side
    """
    if n < 1:
        raise DomainError(f"recipient count must be >= 1, got {n}")
    if d.side == Side.RECIPIENT:
        raise DescriptorError("recipient-side descriptors are priced with recipient_cost")
    if d.family == StrategyFamily.BASELINE:
        return _baseline_breakdown(d, n, schedule, new_holders)

    plan = [n] if d.family == StrategyFamily.POOLED_MERKLE else batch_plan(n, d.batch_size)
    structure_cache: Dict[int, List[Tuple[Dict[str, int], int, bool]]] = {}
    totals = dict.fromkeys(ITEM_ORDER, 0)
    batches: List[BatchCost] = []
    done = 0
    for b in plan:
        if b not in structure_cache:
            structure_cache[b] = _transactions(d, b, schedule, new_holders)
        if d.family == StrategyFamily.POOLED_MERKLE:
            overhead = round_gas(d.overhead_per_recipient)
        else:
            overhead = _overhead_through(d.overhead_per_recipient, done + b) - _overhead_through(
                d.overhead_per_recipient, done)
        # a reset transaction runs the same batched approval with zero amounts
        for items, refund, reset in structure_cache[b]:
            pre_refund = sum(items.values()) + overhead
            applied = capped_refund(pre_refund, refund)
            for key, value in items.items():
                totals[key] += value
            totals["overhead"] += overhead
            totals["refunds"] -= applied
            batches.append(BatchCost(batch_size=b, gas=pre_refund - applied, reset=reset))
        done += b

    breakdown = CostBreakdown(
        descriptor=d,
        n=n,
        distributor_gas=sum(b.gas for b in batches),
        items=[CostItem(label=k, gas=v) for k, v in totals.items() if v],
        batches=batches,
        new_holders=new_holders,
    )
    if d.family.has_recipient_side:
        each = recipient_cost(d, n, schedule)
        breakdown.recipient_gas_each = each
        breakdown.recipient_gas_total = round_gas(each * n)
    return breakdown


def structural_cost(d: StrategyDescriptor, n: int, schedule: GasSchedule = DEFAULT_SCHEDULE) -> CostBreakdown:
    """Cost with every calibrated residual removed"""
    bare = d.model_copy(update={"overhead_per_recipient": Decimal(0), "claim_overhead": Decimal(0)})
    if d.side == Side.RECIPIENT:
        each, items = pull_claim_items(bare, schedule)
        if d.family == StrategyFamily.POOLED_MERKLE:
            extra = merkle_claim_extra(proof_length(n), schedule)
            each += extra
            items.append(CostItem(label="proof", gas=extra))
        return CostBreakdown(descriptor=bare, n=n, distributor_gas=0, recipient_gas_each=each,
                             recipient_gas_total=round_gas(each * n), items=items)
    return distributor_cost(bare, n, schedule)


def calibrate(d: StrategyDescriptor, target_total: int, n: int,
              schedule: GasSchedule = DEFAULT_SCHEDULE) -> Decimal:
    """
    Per-recipient residual that makes the component model hit a measured total

    Recipient-side descriptors fit the claim residual; PooledMerkle fits a flat
    residual of its single transaction. Rounded to hundredths of a gas unit.
    """
    if d.family == StrategyFamily.BASELINE:
        return Decimal(0)
    bare = structural_cost(d, n, schedule)
    structural = bare.recipient_gas_total if d.side == Side.RECIPIENT else bare.distributor_gas
    if target_total < structural:
        raise CalibrationError(
            f"{d.family.value}: target {target_total} is below structural cost {structural}",
            family=d.family.value,
            items=[(i.label, i.gas) for i in bare.items],
        )
    divisor = 1 if d.family == StrategyFamily.POOLED_MERKLE else n
    epsilon = (Decimal(target_total - structural) / divisor).quantize(CENT, rounding=ROUND_HALF_EVEN)
    logger.debug(f"[calibrate] {d.family.value} bs={d.batch_size} structural={structural} eps={epsilon}")
    return epsilon


def apply_discount(c: CostBreakdown, schedule: GasSchedule = DEFAULT_SCHEDULE) -> CostBreakdown:
    """Re-price fresh recipient slots as updates (recipients already hold the token)"""
    if c.discounted:
        raise DiscountError("breakdown is already discounted")
    if c.n == 0:
        return c
    if c.descriptor.family.has_recipient_side:
        raise DiscountError(f"discount is undefined for {c.descriptor.family.value}")
    if not c.new_holders:
        raise DiscountError("discount requires a breakdown priced with new holders")

    delta = schedule.g_sstore_new - schedule.g_sstore_update
    items = [CostItem(label=i.label, gas=i.gas - c.n * delta if i.label == "storage" else i.gas)
             for i in c.items]
    batches = [BatchCost(batch_size=b.batch_size, gas=b.gas - b.batch_size * delta) for b in c.batches]
    return c.model_copy(update={
        "distributor_gas": c.distributor_gas - c.n * delta,
        "items": items,
        "batches": batches,
        "discounted": True,
    })


# ------------------------------------------------------------
# Block capacity
# ------------------------------------------------------------

def _fraction(fill_grade: FillGrade) -> Fraction:
    value = Fraction(str(fill_grade)) if isinstance(fill_grade, float) else Fraction(fill_grade)
    if not 0 < value <= 1:
        raise DomainError(f"fill grade must be within (0, 1], got {fill_grade}")
    return value


def feasible_grades(max_batch_gas: int, schedule: GasSchedule = DEFAULT_SCHEDULE) -> List[float]:
    return [f for f in FILL_GRADES if max_batch_gas <= _fraction(f) * schedule.block_gas_limit]


def feasibility(d: StrategyDescriptor, n: int, schedule: GasSchedule = DEFAULT_SCHEDULE,
                new_holders: bool = True) -> FeasibilityReport:
    if d.side == Side.RECIPIENT:
        max_batch = ceil(recipient_cost(d, n, schedule))
    else:
        max_batch = max(b.gas for b in distributor_cost(d, n, schedule, new_holders).batches)
    return feasibility_report(max_batch, schedule)


def feasibility_report(max_batch_gas: int, schedule: GasSchedule = DEFAULT_SCHEDULE) -> FeasibilityReport:
    grades = feasible_grades(max_batch_gas, schedule)
    return FeasibilityReport(max_batch_gas=max_batch_gas, feasible_at=grades, infeasible=not grades)


def blocks_needed(total_gas: int, fill_grade: FillGrade = 0.5,
                  schedule: GasSchedule = DEFAULT_SCHEDULE) -> int:
    capacity = _fraction(fill_grade) * schedule.block_gas_limit
    return ceil(Fraction(total_gas) / capacity)
