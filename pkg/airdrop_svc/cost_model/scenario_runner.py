"""
Scenario runner: the 35 benchmark scenarios, recipient-count sweeps and
plot/table exports
"""
import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from decimal import ROUND_HALF_UP, Decimal, InvalidOperation
from math import ceil
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from airdrop_svc import config
from airdrop_svc.errors import DomainError
from .calibration import CalibrationTable, calibrated, default_table
from .enums import ExportFormat, ScenarioRole, Side
from .gas_model import DEFAULT_SCHEDULE
from .labels import BASELINE_PREFIX, NAIVE_PUSH, RECIPIENT_COST, SEP, parse_label
from .schemas import FILL_GRADES, GasSchedule, OmiseGoEstimate, Scenario, StrategyDescriptor, SweepRow
from .strategies import (
    apply_discount,
    blocks_needed,
    distributor_cost,
    feasibility_report,
    recipient_cost,
    round_gas,
)

logger = logging.getLogger(__name__)

BATCH_SIZES = (100, 200, 300, 400)
BASELINE_BATCH_SIZES = (100, 200, 300, 400, 500, 600, 700, 800)
DEFAULT_N_VALUES = list(range(100, 5001, 100))
PLOT_UNIT = Decimal(10) ** 5

TABLE_FIELDS = ["label", "n", "distributor_gas", "recipient_gas_total", "total_gas",
                "discounted_gas", "blocks_at_half_fill", "feasible_at"]

OMISEGO_AIRDROPS = 450
OMISEGO_RECIPIENTS_PER_AIRDROP = 1000
OMISEGO_LABEL = "EXTERNAL_BATCH|PUSH|100"


def _scenario(label: str, role: ScenarioRole = ScenarioRole.MEASURED) -> Scenario:
    return Scenario(label=label, descriptor=parse_label(label), role=role)


def enumerate_scenarios() -> List[Scenario]:
    """The 35 benchmark scenarios in a stable order"""
    scenarios: List[Scenario] = []
    for prefix in ("EXTERNAL_BATCH|PUSH", "INTERNAL_BATCH|PUSH"):
        for flags in ("|UNIFORM", ""):
            scenarios += [_scenario(f"{prefix}{flags}{SEP}{bs}") for bs in BATCH_SIZES]

    scenarios += [_scenario(f"INTERNAL_BATCH|PULL|UNIFORM{SEP}{bs}") for bs in BATCH_SIZES]
    scenarios.append(_scenario("INTERNAL_BATCH|PULL|UNIFORM|1"))
    scenarios += [_scenario(f"INTERNAL_BATCH|PULL{SEP}{bs}") for bs in BATCH_SIZES]
    scenarios.append(_scenario(RECIPIENT_COST))

    scenarios.append(_scenario(NAIVE_PUSH, ScenarioRole.UPPER_BOUND))
    scenarios += [_scenario(f"{BASELINE_PREFIX}{SEP}{bs}", ScenarioRole.LOWER_BOUND)
                  for bs in BASELINE_BATCH_SIZES]
    return scenarios


def parse_n_range(text: str) -> List[int]:
    """`A:B:STEP` inclusive of B when reached"""
    parts = text.split(":")
    if len(parts) != 3 or not all(p.strip().isdigit() for p in parts):
        raise DomainError(f"n range must be A:B:STEP with positive integers, got {text!r}")
    start, stop, step = (int(p) for p in parts)
    if start < 1 or step < 1 or stop < start:
        raise DomainError(f"n range must satisfy 1 <= A <= B and STEP >= 1, got {text!r}")
    return list(range(start, stop + 1, step))


# ------------------------------------------------------------
# Sweep
# ------------------------------------------------------------

def evaluate(label: str, d: StrategyDescriptor, n: int, discounted: bool = False,
             schedule: GasSchedule = DEFAULT_SCHEDULE) -> SweepRow:
    """One sweep row for an already-calibrated descriptor"""
    if d.side == Side.RECIPIENT:
        each = recipient_cost(d, n, schedule)
        distributor_gas, recipient_total = 0, round_gas(each * n)
        max_batch = ceil(each)
        discounted_gas = None
    else:
        breakdown = distributor_cost(d, n, schedule)
        distributor_gas, recipient_total = breakdown.distributor_gas, 0
        discounted_gas = None
        if discounted:
            breakdown = apply_discount(breakdown, schedule)
            discounted_gas = breakdown.distributor_gas
        max_batch = max(b.gas for b in breakdown.batches)

    total = distributor_gas + recipient_total
    return SweepRow(
        label=label,
        n=n,
        distributor_gas=distributor_gas,
        recipient_gas_total=recipient_total,
        total_gas=total,
        discounted_gas=discounted_gas,
        blocks_at_half_fill=blocks_needed(discounted_gas if discounted_gas is not None else total,
                                          0.5, schedule),
        feasible_at=feasibility_report(max_batch, schedule).feasible_at,
    )


def run_sweep(scenarios: Sequence[Scenario], n_values: Iterable[int], discounted: bool = False,
              fill_grade: Optional[float] = None, schedule: GasSchedule = DEFAULT_SCHEDULE,
              table: Optional[CalibrationTable] = None) -> List[SweepRow]:
    """
    Evaluate every (scenario, n) pair

    Args:
        scenarios: Scenarios to evaluate
        n_values: Recipient counts
        discounted: Price recipients as existing holders; pull-style scenarios are dropped
        fill_grade: Keep only scenarios whose every batch fits this share of a block
        table: Calibration table, the process default when omitted

    Returns:
        Rows ordered by (label, n)
    """
    n_values = list(n_values)
    if fill_grade is not None and fill_grade not in FILL_GRADES:
        raise DomainError(f"fill grade must be one of {FILL_GRADES}, got {fill_grade}")
    if any(n < 1 for n in n_values):
        raise DomainError("recipient counts must be >= 1")
    table = table or default_table(schedule)

    if discounted:
        dropped = [s.label for s in scenarios if s.descriptor.family.has_recipient_side]
        if dropped:
            logger.info(f"[sweep] discounted sweep drops {len(dropped)} pull-style scenarios")
        scenarios = [s for s in scenarios if not s.descriptor.family.has_recipient_side]

    descriptors = {s.label: calibrated(s.descriptor, schedule, table) for s in scenarios}
    jobs: List[Tuple[str, int]] = [(s.label, n) for s in scenarios for n in n_values]

    with ThreadPoolExecutor(max_workers=config.sweep_workers()) as executor:
        rows = list(executor.map(
            lambda job: evaluate(job[0], descriptors[job[0]], job[1], discounted, schedule), jobs))

    if fill_grade is not None:
        failing = {r.label for r in rows if fill_grade not in r.feasible_at}
        if failing:
            logger.info(f"[sweep] {len(failing)} scenarios exceed {fill_grade:.0%} fill and are filtered")
        rows = [r for r in rows if r.label not in failing]

    rows.sort(key=lambda r: (r.label, r.n))
    logger.info(f"[sweep] {len(rows)} rows over {len(descriptors)} scenarios")
    return rows


# ------------------------------------------------------------
# Export
# ------------------------------------------------------------

def plot_gas(row: SweepRow) -> int:
    return row.discounted_gas if row.discounted_gas is not None else row.total_gas


def _plot_units(gas: int) -> str:
    return f"{(Decimal(gas) / PLOT_UNIT).normalize():f}"


def export_rows(rows: Sequence[SweepRow], fmt: ExportFormat = ExportFormat.TABLE,
                scaled: bool = True) -> str:
    try:
        fmt = ExportFormat(fmt)
    except ValueError:
        raise DomainError(f"unknown export format {fmt!r}")
    if fmt == ExportFormat.PLOT_PAIRS:
        return "".join(
            f"{r.n} {_plot_units(plot_gas(r)) if scaled else plot_gas(r)}\n" for r in rows)

    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=TABLE_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        record = r.model_dump()
        record["discounted_gas"] = "" if r.discounted_gas is None else r.discounted_gas
        record["feasible_at"] = ";".join(f"{f:g}" for f in r.feasible_at)
        writer.writerow(record)
    return buffer.getvalue()


def parse_rows(text: str) -> List[SweepRow]:
    """Inverse of the table export"""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != TABLE_FIELDS:
        raise DomainError(f"table header must be {','.join(TABLE_FIELDS)}")
    rows = []
    for record in reader:
        rows.append(SweepRow(
            label=record["label"],
            n=int(record["n"]),
            distributor_gas=int(record["distributor_gas"]),
            recipient_gas_total=int(record["recipient_gas_total"]),
            total_gas=int(record["total_gas"]),
            discounted_gas=int(record["discounted_gas"]) if record["discounted_gas"] else None,
            blocks_at_half_fill=int(record["blocks_at_half_fill"]),
            feasible_at=[float(f) for f in record["feasible_at"].split(";") if f],
        ))
    return rows


def group_by_label(rows: Iterable[SweepRow]) -> Dict[str, List[SweepRow]]:
    groups: Dict[str, List[SweepRow]] = {}
    for r in rows:
        groups.setdefault(r.label, []).append(r)
    return groups


def plot_file_name(label: str) -> str:
    return label.replace(SEP, "_").lower() + ".dat"


# ------------------------------------------------------------
# OmiseGO cross-check
# ------------------------------------------------------------

def omisego_estimate(schedule: GasSchedule = DEFAULT_SCHEDULE, usd_per_gas: Decimal = Decimal("3.0002E-6"),
                     table: Optional[CalibrationTable] = None) -> OmiseGoEstimate:
    """450 externally batched non-uniform airdrops of 1000 recipients each"""
    try:
        usd_per_gas = Decimal(str(usd_per_gas))
    except InvalidOperation:
        raise DomainError(f"usd_per_gas must be a number, got {usd_per_gas!r}")
    if usd_per_gas <= 0:
        raise DomainError(f"usd_per_gas must be positive, got {usd_per_gas}")
    d = calibrated(OMISEGO_LABEL, schedule, table)
    per_airdrop = distributor_cost(d, OMISEGO_RECIPIENTS_PER_AIRDROP, schedule).distributor_gas
    total = OMISEGO_AIRDROPS * per_airdrop
    blocks = blocks_needed(total, 0.5, schedule)
    estimate = OmiseGoEstimate(
        recipients=OMISEGO_AIRDROPS * OMISEGO_RECIPIENTS_PER_AIRDROP,
        total_gas=total,
        usd=(total * usd_per_gas).quantize(Decimal("0.0001"), rounding=ROUND_HALF_UP),
        blocks=blocks,
        duration_s=blocks * schedule.block_time_s,
        discrepancy=False,
    )
    estimate.discrepancy = estimate.blocks != estimate.published_blocks
    if estimate.discrepancy:
        logger.info(f"[omisego] model needs {blocks} half-filled blocks, "
                    f"published count is {estimate.published_blocks}")
    return estimate

