"""
Cost model schemas
Pydantic models for the fee schedule, strategy descriptors, itemized costs,
sweep rows and price data
"""
from datetime import date as Date
from decimal import Decimal
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .enums import ScenarioRole, Side, StrategyFamily


FILL_GRADES = (0.10, 0.25, 0.50, 0.75, 1.00)


class GasSchedule(BaseModel):
    """Fee constants; every field is a strictly positive integer"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    g_tx: int = Field(21000, gt=0, description="Intrinsic cost of one transaction")
    g_call_external: int = Field(700, gt=0, description="Message call into a different contract")
    g_call_internal: int = Field(10, gt=0, description="Call within the same contract")
    g_sstore_new: int = Field(20000, gt=0, description="Write to a previously-zero storage slot")
    g_sstore_update: int = Field(5000, gt=0, description="Write to a nonzero storage slot")
    r_sstore_clear: int = Field(15000, gt=0, description="Refund for zeroing a nonzero slot")
    g_calldata_zero: int = Field(4, gt=0, description="Gas per zero calldata byte")
    g_calldata_nonzero: int = Field(68, gt=0, description="Gas per nonzero calldata byte")
    g_log_base: int = Field(375, gt=0)
    g_log_topic: int = Field(375, gt=0)
    g_log_data: int = Field(8, gt=0)
    g_keccak_base: int = Field(30, gt=0)
    g_keccak_word: int = Field(6, gt=0)
    block_gas_limit: int = Field(7_997_671, gt=0, description="Mean block gas limit over 2018")
    block_time_s: int = Field(15, gt=0)

    @model_validator(mode="after")
    def _check_relations(self) -> "GasSchedule":
        if self.g_calldata_nonzero <= self.g_calldata_zero:
            raise ValueError("g_calldata_nonzero must exceed g_calldata_zero")
        if self.g_sstore_new <= self.g_sstore_update:
            raise ValueError("g_sstore_new must exceed g_sstore_update")
        if self.r_sstore_clear >= self.g_sstore_new:
            raise ValueError("r_sstore_clear must be below g_sstore_new")
        return self


class StrategyDescriptor(BaseModel):
    """One airdrop technique variant"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    family: StrategyFamily
    batch_size: int = Field(1, ge=1, description="Recipients per distributor transaction")
    uniform: bool = Field(False, description="One amount per batch instead of one per recipient")
    zero_reset: bool = Field(False, description="Pull only: allowances zeroed before re-approval")
    amount_bytes: int = Field(2, ge=1, le=32, description="Nonzero bytes of each encoded amount")
    overhead_per_recipient: Decimal = Field(
        Decimal("0"), ge=0, decimal_places=2,
        description="Calibrated distributor-side execution residual, gas per recipient"
    )
    claim_overhead: Decimal = Field(
        Decimal("0"), ge=0, decimal_places=2,
        description="Calibrated residual of one recipient claim transaction"
    )
    side: Side = Field(Side.DISTRIBUTOR, description="Which party the scenario measures")

    @model_validator(mode="after")
    def _check_flags(self) -> "StrategyDescriptor":
        if self.zero_reset and self.family != StrategyFamily.INTERNAL_BATCH_PULL:
            raise ValueError("zero_reset applies to InternalBatchPull only")
        if self.side == Side.RECIPIENT and not self.family.has_recipient_side:
            raise ValueError(f"{self.family.value} has no recipient side")
        if self.family == StrategyFamily.NAIVE_PUSH and self.batch_size != 1:
            raise ValueError("NaivePush sends one transaction per recipient")
        return self


class CostItem(BaseModel):
    label: str
    gas: int


class BatchCost(BaseModel):
    batch_size: int = Field(..., ge=1)
    gas: int
    reset: bool = Field(False, description="Allowance reset transaction preceding a pull approval batch")


class CostBreakdown(BaseModel):
    """Itemized gas for both sides of one strategy at n recipients"""
    descriptor: StrategyDescriptor
    n: int = Field(..., ge=0)
    distributor_gas: int
    recipient_gas_each: Decimal = Decimal("0")
    recipient_gas_total: int = 0
    items: List[CostItem] = Field(default_factory=list)
    batches: List[BatchCost] = Field(default_factory=list)
    new_holders: bool = True
    discounted: bool = False

    @property
    def total_gas(self) -> int:
        return self.distributor_gas + self.recipient_gas_total

    def item(self, label: str) -> int:
        return sum(i.gas for i in self.items if i.label == label)


class FeasibilityReport(BaseModel):
    max_batch_gas: int
    feasible_at: List[float] = Field(default_factory=list)
    infeasible: bool

    @property
    def min_fill_grade(self) -> Optional[float]:
        return self.feasible_at[0] if self.feasible_at else None


class Scenario(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    descriptor: StrategyDescriptor
    role: ScenarioRole = ScenarioRole.MEASURED


class SweepRow(BaseModel):
    label: str
    n: int
    distributor_gas: int
    recipient_gas_total: int
    total_gas: int
    discounted_gas: Optional[int] = None
    blocks_at_half_fill: int
    feasible_at: List[float] = Field(default_factory=list)


class PricePoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    date: Date
    gas_price_gwei: Decimal = Field(..., gt=0, description="Gas price in gwei (1e-9 ETH per gas)")
    eth_usd: Decimal = Field(..., gt=0, description="USD per ETH")


class PriceSeries(BaseModel):
    points: List[PricePoint] = Field(default_factory=list)

    @field_validator("points")
    @classmethod
    def _strictly_increasing(cls, points: List[PricePoint]) -> List[PricePoint]:
        for prev, cur in zip(points, points[1:]):
            if cur.date <= prev.date:
                raise ValueError(f"dates must strictly increase: {prev.date} then {cur.date}")
        return points

    def __len__(self) -> int:
        return len(self.points)


class OmiseGoEstimate(BaseModel):
    recipients: int
    total_gas: int
    usd: Decimal
    blocks: int
    duration_s: int
    published_blocks: int = Field(1440, description="Block count quoted for this airdrop in public analyses")
    published_duration_s: int = 6 * 3600
    discrepancy: bool
