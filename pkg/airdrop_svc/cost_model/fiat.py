"""
Gas to USD conversion over daily price series
"""
import logging
from datetime import date as Date
from decimal import ROUND_HALF_UP, Decimal, InvalidOperation
from pathlib import Path
from typing import Dict, Union

import pandas as pd
from pydantic import ValidationError

from airdrop_svc.errors import DomainError, PriceSeriesError
from .enums import Side
from .gas_model import DEFAULT_SCHEDULE
from .schemas import GasSchedule, PricePoint, PriceSeries, StrategyDescriptor
from .strategies import distributor_cost, recipient_cost

logger = logging.getLogger(__name__)

GWEI = Decimal("1E-9")
USD_PLACES = Decimal("0.0001")
AVERAGE_PLACES = Decimal("1E-9")
PRICE_HEADER = "date,gas_price_gwei,eth_usd"

Rate = Union[PricePoint, Decimal, str, float]


def usd_per_gas(p: PricePoint) -> Decimal:
    return p.gas_price_gwei * GWEI * p.eth_usd


def _rate(rate: Rate) -> Decimal:
    value = usd_per_gas(rate) if isinstance(rate, PricePoint) else Decimal(str(rate))
    if value <= 0:
        raise DomainError(f"USD per gas must be positive, got {value}")
    return value


def gas_to_usd(gas: int, rate: Rate) -> Decimal:
    return (Decimal(gas) * _rate(rate)).quantize(USD_PLACES, rounding=ROUND_HALF_UP)


def per_recipient_usd(d: StrategyDescriptor, n: int, rate: Rate,
                      schedule: GasSchedule = DEFAULT_SCHEDULE) -> Decimal:
    """USD cost per recipient of the measured side of d, to 4 decimal places"""
    value = _rate(rate)
    if d.side == Side.RECIPIENT:
        per_recipient = recipient_cost(d, n, schedule)
    else:
        per_recipient = Decimal(distributor_cost(d, n, schedule).distributor_gas) / n
    return (per_recipient * value).quantize(USD_PLACES, rounding=ROUND_HALF_UP)


def iso_cost_gas_price(usd_gas: Decimal, eth_usd: Decimal) -> Decimal:
    """Gas price in gwei that costs usd_gas per unit at the given ETH price"""
    usd_gas, eth_usd = Decimal(str(usd_gas)), Decimal(str(eth_usd))
    if usd_gas <= 0 or eth_usd <= 0:
        raise DomainError("iso-cost level and ETH price must be positive")
    return usd_gas / eth_usd / GWEI


# ------------------------------------------------------------
# Series transforms
# ------------------------------------------------------------

def _frame(s: PriceSeries) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "gas_price_gwei": [float(p.gas_price_gwei) for p in s.points],
            "eth_usd": [float(p.eth_usd) for p in s.points],
        },
        index=pd.Index([p.date for p in s.points], name="date"),
    )


def _to_decimal(value: float) -> Decimal:
    return Decimal(repr(float(value))).quantize(AVERAGE_PLACES, rounding=ROUND_HALF_UP)


def moving_average(s: PriceSeries, window: int = 60, centered: bool = True) -> PriceSeries:
    """
    Mean of each full window, both price fields independently

    Args:
        s: Daily series
        window: Window length in days
        centered: Date each mean at the window center; otherwise at its last day

    Returns:
        Series of len(s) - window + 1 points
    """
    if window < 1:
        raise DomainError(f"window must be >= 1, got {window}")
    if len(s) < window:
        raise PriceSeriesError(f"series too short: {len(s)} points for a {window}-day window")

    averaged = _frame(s).rolling(window=window, min_periods=window, center=centered).mean().dropna()
    points = [
        PricePoint(date=day, gas_price_gwei=_to_decimal(row.gas_price_gwei), eth_usd=_to_decimal(row.eth_usd))
        for day, row in zip(averaged.index, averaged.itertuples(index=False))
    ]
    return PriceSeries(points=points)


def price_summary(s: PriceSeries) -> Dict[str, Decimal]:
    """Low, median and high daily gas price in gwei"""
    if not len(s):
        raise PriceSeriesError("empty series")
    gas = _frame(s)["gas_price_gwei"]
    return {
        "low": _to_decimal(gas.min()),
        "median": _to_decimal(gas.median()),
        "high": _to_decimal(gas.max()),
    }


# ------------------------------------------------------------
# Price documents
# ------------------------------------------------------------

def load_prices(text: str) -> PriceSeries:
    """Parse `date,gas_price_gwei,eth_usd` lines after one header line"""
    lines = text.splitlines()
    if not lines or lines[0].strip().lower() != PRICE_HEADER:
        raise PriceSeriesError(f"expected header {PRICE_HEADER!r}", line=1)

    points = []
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        fields = [f.strip() for f in raw.split(",")]
        if len(fields) != 3:
            raise PriceSeriesError(f"expected 3 fields, got {len(fields)}", line=lineno)
        try:
            point = PricePoint(date=Date.fromisoformat(fields[0]),
                               gas_price_gwei=Decimal(fields[1]), eth_usd=Decimal(fields[2]))
        except (ValueError, InvalidOperation, ValidationError) as e:
            raise PriceSeriesError(f"invalid price row {raw!r}: {e}", line=lineno) from e
        if points and point.date <= points[-1].date:
            raise PriceSeriesError(f"date {point.date} does not follow {points[-1].date}", line=lineno)
        points.append(point)
    return PriceSeries(points=points)


def load_prices_file(path: Union[str, Path]) -> PriceSeries:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"price file not found: {path}")
    series = load_prices(path.read_text())
    logger.info(f"[fiat] loaded {len(series)} price points from {path}")
    return series


def export_prices(s: PriceSeries) -> str:
    lines = [PRICE_HEADER]
    lines += [f"{p.date.isoformat()},{p.gas_price_gwei},{p.eth_usd}" for p in s.points]
    return "\n".join(lines) + "\n"
