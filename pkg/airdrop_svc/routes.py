"""
Flask Blueprint for the cost model JSON API

Endpoints:
- POST /api/cost            itemized cost of one strategy
- POST /api/feasibility     fill grades a strategy's batches fit
- POST /api/merkle/verify   check a proof against a root
- POST /api/merkle/claim-gas
- POST /api/fiat            USD cost at a price point
"""
import logging
from datetime import date as Date
from decimal import Decimal
from typing import List, Optional

from flask import Blueprint, jsonify, request
from pydantic import BaseModel, Field, ValidationError

from airdrop_svc.cost_model import fiat
from airdrop_svc.cost_model.calibration import default_table
from airdrop_svc.cost_model.enums import Side
from airdrop_svc.cost_model.gas_model import load_schedule
from airdrop_svc.cost_model.labels import format_label, parse_label
from airdrop_svc.cost_model.schemas import PricePoint, StrategyDescriptor
from airdrop_svc.cost_model.strategies import (
    apply_discount,
    blocks_needed,
    distributor_cost,
    feasibility,
    recipient_cost,
    round_gas,
)
from airdrop_svc.errors import AirdropError, DiscountError
from airdrop_svc.merkle import claim_gas_estimate, verify
from airdrop_svc.merkle.distribution import parse_hex
from airdrop_svc.merkle.schemas import MerkleProof, Recipient

airdrop_bp = Blueprint('airdrop', __name__, url_prefix='/api')


# ============================================================
# REQUEST SCHEMAS
# ============================================================

class CostRequest(BaseModel):
    label: str
    recipients: int = Field(..., ge=1)
    batch_size: Optional[int] = Field(None, ge=1)
    uniform: bool = False
    zero_reset: bool = False
    discounted: bool = False


class VerifyRequest(BaseModel):
    root: str
    address: str
    amount: int = Field(..., ge=0)
    siblings: List[str] = Field(default_factory=list)


class ClaimGasRequest(BaseModel):
    recipients: int = Field(..., ge=1)
    amount_bytes: int = Field(2, ge=1, le=32)


class FiatRequest(BaseModel):
    gas_price_gwei: Decimal = Field(..., gt=0)
    eth_usd: Decimal = Field(..., gt=0)
    gas: Optional[int] = Field(None, ge=0)
    label: Optional[str] = None
    recipients: Optional[int] = Field(None, ge=1)


# ============================================================
# HELPER FUNCTIONS
# ============================================================

def _error(message: str, status: int):
    return jsonify({"error": message, "success": False}), status


def _descriptor(req: CostRequest) -> StrategyDescriptor:
    d = parse_label(req.label)
    update = {"uniform": d.uniform or req.uniform, "zero_reset": d.zero_reset or req.zero_reset}
    if req.batch_size:
        update["batch_size"] = req.batch_size
    d = StrategyDescriptor(**{**d.model_dump(), **update})
    return default_table(load_schedule()).apply(d)


def _handle(handler, schema):
    """Validate the JSON body against schema and map domain errors to 400"""
    try:
        payload = schema.model_validate(request.get_json(silent=True) or {})
        return handler(payload)
    except ValidationError as e:
        return _error(f"invalid request: {e.errors()[0]['loc']} {e.errors()[0]['msg']}", 400)
    except AirdropError as e:
        return _error(str(e), 400)
    except Exception as e:
        logging.error(f"Error in {request.path}: {str(e)}")
        return _error(str(e), 500)


# ============================================================
# COST MODEL ENDPOINTS
# ============================================================

def _cost(req: CostRequest):
    schedule = load_schedule()
    d = _descriptor(req)
    if d.side == Side.RECIPIENT:
        if req.discounted:
            raise DiscountError("discount is undefined for the recipient side")
        each = recipient_cost(d, req.recipients, schedule)
        total = round_gas(each * req.recipients)
        body = {"recipient_gas_each": str(each), "recipient_gas_total": total, "total_gas": total}
    else:
        breakdown = distributor_cost(d, req.recipients, schedule)
        if req.discounted:
            breakdown = apply_discount(breakdown, schedule)
        total = breakdown.total_gas
        body = {
            "items": {i.label: i.gas for i in breakdown.items},
            "batches": [b.model_dump() for b in breakdown.batches],
            "distributor_gas": breakdown.distributor_gas,
            "recipient_gas_each": str(breakdown.recipient_gas_each),
            "recipient_gas_total": breakdown.recipient_gas_total,
            "total_gas": total,
            "discounted": breakdown.discounted,
        }
    report = feasibility(d, req.recipients, schedule)
    body.update({
        "label": format_label(d),
        "recipients": req.recipients,
        "feasible_at": report.feasible_at,
        "blocks_at_half_fill": blocks_needed(total, 0.5, schedule),
        "success": True,
    })
    return jsonify(body), 200


@airdrop_bp.route('/cost', methods=['POST'])
def cost():
    """
    Itemized gas cost of one strategy

    Request body:
    {
        "label": "INTERNAL_BATCH|PUSH|UNIFORM|100",  # Required
        "recipients": 1000,                          # Required
        "batch_size": 200,                           # Optional: overrides the label
        "discounted": false                          # Optional: recipients already hold the token
    }
    """
    return _handle(_cost, CostRequest)


def _feasibility(req: CostRequest):
    report = feasibility(_descriptor(req), req.recipients, load_schedule())
    return jsonify({**report.model_dump(), "min_fill_grade": report.min_fill_grade, "success": True}), 200


@airdrop_bp.route('/feasibility', methods=['POST'])
def feasibility_check():
    return _handle(_feasibility, CostRequest)


# ============================================================
# MERKLE ENDPOINTS
# ============================================================

def _verify(req: VerifyRequest):
    recipient = Recipient(address=req.address, amount=req.amount)
    proof = MerkleProof(leaf_index=0, siblings=[parse_hex(s) for s in req.siblings])
    return jsonify({"accepted": verify(parse_hex(req.root), recipient, proof), "success": True}), 200


@airdrop_bp.route('/merkle/verify', methods=['POST'])
def merkle_verify():
    return _handle(_verify, VerifyRequest)


def _claim_gas(req: ClaimGasRequest):
    gas = claim_gas_estimate(req.recipients, load_schedule(), amount_bytes=req.amount_bytes)
    return jsonify({"recipients": req.recipients, "claim_gas": str(gas), "success": True}), 200


@airdrop_bp.route('/merkle/claim-gas', methods=['POST'])
def merkle_claim_gas():
    return _handle(_claim_gas, ClaimGasRequest)


# ============================================================
# FIAT ENDPOINTS
# ============================================================

def _fiat(req: FiatRequest):
    point = PricePoint(date=Date.today(), gas_price_gwei=req.gas_price_gwei, eth_usd=req.eth_usd)
    rate = fiat.usd_per_gas(point)
    body = {"usd_per_gas": str(rate), "success": True}
    if req.gas is not None:
        body["usd"] = str(fiat.gas_to_usd(req.gas, rate))
    if req.label:
        if not req.recipients:
            return _error("'label' requires 'recipients'", 400)
        d = _descriptor(CostRequest(label=req.label, recipients=req.recipients))
        body["usd_per_recipient"] = str(fiat.per_recipient_usd(d, req.recipients, rate, load_schedule()))
    return jsonify(body), 200


@airdrop_bp.route('/fiat', methods=['POST'])
def fiat_convert():
    return _handle(_fiat, FiatRequest)
