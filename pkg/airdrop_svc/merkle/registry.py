"""
Claim registry of a pooled distribution and claim gas estimate

Registries are immutable; claim and reclaim return an updated copy and leave
the input untouched on rejection. Callers serialize writes.
"""
import logging
from decimal import Decimal
from typing import Optional, Tuple

from pydantic import ValidationError

from airdrop_svc.cost_model.calibration import CalibrationTable, default_table
from airdrop_svc.cost_model.enums import StrategyFamily
from airdrop_svc.cost_model.gas_model import DEFAULT_SCHEDULE
from airdrop_svc.cost_model.labels import RECIPIENT_COST
from airdrop_svc.cost_model.schemas import GasSchedule, StrategyDescriptor
from airdrop_svc.cost_model.strategies import recipient_cost
from airdrop_svc.errors import (
    AlreadyClaimed,
    AlreadyReclaimed,
    BeforeDeadline,
    ClaimError,
    InvalidProof,
    MerkleError,
    PastDeadline,
)
from .distribution import parse_hex, verify
from .schemas import ClaimRegistry, MerkleDistribution, MerkleProof, Recipient, RegistryDocument

logger = logging.getLogger(__name__)


def open_registry(dist: MerkleDistribution, deadline: int,
                  distributor_balance: Optional[int] = None) -> ClaimRegistry:
    """Registry for a freshly published root; the pool is funded with the full allocation by default"""
    total = dist.total_amount
    balance = total if distributor_balance is None else distributor_balance
    if balance < total:
        raise ClaimError(f"pool balance {balance} does not cover allocation {total}")
    return ClaimRegistry(root=dist.root, total_allocated=total, deadline=deadline,
                         distributor_balance=balance)


def claim(registry: ClaimRegistry, recipient: Recipient, proof: MerkleProof, now: int) -> ClaimRegistry:
    if registry.reclaimed or now > registry.deadline:
        raise PastDeadline(f"claims closed at {registry.deadline}, now {now}")
    if recipient.address in registry.claimed:
        raise AlreadyClaimed(f"{recipient.address} has already claimed")
    if not verify(registry.root, recipient, proof):
        raise InvalidProof(f"proof does not match root for {recipient.address}")
    if recipient.amount > registry.distributor_balance:
        raise ClaimError(f"pool balance {registry.distributor_balance} below claim {recipient.amount}")

    logger.debug(f"[claim] {recipient.address} claims {recipient.amount}")
    return registry.model_copy(update={
        "claimed": registry.claimed | {recipient.address},
        "total_claimed": registry.total_claimed + recipient.amount,
        "distributor_balance": registry.distributor_balance - recipient.amount,
    })


def reclaim(registry: ClaimRegistry, now: int) -> Tuple[ClaimRegistry, int]:
    """Return unclaimed tokens to the distributor once the deadline has passed"""
    if now <= registry.deadline:
        raise BeforeDeadline(f"reclaim opens after {registry.deadline}, now {now}")
    if registry.reclaimed:
        raise AlreadyReclaimed("unclaimed tokens were already returned")
    returned = registry.outstanding
    updated = registry.model_copy(update={
        "reclaimed": True,
        "distributor_balance": registry.distributor_balance - returned,
    })
    logger.info(f"[reclaim] returned {returned} of {registry.total_allocated}")
    return updated, returned


def claim_gas_estimate(n: int, schedule: GasSchedule = DEFAULT_SCHEDULE, amount_bytes: int = 2,
                       table: Optional[CalibrationTable] = None) -> Decimal:
    """Gas of one claim against a pooled distribution of n recipients"""
    claim_overhead = (table or default_table(schedule)).entries.get(RECIPIENT_COST, Decimal(0))
    d = StrategyDescriptor(family=StrategyFamily.POOLED_MERKLE, amount_bytes=amount_bytes,
                           claim_overhead=claim_overhead)
    return recipient_cost(d, n, schedule)


# ------------------------------------------------------------
# Registry documents
# ------------------------------------------------------------

def to_document(registry: ClaimRegistry) -> RegistryDocument:
    return RegistryDocument(
        root="0x" + registry.root.hex(),
        claimed=sorted(registry.claimed),
        total_allocated=registry.total_allocated,
        total_claimed=registry.total_claimed,
        deadline=registry.deadline,
        distributor_balance=registry.distributor_balance,
        reclaimed=registry.reclaimed,
    )


def export_registry(registry: ClaimRegistry) -> str:
    return to_document(registry).model_dump_json(indent=2) + "\n"


def load_registry(text: str) -> ClaimRegistry:
    try:
        doc = RegistryDocument.model_validate_json(text)
        return ClaimRegistry(
            root=parse_hex(doc.root),
            claimed=frozenset(doc.claimed),
            total_allocated=doc.total_allocated,
            total_claimed=doc.total_claimed,
            deadline=doc.deadline,
            distributor_balance=doc.distributor_balance,
            reclaimed=doc.reclaimed,
        )
    except ValidationError as e:
        raise MerkleError(f"invalid registry document: {e.errors()[0]['msg']}") from e
