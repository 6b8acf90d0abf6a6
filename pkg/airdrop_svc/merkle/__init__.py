"""
Pooled-payment Merkle distributions
"""
from .distribution import build, prove, verify
from .registry import claim, claim_gas_estimate, open_registry, reclaim
from .schemas import ClaimRegistry, MerkleDistribution, MerkleProof, Recipient

__all__ = [
    "build",
    "prove",
    "verify",
    "claim",
    "claim_gas_estimate",
    "open_registry",
    "reclaim",
    "ClaimRegistry",
    "MerkleDistribution",
    "MerkleProof",
    "Recipient",
]
