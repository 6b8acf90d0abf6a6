"""
Merkle distribution schemas
"""
from typing import FrozenSet, List

from eth_utils import is_hex_address
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

MAX_AMOUNT = 2 ** 256 - 1
DIGEST_BYTES = 32


def normalize_address(value: str) -> str:
    text = value.strip().lower()
    if not text.startswith("0x") or not is_hex_address(text):
        raise ValueError(f"address must be 0x followed by 40 hex characters, got {value!r}")
    return text


class Recipient(BaseModel):
    model_config = ConfigDict(frozen=True)

    address: str = Field(..., description="0x-prefixed lowercase hex, 20 bytes")
    amount: int = Field(..., ge=0, le=MAX_AMOUNT)

    @field_validator("address")
    @classmethod
    def _address(cls, value: str) -> str:
        return normalize_address(value)

    @property
    def address_bytes(self) -> bytes:
        return bytes.fromhex(self.address[2:])


class MerkleProof(BaseModel):
    model_config = ConfigDict(frozen=True)

    leaf_index: int = Field(..., ge=0)
    siblings: List[bytes] = Field(default_factory=list)

    def hex_siblings(self) -> List[str]:
        return ["0x" + s.hex() for s in self.siblings]


class MerkleDistribution(BaseModel):
    """Recipients committed under one root; levels[0] holds the leaves"""
    recipients: List[Recipient]
    root: bytes
    depth: int = Field(..., ge=0)
    _levels: List[List[bytes]] = PrivateAttr(default_factory=list)

    @property
    def root_hex(self) -> str:
        return "0x" + self.root.hex()

    @property
    def total_amount(self) -> int:
        return sum(r.amount for r in self.recipients)

    def __len__(self) -> int:
        return len(self.recipients)


class ClaimRegistry(BaseModel):
    """Claim bookkeeping of one pooled distribution; updates return new registries"""
    model_config = ConfigDict(frozen=True)

    root: bytes
    claimed: FrozenSet[str] = frozenset()
    total_allocated: int = Field(..., ge=0)
    total_claimed: int = Field(0, ge=0)
    deadline: int = Field(..., description="Logical time (block height) after which claims close")
    distributor_balance: int = Field(..., ge=0)
    reclaimed: bool = False

    @model_validator(mode="after")
    def _bounded(self) -> "ClaimRegistry":
        if self.total_claimed > self.total_allocated:
            raise ValueError("total_claimed exceeds total_allocated")
        return self

    @property
    def outstanding(self) -> int:
        return self.total_allocated - self.total_claimed


# ------------------------------------------------------------
# Documents
# ------------------------------------------------------------

class ProofEntry(BaseModel):
    address: str
    amount: int
    siblings: List[str] = Field(default_factory=list)


class DistributionDocument(BaseModel):
    """Exported distribution: root, depth and every recipient's proof"""
    root: str
    depth: int
    proofs: List[ProofEntry] = Field(default_factory=list)


class RegistryDocument(BaseModel):
    root: str
    claimed: List[str] = Field(default_factory=list)
    total_allocated: int
    total_claimed: int = 0
    deadline: int
    distributor_balance: int
    reclaimed: bool = False
