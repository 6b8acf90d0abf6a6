"""
Merkle commitment over (address, amount) pairs

leaf   = keccak(0x00 | address | amount as 32-byte big-endian)
parent = keccak(0x01 | min(a, b) | max(a, b))
An unpaired node is promoted unchanged to the next level.
"""
import logging
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

from eth_utils import keccak
from pydantic import ValidationError

from airdrop_svc.errors import MerkleError
from .schemas import (
    DIGEST_BYTES,
    DistributionDocument,
    MerkleDistribution,
    MerkleProof,
    ProofEntry,
    Recipient,
)

logger = logging.getLogger(__name__)

LEAF_PREFIX = b"\x00"
NODE_PREFIX = b"\x01"


def leaf_hash(recipient: Recipient) -> bytes:
    return keccak(LEAF_PREFIX + recipient.address_bytes + recipient.amount.to_bytes(32, "big"))


def node_hash(a: bytes, b: bytes) -> bytes:
    low, high = (a, b) if a <= b else (b, a)
    return keccak(NODE_PREFIX + low + high)


def _levels(leaves: List[bytes]) -> List[List[bytes]]:
    levels = [leaves]
    while len(levels[-1]) > 1:
        level = levels[-1]
        parents = [node_hash(level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            parents.append(level[-1])
        levels.append(parents)
    return levels


def build(recipients: Sequence[Recipient]) -> MerkleDistribution:
    if not recipients:
        raise MerkleError("recipient list is empty")
    seen = set()
    for r in recipients:
        if r.address in seen:
            raise MerkleError(f"duplicate recipient address {r.address}")
        seen.add(r.address)

    levels = _levels([leaf_hash(r) for r in recipients])
    dist = MerkleDistribution(recipients=list(recipients), root=levels[-1][0], depth=len(levels) - 1)
    dist._levels = levels
    logger.debug(f"[merkle] built root {dist.root_hex} over {len(recipients)} recipients")
    return dist


def prove(dist: MerkleDistribution, index: int) -> MerkleProof:
    n = len(dist.recipients)
    if not 0 <= index < n:
        raise MerkleError(f"index {index} out of range for {n} recipients")
    if not dist._levels:
        dist._levels = _levels([leaf_hash(r) for r in dist.recipients])

    siblings = []
    position = index
    for level in dist._levels[:-1]:
        partner = position ^ 1
        # promoted nodes have no partner at this level
        if partner < len(level):
            siblings.append(level[partner])
        position //= 2
    return MerkleProof(leaf_index=index, siblings=siblings)


def verify(root: bytes, recipient: Recipient, proof: MerkleProof) -> bool:
    """Accept iff folding the proof from the recipient's leaf reproduces root; never raises"""
    try:
        if len(root) != DIGEST_BYTES or any(len(s) != DIGEST_BYTES for s in proof.siblings):
            return False
        node = leaf_hash(recipient)
        for sibling in proof.siblings:
            node = node_hash(node, sibling)
        return node == root
    except (TypeError, ValueError, AttributeError):
        return False


# ------------------------------------------------------------
# Recipient files and distribution documents
# ------------------------------------------------------------

def parse_recipients(text: str) -> List[Recipient]:
    """One `0x<40 hex>,<decimal amount>` per line; blank lines and # comments skipped"""
    recipients = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        address, sep, amount = line.partition(",")
        if not sep or not amount.strip().isdigit():
            raise MerkleError(f"line {lineno}: expected address,amount, got {raw!r}")
        try:
            recipients.append(Recipient(address=address, amount=int(amount)))
        except ValidationError as e:
            raise MerkleError(f"line {lineno}: {e.errors()[0]['msg']}") from e
    return recipients


def load_recipients(path: Union[str, Path]) -> List[Recipient]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"recipient file not found: {path}")
    return parse_recipients(path.read_text())


def export_recipients(recipients: Iterable[Recipient]) -> str:
    return "".join(f"{r.address},{r.amount}\n" for r in recipients)


def to_document(dist: MerkleDistribution) -> DistributionDocument:
    proofs = [
        ProofEntry(address=r.address, amount=r.amount, siblings=prove(dist, i).hex_siblings())
        for i, r in enumerate(dist.recipients)
    ]
    return DistributionDocument(root=dist.root_hex, depth=dist.depth, proofs=proofs)


def export_distribution(dist: MerkleDistribution) -> str:
    return to_document(dist).model_dump_json(indent=2) + "\n"


def parse_hex(value: str, length: int = DIGEST_BYTES) -> bytes:
    text = value.strip()
    if text.startswith(("0x", "0X")):
        text = text[2:]
    try:
        raw = bytes.fromhex(text)
    except ValueError as e:
        raise MerkleError(f"not a hex string: {value!r}") from e
    if len(raw) != length:
        raise MerkleError(f"expected {length} bytes, got {len(raw)}")
    return raw


def load_distribution(text: str) -> DistributionDocument:
    try:
        return DistributionDocument.model_validate_json(text)
    except ValidationError as e:
        raise MerkleError(f"invalid distribution document: {e.errors()[0]['msg']}") from e


def entry_claim(doc: DistributionDocument, index: int) -> Tuple[Recipient, MerkleProof]:
    """Recipient and proof stored at index of an exported document"""
    if not 0 <= index < len(doc.proofs):
        raise MerkleError(f"index {index} out of range for {len(doc.proofs)} recipients")
    entry = doc.proofs[index]
    siblings = [parse_hex(s) for s in entry.siblings]
    return Recipient(address=entry.address, amount=entry.amount), MerkleProof(leaf_index=index, siblings=siblings)


def find_entry(doc: DistributionDocument, address: str) -> int:
    target = address.strip().lower()
    for i, entry in enumerate(doc.proofs):
        if entry.address == target:
            return i
    raise MerkleError(f"address {address} is not in the distribution")
