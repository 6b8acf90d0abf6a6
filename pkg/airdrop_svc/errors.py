"""
Exception hierarchy for the airdrop cost service
All errors derive from ValueError so callers that only know the standard
library can still catch them
"""
from typing import Dict, List, Optional, Tuple


class AirdropError(ValueError):
    """Root of every domain error raised by this package"""


class DomainError(AirdropError):
    """Argument outside the domain of a cost function"""


class ScheduleError(AirdropError):
    """Invalid fee schedule or schedule override file"""


class LabelError(AirdropError):
    """Strategy label cannot be parsed"""


class DescriptorError(AirdropError):
    """Strategy descriptor carries incompatible flags"""


class DiscountError(AirdropError):
    """Discount requested for a breakdown where it is undefined"""


class CalibrationError(AirdropError):
    """Calibration target unreachable or calibration entry missing"""

    def __init__(self, message: str, family: Optional[str] = None,
                 items: Optional[List[Tuple[str, int]]] = None):
        super().__init__(message)
        self.family = family
        self.items = items or []

    def itemization(self) -> Dict[str, int]:
        return dict(self.items)


class PriceSeriesError(AirdropError):
    """Malformed or non-monotone price document"""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class MerkleError(AirdropError):
    """Invalid recipient list or proof request"""


class ClaimError(AirdropError):
    """Base for rejected claim registry operations"""


class AlreadyClaimed(ClaimError):
    pass


class InvalidProof(ClaimError):
    pass


class PastDeadline(ClaimError):
    pass


class BeforeDeadline(ClaimError):
    pass


class AlreadyReclaimed(ClaimError):
    pass


class UsageError(AirdropError):
    """Malformed command-line input"""
