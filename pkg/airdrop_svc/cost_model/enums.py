"""
Enums for the airdrop cost model
Controlled vocabulary for strategy families, cost sides and scenario roles
"""
from enum import Enum


class StrategyFamily(str, Enum):
    NAIVE_PUSH = "NaivePush"
    EXTERNAL_BATCH_PUSH = "ExternalBatchPush"
    INTERNAL_BATCH_PUSH = "InternalBatchPush"
    INTERNAL_BATCH_PULL = "InternalBatchPull"
    POOLED_MERKLE = "PooledMerkle"
    BASELINE = "Baseline"

    @property
    def is_push(self) -> bool:
        return self in (StrategyFamily.NAIVE_PUSH, StrategyFamily.EXTERNAL_BATCH_PUSH,
                        StrategyFamily.INTERNAL_BATCH_PUSH)

    @property
    def has_recipient_side(self) -> bool:
        return self in (StrategyFamily.INTERNAL_BATCH_PULL, StrategyFamily.POOLED_MERKLE)


class Side(str, Enum):
    DISTRIBUTOR = "distributor"
    RECIPIENT = "recipient"


class ScenarioRole(str, Enum):
    MEASURED = "measured"
    UPPER_BOUND = "upper_bound"
    LOWER_BOUND = "lower_bound"


class ExportFormat(str, Enum):
    PLOT_PAIRS = "plot-pairs"
    TABLE = "table"
