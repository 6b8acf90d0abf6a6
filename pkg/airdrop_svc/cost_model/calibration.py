"""
Calibration table: fitted residuals keyed by strategy label

The table is fitted from measured strategy totals (fixtures/fig7.csv) at
n=1000, or loaded from a persisted `label=epsilon` file.
"""
import csv
import io
import logging
import threading
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

from airdrop_svc import config
from airdrop_svc.errors import CalibrationError, LabelError
from .enums import Side, StrategyFamily
from .gas_model import DEFAULT_SCHEDULE
from .labels import RECIPIENT_COST, calibration_key, parse_label
from .schemas import GasSchedule, StrategyDescriptor
from .strategies import calibrate

logger = logging.getLogger(__name__)

CALIBRATION_N = 1000


def parse_targets(text: str) -> Dict[str, int]:
    """Parse a `label,gas` csv with header into {canonical label: gas}"""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != ["label", "gas"]:
        raise CalibrationError(f"targets header must be 'label,gas', got {header}")
    targets: Dict[str, int] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or not "".join(row).strip():
            continue
        if len(row) != 2:
            raise CalibrationError(f"line {lineno}: expected label,gas, got {row}")
        try:
            d = parse_label(row[0])
            gas = int(row[1])
        except (LabelError, ValueError) as e:
            raise CalibrationError(f"line {lineno}: {e}") from e
        targets[calibration_key(d)] = gas
    return targets


def load_targets(path: Union[str, Path]) -> Dict[str, int]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"targets file not found: {path}")
    return parse_targets(path.read_text())


class CalibrationTable:
    """Fitted residual per measured scenario label"""

    def __init__(self, entries: Optional[Dict[str, Decimal]] = None):
        self.entries: Dict[str, Decimal] = dict(entries or {})

    @classmethod
    def fit(cls, targets: Dict[str, int], n: int = CALIBRATION_N,
            schedule: GasSchedule = DEFAULT_SCHEDULE) -> "CalibrationTable":
        entries = {}
        for label, target in targets.items():
            entries[label] = calibrate(parse_label(label), target, n, schedule)
        logger.info(f"[calibration] fitted {len(entries)} entries at n={n}")
        return cls(entries)

    # --------------------------------------------------------
    # Persistence
    # --------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{label}={eps}" for label, eps in sorted(self.entries.items())]
        return "\n".join(lines) + "\n" if lines else ""

    @classmethod
    def from_text(cls, text: str) -> "CalibrationTable":
        entries: Dict[str, Decimal] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            label, sep, value = line.rpartition("=")
            if not sep:
                raise CalibrationError(f"line {lineno}: expected label=epsilon, got {raw!r}")
            try:
                key = calibration_key(parse_label(label))
                entries[key] = Decimal(value.strip())
            except (LabelError, InvalidOperation) as e:
                raise CalibrationError(f"line {lineno}: {e}") from e
        return cls(entries)

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path: Union[str, Path]) -> "CalibrationTable":
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"calibration file not found: {path}")
        return cls.from_text(path.read_text())

    # --------------------------------------------------------
    # Lookup
    # --------------------------------------------------------

    def _nearest(self, d: StrategyDescriptor) -> Tuple[str, Decimal]:
        key = calibration_key(d)
        if key in self.entries:
            return key, self.entries[key]
        # same family and flags at another batch size, closest first
        candidates = []
        for label, eps in self.entries.items():
            other = parse_label(label)
            if (other.family, other.uniform, other.side) == (d.family, d.uniform, d.side):
                candidates.append((abs(other.batch_size - d.batch_size), other.batch_size, label, eps))
        if not candidates:
            raise CalibrationError(f"no calibration entry for {d.family.value} ({key})",
                                   family=d.family.value)
        _, _, label, eps = min(candidates)
        logger.debug(f"[calibration] {key} falls back to {label}")
        return label, eps

    def overhead_for(self, d: StrategyDescriptor) -> Decimal:
        return self._nearest(d)[1]

    def apply(self, d: StrategyDescriptor) -> StrategyDescriptor:
        """Return d with its calibrated residuals filled in"""
        if d.family == StrategyFamily.BASELINE:
            return d
        update: Dict[str, Decimal] = {}
        if d.family.has_recipient_side:
            claim = self.entries.get(RECIPIENT_COST)
            if claim is None:
                raise CalibrationError(f"no calibration entry for {RECIPIENT_COST}",
                                       family=StrategyFamily.INTERNAL_BATCH_PULL.value)
            update["claim_overhead"] = claim
        if d.side == Side.DISTRIBUTOR:
            if d.family == StrategyFamily.POOLED_MERKLE:
                # not measured; the single root-publishing transaction is fully structural
                update["overhead_per_recipient"] = self.entries.get(calibration_key(d), Decimal(0))
            else:
                update["overhead_per_recipient"] = self.overhead_for(d)
        return d.model_copy(update=update)

    def apply_all(self, descriptors: Iterable[StrategyDescriptor]) -> List[StrategyDescriptor]:
        return [self.apply(d) for d in descriptors]

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, label: str) -> bool:
        return label in self.entries


# ------------------------------------------------------------
# Process-wide default table
# ------------------------------------------------------------

_default_lock = threading.Lock()
_default_tables: Dict[GasSchedule, CalibrationTable] = {}


def default_table(schedule: GasSchedule = DEFAULT_SCHEDULE) -> CalibrationTable:
    """AIRDROP_CALIBRATION_FILE if set, else a fit of the measured-totals fixture; memoised per schedule"""
    with _default_lock:
        table = _default_tables.get(schedule)
        if table is None:
            persisted = config.calibration_file()
            if persisted is not None:
                table = CalibrationTable.load(persisted)
                logger.info(f"[calibration] loaded {len(table)} entries from {persisted}")
            else:
                table = CalibrationTable.fit(load_targets(config.measured_targets_path()), schedule=schedule)
            _default_tables[schedule] = table
        return table


def reset_default_table() -> None:
    with _default_lock:
        _default_tables.clear()


def calibrated(label_or_descriptor: Union[str, StrategyDescriptor],
               schedule: GasSchedule = DEFAULT_SCHEDULE,
               table: Optional[CalibrationTable] = None) -> StrategyDescriptor:
    d = parse_label(label_or_descriptor) if isinstance(label_or_descriptor, str) else label_or_descriptor
    return (table or default_table(schedule)).apply(d)
