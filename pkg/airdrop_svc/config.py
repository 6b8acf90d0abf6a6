"""
Runtime settings read from the environment (.env supported)
"""
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

load_dotenv()

PACKAGE_DIR = Path(__file__).resolve().parent
DEFAULT_FIXTURES_DIR = PACKAGE_DIR.parent / "fixtures"


def fixtures_dir() -> Path:
    return Path(os.getenv("AIRDROP_FIXTURES_DIR", str(DEFAULT_FIXTURES_DIR)))


def measured_targets_path() -> Path:
    return fixtures_dir() / "fig7.csv"


def schedule_file() -> Optional[Path]:
    value = os.getenv("AIRDROP_SCHEDULE_FILE")
    return Path(value) if value else None


def calibration_file() -> Optional[Path]:
    value = os.getenv("AIRDROP_CALIBRATION_FILE")
    return Path(value) if value else None


def sweep_workers() -> int:
    return max(1, min(16, int(os.getenv("AIRDROP_SWEEP_WORKERS", "4"))))


def log_level() -> str:
    return os.getenv("LOG_LEVEL", "INFO").upper()


def api_port() -> int:
    return int(os.getenv("AIRDROP_API_PORT", "8000"))
