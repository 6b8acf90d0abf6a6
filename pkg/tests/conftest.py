import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from airdrop_svc.cost_model.calibration import default_table, load_targets  # noqa: E402

FIXTURES = ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def targets():
    return load_targets(FIXTURES / "fig7.csv")


@pytest.fixture(scope="session")
def table():
    return default_table()
