#!/usr/bin/env python3
"""
Command-line entry point for the airdrop cost model.

Usage:
    python airdrop_cli.py cost "NAIVE|PUSH" --recipients 1000
    python airdrop_cli.py sweep --fill 0.5 --format plot-pairs --out plots/
    python airdrop_cli.py merkle-build --in fixtures/recipients_sample.txt --out dist.json
    python airdrop_cli.py fiat --prices fixtures/prices_sample.csv --strategy "NAIVE|PUSH" -n 1000
"""

import os
import sys

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from airdrop_svc.cli import main


if __name__ == "__main__":
    sys.exit(main())
