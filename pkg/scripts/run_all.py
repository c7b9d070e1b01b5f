#!/usr/bin/env python3
"""Run every canned experiment configuration in scripts/configs/.

Artifacts land under schatlab-out/ (or $SCHATLAB_OUT).  Rerunning the
script reproduces every file byte for byte.
"""

import sys
from pathlib import Path

from schatlab.cli import main

CONFIG_DIR = Path(__file__).resolve().parent / "configs"


def run() -> int:
    status = 0
    for config in sorted(CONFIG_DIR.glob("*.json")):
        print(f"== {config.name}")
        status = max(status, main(["run", str(config)]))
    return status


if __name__ == "__main__":
    sys.exit(run())
