#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.
import json
import logging
import os
import subprocess
import sys
from pathlib import Path
from typing import Any, Dict

REPO = Path(__file__).parents[2]
CLI = str(REPO / "src" / "cli.py")
CONFIG = str(REPO / "config.yaml")
GOLDEN = str(REPO / "tests" / "golden")

logger = logging.getLogger(__name__)


def run_liederive(*args: str, threads: int = 1) -> subprocess.CompletedProcess:
    """Runs the command line in a fresh interpreter, as an installed script would."""
    env = {k: v for k, v in os.environ.items() if not k.startswith("LIEDERIVE_")}
    command = [sys.executable, CLI, "--config", CONFIG, "--threads", str(threads), *args]
    logger.info(f"running {' '.join(command[1:])}")
    return subprocess.run(command, capture_output=True, text=True, env=env, timeout=3600)


def load_report(path: str) -> Dict[str, Any]:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def without_timing(report: Dict[str, Any]) -> Dict[str, Any]:
    return {k: v for k, v in report.items() if k != "timing_ms"}
