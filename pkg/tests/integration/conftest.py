#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

from pathlib import Path

import pytest

from .helpers import run_liederive


@pytest.fixture(scope="module")
def workdir(tmp_path_factory) -> Path:
    return tmp_path_factory.mktemp("liederive")


@pytest.fixture(scope="module")
def b2_file(workdir: Path) -> str:
    """B2 over F7 written by the command line."""
    path = str(workdir / "b2_f7.json")
    result = run_liederive("build", "B", "2", "F7", "-o", path)
    assert result.returncode == 0, result.stderr
    return path
