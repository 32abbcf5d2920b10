#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

import logging
from pathlib import Path

import pytest

from .helpers import load_report, run_liederive, without_timing

logger = logging.getLogger(__name__)


def test_validate_built_algebra(b2_file):
    result = run_liederive("validate", b2_file)

    assert result.returncode == 0, result.stderr
    assert result.stdout.split()[1:] == ["dim", "10", "over", "F7"]


@pytest.mark.parametrize("task,dim", [("bider:sym", 0), ("bider:skew", 1), ("der", 10)])
def test_solve_on_b2(b2_file, workdir: Path, task, dim):
    out = str(workdir / f"{task.replace(':', '_')}.json")
    result = run_liederive("solve", b2_file, task, "-o", out)

    assert result.returncode == 0, result.stderr
    report = load_report(out)
    assert report["field"] == "prime:7"
    assert report["tasks"][0]["dim"] == dim


def test_reports_independent_of_threads(b2_file, workdir: Path):
    serial, threaded = str(workdir / "serial.json"), str(workdir / "threaded.json")

    assert run_liederive("solve", b2_file, "bider:skew", "-o", serial).returncode == 0
    assert run_liederive("solve", b2_file, "bider:skew", "-o", threaded, threads=4).returncode == 0
    assert without_timing(load_report(serial)) == without_timing(load_report(threaded))


def test_hypotheses_reported_on_stderr(workdir: Path):
    result = run_liederive("build", "A", "1", "F3", "-o", str(workdir / "unused.json"))

    assert result.returncode == 2
    assert 'hypothesis violated: "char F ≠ 2, 3"' in result.stderr


def test_witt_caps_reported(workdir: Path):
    result = run_liederive("witt", "1", "3", "2", "sym")

    assert result.returncode == 2
    assert "window caps incompatible" in result.stderr


def test_witt_report_to_file(workdir: Path):
    out = str(workdir / "witt.json")
    result = run_liederive("witt", "1", "4", "2", "sym", "-o", out)

    assert result.returncode == 0, result.stderr
    report = load_report(out)
    assert report["window"] == {"n": 1, "N": 4, "N_in": 2}
    assert report["tasks"][0]["window"] == ["∂-1", "∂0", "∂1"]
    assert Path(out).read_bytes().endswith(b"}\n")
