#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

from pathlib import Path

import pytest

from exactla import ScalarDomain
from liecore import LieAlgebra, affine_line, heisenberg, sl2
from structured_config import SolverConfig, load_config

CONFIG_PATH = str(Path(__file__).parents[2] / "config.yaml")


@pytest.fixture(scope="module")
def qq() -> ScalarDomain:
    return ScalarDomain.rational()


@pytest.fixture(scope="module")
def f5() -> ScalarDomain:
    return ScalarDomain.prime(5)


@pytest.fixture(scope="module")
def f7() -> ScalarDomain:
    return ScalarDomain.prime(7)


@pytest.fixture(scope="module")
def sl2_q(qq) -> LieAlgebra:
    return sl2(qq)


@pytest.fixture(scope="module")
def aff_q(qq) -> LieAlgebra:
    return affine_line(qq)


@pytest.fixture(scope="module")
def heis_q(qq) -> LieAlgebra:
    return heisenberg(qq)


@pytest.fixture
def config(tmp_path) -> SolverConfig:
    return load_config(
        CONFIG_PATH, env={}, overrides={"threads": 1, "golden_dir": str(tmp_path / "golden")}
    )
