#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.


"""Collection of globals common to liederive."""

from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Dict, Literal

TOOL_NAME = "liederive"
TOOL_VERSION = "0.1.0"
FORMAT_VERSION = 1

THREADS_ENV = "LIEDERIVE_THREADS"
CONFIG_ENV = "LIEDERIVE_CONFIG"
CONFIG_FILE = "config.yaml"

MAX_PRIME = 2**31
ENUMERATION_LIMIT = 10**6
EXHAUSTIVE_PRIME_BOUND = 257
RATIONAL_GRID_RADIUS = 1

DebugLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR"]
SuiteName = Literal["classical", "witt", "postlie", "all"]

RANK_MINIMUM: Dict[str, int] = {"A": 1, "B": 2, "C": 2, "D": 3}

HYPOTHESIS_CHARACTERISTIC = "char F ≠ 2, 3"
HYPOTHESIS_KILLING = "non-degenerate Killing form"
HYPOTHESIS_CHAR_ZERO = "F is a field of characteristic 0"


class ExitCode(IntEnum):
    OK = 0
    IO_ERROR = 1
    BAD_ARGUMENTS = 2
    INVALID_ALGEBRA = 3
    CHECK_FAILED = 4


@dataclass
class StatusLevel:
    exit_code: ExitCode
    message: str
    log_level: DebugLevel


class Status(Enum):
    OK = StatusLevel(ExitCode.OK, "done", "DEBUG")
    IO_ERROR = StatusLevel(ExitCode.IO_ERROR, "unable to read or write file", "ERROR")
    BAD_ARGUMENTS = StatusLevel(ExitCode.BAD_ARGUMENTS, "invalid arguments", "ERROR")
    RANK_OUT_OF_RANGE = StatusLevel(
        ExitCode.BAD_ARGUMENTS, "rank out of range for the classical type", "ERROR"
    )
    BAD_CHARACTERISTIC = StatusLevel(
        ExitCode.BAD_ARGUMENTS, f'hypothesis violated: "{HYPOTHESIS_CHARACTERISTIC}"', "ERROR"
    )
    DEGENERATE_KILLING = StatusLevel(
        ExitCode.BAD_ARGUMENTS, f'hypothesis violated: "{HYPOTHESIS_KILLING}"', "ERROR"
    )
    NOT_CHAR_ZERO = StatusLevel(
        ExitCode.BAD_ARGUMENTS, f'hypothesis violated: "{HYPOTHESIS_CHAR_ZERO}"', "ERROR"
    )
    CAPS_INCOMPATIBLE = StatusLevel(
        ExitCode.BAD_ARGUMENTS, "window caps incompatible: need 0 <= 2*N_in <= N", "ERROR"
    )
    MODE_UNAVAILABLE = StatusLevel(
        ExitCode.BAD_ARGUMENTS, "symmetric/skew split unavailable in characteristic 2", "ERROR"
    )
    INVALID_ALGEBRA = StatusLevel(
        ExitCode.INVALID_ALGEBRA, "algebra file does not describe a Lie algebra", "ERROR"
    )
    CHECKS_FAILED = StatusLevel(
        ExitCode.CHECK_FAILED, "verification checks failed - see summary", "ERROR"
    )
    UNPINNED_GOLDEN = StatusLevel(
        ExitCode.OK, "golden file missing, rerun with --bless to pin it", "WARNING"
    )
