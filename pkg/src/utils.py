#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

"""Collection of helper methods for files, hashing and ordered parallel work."""

import hashlib
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from literals import THREADS_ENV

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def safe_get_file(filepath: str) -> Optional[str]:
    """Load file contents as UTF-8 text.

    Args:
        filepath: the filepath to load data from

    Returns:
        The file content
        None if file does not exist
    """
    if not os.path.exists(filepath):
        return None
    else:
        with open(filepath, encoding="utf-8", newline="") as f:
            content = f.read()

    return content


def safe_write_to_file(content: str, path: str, mode: str = "w") -> None:
    """Ensures destination filepath exists before writing UTF-8 text with LF newlines.

    Args:
        content: the content to be written to a file
        path: the full destination filepath
        mode: the write mode. Usually "w" for write, or "a" for append. Default "w"
    """
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, mode, encoding="utf-8", newline="\n") as f:
        f.write(content)


def resolve_threads(threads: Optional[int] = None) -> int:
    """Number of worker threads to use.

    An explicit positive value wins, then `LIEDERIVE_THREADS`, then one per CPU.
    """
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "")
        threads = int(raw) if raw.strip().isdigit() else 0
    if threads <= 0:
        threads = os.cpu_count() or 1
    return threads


def parallel_map(func: Callable[[T], R], items: Iterable[T], threads: int = 1) -> List[R]:
    """Maps func over items, returning results in input order whatever the thread count."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    logger.debug(f"mapping {len(items)} items over {threads} threads")
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(func, items))


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
