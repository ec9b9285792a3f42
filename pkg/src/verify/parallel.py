"""Deterministic chunked evaluation on a thread pool."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple

import numpy as np

THREADS_ENV = "NASH_SQUEEZE_THREADS"
CHUNK = 8192


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def chunk_bounds(n: int, size: int = CHUNK) -> List[Tuple[int, int]]:
    return [(lo, min(lo + size, n)) for lo in range(0, n, size)]


def chunked_map(
    fn: Callable[[np.ndarray], np.ndarray],
    items: np.ndarray,
    threads: Optional[int] = None,
    chunk: int = CHUNK,
) -> np.ndarray:
    """fn over row chunks of `items`, concatenated in chunk order."""
    workers = default_threads() if threads is None else max(1, int(threads))
    bounds = chunk_bounds(items.shape[0], chunk)
    if not bounds:
        return fn(items)
    if workers == 1 or len(bounds) == 1:
        parts = [fn(items[lo:hi]) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: fn(items[b[0] : b[1]]), bounds))
    return np.concatenate(parts, axis=0)
