"""Deterministic block map and pairwise reduction for ensemble kernels.

Work is cut into fixed-size blocks that do not depend on the worker count,
results come back in block order and are combined by a fixed binary tree,
so sums are bitwise identical for any number of threads.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Tuple, TypeVar

from loguru import logger

from src.config import settings

R = TypeVar("R")

BLOCK_ROWS = 2048


def block_ranges(total: int, block: int = BLOCK_ROWS) -> List[Tuple[int, int]]:
    """Half-open (lo, hi) ranges covering range(total)."""
    if block < 1:
        raise ValueError(f"block size must be >= 1, got {block}")
    return [(lo, min(lo + block, total)) for lo in range(0, total, block)]


def block_map(
    func: Callable[[int, int], R],
    total: int,
    threads: Optional[int] = None,
    block: int = BLOCK_ROWS,
) -> List[R]:
    """
    Apply func(lo, hi) to every block, results in block order.

    Args:
        func: Pure function of a half-open row range
        total: Number of rows
        threads: Worker count (defaults to settings.threads)
        block: Rows per block

    Returns:
        One result per block, in canonical order
    """
    tasks = block_ranges(total, block)
    workers = settings.threads if threads is None else threads
    if workers <= 1 or len(tasks) <= 1:
        return [func(lo, hi) for lo, hi in tasks]
    logger.debug(f"Dispatching {len(tasks)} blocks to {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(func, lo, hi) for lo, hi in tasks]
        return [f.result() for f in futures]


def pairwise_sum(values: Iterable, zero=0.0):
    """Sum by a balanced binary tree over the input order."""
    data = list(values)
    if not data:
        return zero
    while len(data) > 1:
        merged = [data[i] + data[i + 1] for i in range(0, len(data) - 1, 2)]
        if len(data) % 2:
            merged.append(data[-1])
        data = merged
    return data[0]
