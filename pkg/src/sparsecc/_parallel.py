"""Deterministic work distribution helpers.

Parallelism never changes results: work items are independent, and outputs
are always consumed in submission order.
"""

from __future__ import annotations

import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor


def resolve_threads(threads: int | None = None) -> int:
    """Explicit argument, else NET_THREADS env var, else cpu count."""
    if threads is None:
        env = os.environ.get("NET_THREADS")
        if env:
            try:
                threads = int(env)
            except ValueError:
                raise ValueError(f"NET_THREADS must be an integer, got {env!r}")
        else:
            threads = os.cpu_count() or 1
    if threads < 1:
        raise ValueError("thread count must be >= 1")
    return threads


def ordered_map(fn, items, threads: int | None = None):
    """Like map(fn, items) but executed on a thread pool, yielding in order.

    Submission is windowed so at most ~2x ``threads`` results are buffered.
    """
    threads = resolve_threads(threads)
    items = list(items)
    if threads == 1 or len(items) <= 1:
        for it in items:
            yield fn(it)
        return
    window = 2 * threads
    with ThreadPoolExecutor(max_workers=threads) as pool:
        pending = deque()
        it = iter(items)
        for _ in range(min(window, len(items))):
            pending.append(pool.submit(fn, next(it)))
        for nxt in it:
            yield pending.popleft().result()
            pending.append(pool.submit(fn, nxt))
        while pending:
            yield pending.popleft().result()
