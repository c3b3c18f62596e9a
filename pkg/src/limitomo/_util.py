"""Thread-count handling and fixed-order parallel accumulation."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    """Worker count, overridable through the LIMITOMO_THREADS variable."""
    raw = os.environ.get("LIMITOMO_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(n, 1)


def chunk_slices(n_items: int, parts: int) -> list[slice]:
    parts = max(min(parts, n_items), 1)
    bounds = [round(i * n_items / parts) for i in range(parts + 1)]
    return [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _run_chunks(worker, n_items: int, threads: int | None):
    if threads is None:
        threads = thread_count()
    slices = chunk_slices(n_items, threads)
    if len(slices) == 1:
        return [worker(slices[0])]
    with ThreadPoolExecutor(max_workers=len(slices)) as pool:
        return list(pool.map(worker, slices))


def accumulate_chunks(worker, n_items: int, threads: int | None = None):
    """Sum ``worker(slice)`` over contiguous chunks of ``range(n_items)``.

    Chunks may be evaluated concurrently but are always reduced in slice
    order, so results are reproducible for a fixed chunking.
    """
    partials = _run_chunks(worker, n_items, threads)
    total = partials[0]
    for p in partials[1:]:
        total = total + p
    return total


def map_chunks(worker, n_items: int, threads: int | None = None) -> list:
    """Evaluate ``worker(slice)`` over contiguous chunks, results in order."""
    return _run_chunks(worker, n_items, threads)
