"""Deterministic parallel mapping.

The worker count comes from the ``HYPERVOTE_JOBS`` environment variable
(default 1). Results are always collected in input order, so the outcome is
identical at any width.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def job_count() -> int:
    raw = os.environ.get("HYPERVOTE_JOBS", "1").strip()
    try:
        jobs = int(raw)
    except ValueError:
        raise ValueError(f"HYPERVOTE_JOBS must be an integer, got {raw!r}") from None
    if jobs < 1:
        raise ValueError(f"HYPERVOTE_JOBS must be >= 1, got {jobs}")
    return jobs


def parallel_map(fn, items) -> list:
    """Map `fn` over `items`, preserving order regardless of worker count."""
    items = list(items)
    jobs = job_count()
    if jobs == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))
