"""Order-preserving parallel map, capped by the TTKIT_THREADS environment variable."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

MIN_BATCH = 64


def thread_cap() -> int:
    raw = os.environ.get("TTKIT_THREADS", "")
    try:
        cap = int(raw)
    except ValueError:
        cap = os.cpu_count() or 1
    return max(1, cap)


def pmap(fn, items) -> list:
    """``[fn(x) for x in items]``, threaded for large inputs; result order is input order."""
    items = list(items)
    workers = min(thread_cap(), len(items))
    if workers <= 1 or len(items) < MIN_BATCH:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
