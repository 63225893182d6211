"""Process-pool map sized by the TOSPDC_WORKERS environment variable."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from functools import partial


def worker_count(workers: int | None = None) -> int:
    if workers is not None:
        return max(1, int(workers))
    try:
        return max(1, int(os.environ.get("TOSPDC_WORKERS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items, *args, workers: int | None = None) -> list:
    """``[fn(item, *args) for item in items]``, in input order, possibly across processes."""
    items = list(items)
    call = partial(_apply, fn, args) if args else fn
    n = min(worker_count(workers), len(items))
    if n <= 1:
        return [call(item) for item in items]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(call, items))


def _apply(fn, args, item):
    return fn(item, *args)
