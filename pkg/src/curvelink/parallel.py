"""Thread fan-out with results returned in submission order.

Callers split work into a fixed list of blocks that does not depend on the
thread count and reduce the per-block results in list order, so answers
are bit-identical for any number of workers.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "CURVELINK_THREADS"
_default_threads = None


def set_default_threads(n):
    global _default_threads
    _default_threads = None if n is None else max(1, int(n))


def resolve_threads(n=None) -> int:
    if n is not None:
        return max(1, int(n))
    if _default_threads is not None:
        return _default_threads
    env = os.environ.get(ENV_THREADS)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def ordered_map(fn, items, threads=None):
    items = list(items)
    k = resolve_threads(threads)
    if k == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, items))
