"""Fixed-block probe parallelism.

Work is split into blocks whose boundaries depend only on the item count,
never on the thread count, and results are returned in block order. BLAS is
pinned to one thread inside the pool so a block's arithmetic is the same no
matter how many workers run.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

BLOCK = 256


def resolve_threads(threads=None) -> int:
    if threads is None:
        env = os.environ.get("RITZID_THREADS")
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


@contextmanager
def single_threaded_blas():
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:  # pragma: no cover
        yield
        return
    with threadpool_limits(limits=1, user_api="blas"):
        yield


def block_ranges(n: int, block: int = BLOCK):
    return [(s, min(s + block, n)) for s in range(0, n, block)]


def map_blocks(fn, n: int, threads=None, block: int = BLOCK):
    """``[fn(start, stop) for each block]`` in block order."""
    ranges = block_ranges(n, block)
    threads = resolve_threads(threads)
    with single_threaded_blas():
        if threads == 1 or len(ranges) == 1:
            return [fn(s, e) for s, e in ranges]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda r: fn(*r), ranges))
