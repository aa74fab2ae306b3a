"""Thread control for the compiled parallel kernels.

The hot loops of the package are ``numba`` kernels whose outer loops run
over ``numba.prange``. Kernels never share a writable cell between
iterations: each iteration writes to a region reserved beforehand through
an exclusive prefix sum over per-iteration sizes, and concurrent
increments are folded with reductions (``np.bincount``) or with owner
partitions, where iteration ``p`` only touches identifiers ``i`` with
``i % P == p``.
"""
import typing as t
import contextlib

import numba
import numpy as np


def max_threads() -> int:
    """Size of the thread pool of the compiled kernels."""
    return int(numba.config.NUMBA_NUM_THREADS)


@contextlib.contextmanager
def num_threads(threads: t.Optional[int]) -> t.Iterator[int]:
    """Run the enclosed kernels with ``threads`` threads.

    The value is clipped to ``[1, max_threads()]``. None keeps the current
    setting. The previous setting is restored on exit.
    """
    previous = numba.get_num_threads()

    if threads is None:
        yield previous
        return

    threads = max(1, min(int(threads), max_threads()))
    numba.set_num_threads(threads)

    try:
        yield threads

    finally:
        numba.set_num_threads(previous)


def exclusive_sum(sizes: np.ndarray) -> np.ndarray:
    """Exclusive prefix sum with the total appended (``len(sizes) + 1``)."""
    offsets = np.zeros(len(sizes) + 1, dtype=np.int64)
    np.cumsum(sizes, out=offsets[1:])
    return offsets
