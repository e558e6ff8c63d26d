"""
Compensated summation for long floating-point sums.

Neumaier's variant of Kahan summation carries the rounding error of every
addition in a separate compensation term. `tree_sum` splits the input into
contiguous chunks, sums each chunk with compensation in a numba `prange`
kernel and folds the partial results pairwise in a fixed tree, so the result
depends only on the input and the worker count.
"""
import logging
from typing import Sequence, Tuple

import numba
import numpy as np
from numba import njit, prange

logger = logging.getLogger(__name__)

Partial = Tuple[float, float]


def neumaier_partial(values) -> Partial:
    """Return (running total, accumulated compensation) over `values` in order."""
    total = 0.0
    compensation = 0.0
    for val in values:
        t = total + val
        if abs(total) >= abs(val):
            compensation += (total - t) + val
        else:
            compensation += (val - t) + total
        total = t
    return total, compensation


def neumaier_sum(values) -> float:
    total, compensation = neumaier_partial(values)
    return total + compensation


# fastmath stays off: it would fold the compensation away
@njit(parallel=True, fastmath=False)
def _chunk_partials(values, bounds):
    n_chunks = bounds.shape[0] - 1
    out = np.zeros((n_chunks, 2))
    for c in prange(n_chunks):
        total = 0.0
        compensation = 0.0
        for i in range(bounds[c], bounds[c + 1]):
            val = values[i]
            t = total + val
            if abs(total) >= abs(val):
                compensation += (total - t) + val
            else:
                compensation += (val - t) + total
            total = t
        out[c, 0] = total
        out[c, 1] = compensation
    return out


def chunk_bounds(size: int, chunks: int) -> np.ndarray:
    """Start/stop offsets of `chunks` contiguous pieces, sized like np.array_split."""
    sizes = np.full(chunks, size // chunks, dtype=np.int64)
    sizes[: size % chunks] += 1
    return np.concatenate((np.zeros(1, dtype=np.int64), np.cumsum(sizes)))


def _combine(left: Partial, right: Partial) -> Partial:
    total, compensation = neumaier_partial((left[0], right[0]))
    return total, compensation + left[1] + right[1]


def _fold_pairwise(partials: Sequence[Partial]) -> Partial:
    level = list(partials)
    while len(level) > 1:
        nxt = [_combine(level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return level[0]


def tree_sum(values: np.ndarray, workers: int = 1) -> float:
    """Compensated sum of a 1-D array, chunked across numba threads.

    Chunk boundaries and the reduction tree depend only on len(values) and
    `workers`; the thread count numba actually gets only changes the speed.
    workers=1 is the serial reference order.
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    if values.size == 0:
        return 0.0
    workers = max(1, min(int(workers), values.size))
    threads = min(workers, numba.config.NUMBA_NUM_THREADS)
    numba.set_num_threads(threads)
    logger.debug(f"tree_sum: {values.size} values, {workers} chunks, {threads} threads")
    partials = _chunk_partials(values, chunk_bounds(values.size, workers))
    total, compensation = _fold_pairwise([(float(a), float(b)) for a, b in partials])
    return total + compensation
