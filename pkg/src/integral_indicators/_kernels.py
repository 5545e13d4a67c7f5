"""Fused O(n^2) kernel for the sliding-window indicator path.

One pass over the Gram matrix slides it by a period, turns each entry into a
correlation, and accumulates ``sum_j |r_ij|``. Rows are independent, so the
outer loop runs in parallel and every row is summed in the same order at any
thread count.
"""

import os

import numba
import numpy as np
from numba import njit, prange

if "NUMBA_THREADING_LAYER" not in os.environ:
    # the default probe warns about an old TBB on many distro installs
    numba.config.THREADING_LAYER = "omp"


@njit(parallel=True, cache=True)
def slide_and_score(
    gram,
    row_out,
    row_in,
    update,
    pearson,
    k,
    mean,
    sd,
    dropped,
    g_out,
    r_out,
    write_r,
):
    # pearson: ``dropped`` marks degenerate columns, ``mean``/``sd`` are window moments
    # literal: ``dropped`` marks all-zero columns, whose Gram entries are exactly 0
    n = gram.shape[0]
    scale = 1.0 / (k - 1)
    for i in prange(n):
        acc = 0.0
        for j in range(n):
            v = gram[i, j]
            if update:
                # same rounding as sliding_gram_update: difference products first
                v = v + (row_in[i] * row_in[j] - row_out[i] * row_out[j])
            if not pearson and (dropped[i] or dropped[j]):
                v = 0.0
            gram[i, j] = v
            if pearson:
                if dropped[i] or dropped[j]:
                    r = 0.0
                elif i == j:
                    r = 1.0
                else:
                    r = ((v - k * (mean[i] * mean[j])) * scale) / (sd[i] * sd[j])
                    if r > 1.0:
                        r = 1.0
                    elif r < -1.0:
                        r = -1.0
            else:
                r = v * scale
            acc += abs(r)
            if write_r:
                r_out[i, j] = r
        g_out[i] = acc


def set_threads(workers):
    """Clamp and apply the kernel thread count; ``None`` keeps the current one."""
    if workers is not None:
        numba.set_num_threads(max(1, min(int(workers), numba.config.NUMBA_NUM_THREADS)))


NO_R = np.empty((0, 0))
