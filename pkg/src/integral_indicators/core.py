"""Windowed correlation matrices and the integral indicators built on them.

An analysis epoch ``t`` looks at the ``k`` periods ``t-1, ..., t-k`` that
precede it, so the valid epochs of a panel with ``T_max`` periods are
``k+1 .. T_max+1``. For each epoch the ``n x n`` correlation matrix of the
window is formed and every parameter scores ``G_i(t) = sum_j |r_ij(t)|``.
The system indicator is the sum of all ``G_i(t)``.

Two correlation modes are supported:

``pearson`` (default)
    Each column is standardized inside the window (mean removed, divided by
    the sample standard deviation) before the product moment is taken, so
    entries are true Pearson coefficients in ``[-1, 1]``.

``literal``
    The raw, uncentered product moment ``sum_l x_i x_j / (k-1)``.

A column whose window variance is below ``1e-15 * (mean square + 1)`` is
*degenerate*. In pearson mode every entry in its row and column, diagonal
included, is 0. Zeroing a parameter over a whole window (which is what a
sanction block does) therefore removes it from ``G`` entirely.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

import numpy as np

from . import _kernels
from .errors import DimensionError, EpochRangeError, InsufficientDataError
from .panel import SeriesPanel

DEGENERATE_RTOL = 1e-15
INDICATOR_KIND = "abs_row_sum"

# rebuild the sliding Gram matrix once accumulated squared mass exceeds this
# multiple of a column's current window energy; bounds slid-entry error near 1e-12
REFRESH_RATIO = 1e4

_MIRROR_BLOCK = 256


class Mode(str, Enum):
    PEARSON = "pearson"
    LITERAL = "literal"


@dataclass(frozen=True)
class WindowSpec:
    k: int = 6
    mode: Mode = Mode.PEARSON

    def __post_init__(self):
        if isinstance(self.k, bool) or int(self.k) != self.k:
            raise ValueError(f"window length k must be an integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))
        if self.k < 2:
            raise ValueError(f"window length k must be >= 2, got {self.k}")
        object.__setattr__(self, "mode", Mode(self.mode))

    def epochs(self, t_max: int) -> range:
        """Analysis epochs ``k+1 .. t_max+1`` for a panel of ``t_max`` periods."""
        if t_max < self.k:
            raise InsufficientDataError(
                f"window k={self.k} exceeds panel length T_max={t_max}; no epoch has a full window"
            )
        return range(self.k + 1, t_max + 2)


@dataclass(frozen=True, eq=False)
class WindowMatrix:
    """``k x n`` matrix whose row ``l-1`` holds ``x(epoch - l)``; most recent first."""

    epoch: int
    rows: np.ndarray


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    epoch: int
    entries: np.ndarray
    mode: Mode


@dataclass(frozen=True, eq=False)
class IndicatorTrace:
    """Per-epoch, per-parameter indicators ``G_i(t)`` and their total ``G``.

    ``g`` has one row per epoch and one column per parameter. ``g_total`` is
    accumulated epoch-major, then by ascending parameter index.
    """

    epochs: tuple[int, ...]
    g: np.ndarray
    g_total: float
    parameter_ids: tuple[str, ...]
    spec: WindowSpec
    kind: str = field(default=INDICATOR_KIND)

    def epoch_sums(self) -> np.ndarray:
        """``sum_i G_i(t)`` for each epoch."""
        return self.g.sum(axis=1)

    def parameter_sums(self) -> np.ndarray:
        """``sum_t G_i(t)`` for each parameter."""
        return self.g.sum(axis=0)


def _mirror_upper(a: np.ndarray) -> np.ndarray:
    """Copy the upper triangle of a square matrix onto the lower one, in place."""
    n = a.shape[0]
    for i0 in range(0, n, _MIRROR_BLOCK):
        i1 = min(i0 + _MIRROR_BLOCK, n)
        a[i1:, i0:i1] = a[i0:i1, i1:].T
        blk = a[i0:i1, i0:i1]
        iu, ju = np.triu_indices(i1 - i0, 1)
        blk[ju, iu] = blk[iu, ju]
    return a


def window_moments(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Column mean, sample standard deviation and degenerate mask of a window."""
    k = rows.shape[0]
    mean = rows.mean(axis=0)
    dev = rows - mean
    var = np.einsum("ij,ij->j", dev, dev) / (k - 1)
    mean_sq = np.einsum("ij,ij->j", rows, rows) / k
    degenerate = var < DEGENERATE_RTOL * (mean_sq + 1.0)
    return mean, np.sqrt(var), degenerate


def build_window(panel: SeriesPanel, t: int, spec: WindowSpec) -> WindowMatrix:
    k = spec.k
    if not k + 1 <= t <= panel.t_max + 1:
        raise EpochRangeError(t, k, panel.t_max)
    # columns t-k .. t-1 (1-based) are indices t-k-1 .. t-2; reverse to most recent first
    rows = panel.values[:, t - k - 1 : t - 1][:, ::-1].T.copy()
    return WindowMatrix(epoch=t, rows=rows)


def _pearson_from_rows(rows: np.ndarray) -> np.ndarray:
    k = rows.shape[0]
    mean, sd, degenerate = window_moments(rows)
    sd = np.where(degenerate, 1.0, sd)
    z = (rows - mean) / sd
    z[:, degenerate] = 0.0
    r = z.T @ z
    r /= k - 1
    _mirror_upper(r)
    np.clip(r, -1.0, 1.0, out=r)
    np.fill_diagonal(r, np.where(degenerate, 0.0, 1.0))
    return r


def _literal_from_rows(rows: np.ndarray) -> np.ndarray:
    k = rows.shape[0]
    r = rows.T @ rows
    r /= k - 1
    return _mirror_upper(r)


def correlation_matrix(window: WindowMatrix, spec: WindowSpec) -> CorrelationMatrix:
    rows = np.asarray(window.rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] < 2:
        raise DimensionError(f"window needs at least 2 rows, got shape {rows.shape}")
    if spec.mode is Mode.PEARSON:
        r = _pearson_from_rows(rows)
    else:
        r = _literal_from_rows(rows)
    return CorrelationMatrix(epoch=window.epoch, entries=r, mode=spec.mode)


def indicator_row_sums(r: CorrelationMatrix | np.ndarray) -> np.ndarray:
    """``G_i = sum_j |r_ij|`` over every column, diagonal included."""
    entries = r.entries if isinstance(r, CorrelationMatrix) else np.asarray(r)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise DimensionError(f"correlation matrix must be square, got {entries.shape}")
    return np.abs(entries).sum(axis=1)


def sliding_gram_update(
    gram: np.ndarray,
    row_out: np.ndarray,
    row_in: np.ndarray,
    out: np.ndarray | None = None,
) -> np.ndarray:
    """Slide a Gram matrix ``X^T X`` by one row: drop ``row_out``, add ``row_in``.

    The two outer products are differenced before touching ``gram`` so that
    ``row_out == row_in`` leaves it bit-identical. Pass ``out=gram`` to
    update in place.
    """
    gram = np.asarray(gram)
    row_out = np.asarray(row_out, dtype=np.float64)
    row_in = np.asarray(row_in, dtype=np.float64)
    if gram.ndim != 2 or gram.shape[0] != gram.shape[1]:
        raise DimensionError(f"gram must be square, got {gram.shape}")
    n = gram.shape[0]
    if row_out.shape != (n,) or row_in.shape != (n,):
        raise DimensionError(
            f"rows must have shape ({n},), got {row_out.shape} and {row_in.shape}"
        )
    delta = np.outer(row_in, row_in)
    delta -= np.outer(row_out, row_out)
    if out is None:
        return gram + delta
    np.add(gram, delta, out=out)
    return out


def _total(g: np.ndarray, compensated: bool) -> float:
    flat = np.ascontiguousarray(g).ravel()
    if flat.size == 0:
        return 0.0
    if compensated:
        return math.fsum(flat)
    # cumsum accumulates strictly left to right, unlike pairwise np.sum
    return float(np.cumsum(flat)[-1])


def batch_correlations(panel: SeriesPanel, spec: WindowSpec) -> Iterator[CorrelationMatrix]:
    """Correlation matrix of every epoch, each recomputed from its window."""
    for t in spec.epochs(panel.t_max):
        yield correlation_matrix(build_window(panel, t, spec), spec)


def _sliding_sweep(
    panel: SeriesPanel, spec: WindowSpec, keep_matrices: bool
) -> Iterator[tuple[int, np.ndarray, np.ndarray | None]]:
    """Yield ``(epoch, G row, R or None)`` along a sliding Gram matrix.

    The Gram matrix moves one period per epoch with a rank-2 update. Column
    means, deviations and the degenerate test are taken directly from each
    window (O(nk)), so only the O(n^2) part is incremental.

    Rounding error in a slid entry grows with the squared magnitudes that
    have passed through it. Per column that mass is tracked against the
    current window's energy (centered in pearson mode); once the ratio
    exceeds ``REFRESH_RATIO`` the Gram matrix is rebuilt from the current
    window, re-anchored at the window mean in pearson mode (a shift that
    leaves correlations unchanged).
    """
    k = spec.k
    epochs = spec.epochs(panel.t_max)
    n = panel.n
    x = np.ascontiguousarray(panel.values.T)  # period-major
    pearson = spec.mode is Mode.PEARSON
    unused = np.zeros(n)

    anchor = unused
    gram = np.empty((n, n))
    mass = np.empty(n)

    def rebuild(lo: int, hi: int) -> None:
        nonlocal anchor
        if pearson:
            anchor = x[lo:hi].mean(axis=0)
        w = x[lo:hi] - anchor
        np.matmul(w.T, w, out=gram)
        _mirror_upper(gram)
        mass[:] = np.einsum("ij,ij->j", w, w)

    for idx, t in enumerate(epochs):
        # window t covers periods t-k..t-1; period p sits at row p-1
        lo, hi = t - k - 1, t - 1
        win = x[lo:hi]
        if pearson:
            _, sd, dropped = window_moments(win)
            energy = (k - 1) * sd * sd
        else:
            dropped = ~win.any(axis=0)
            energy = np.einsum("ij,ij->j", win, win)

        update = idx > 0
        if update:
            row_out = x[t - k - 2] - anchor
            row_in = x[t - 2] - anchor
            mass += row_out * row_out + row_in * row_in
            live = ~dropped
            if np.any(mass[live] > REFRESH_RATIO * energy[live]):
                update = False
        else:
            row_out = row_in = unused
        if not update:
            rebuild(lo, hi)

        if pearson:
            mean = (win - anchor).mean(axis=0)
            sd = np.where(dropped, 1.0, sd)
        else:
            mean = sd = unused
        g = np.empty(n)
        r = np.empty((n, n)) if keep_matrices else _kernels.NO_R
        _kernels.slide_and_score(
            gram, row_out, row_in, update, pearson, k, mean, sd, dropped, g, r,
            keep_matrices,
        )
        yield t, g, (r if keep_matrices else None)


def incremental_correlations(
    panel: SeriesPanel, spec: WindowSpec
) -> Iterator[CorrelationMatrix]:
    """Correlation matrix of every epoch via the sliding Gram path."""
    for t, _, r in _sliding_sweep(panel, spec, keep_matrices=True):
        yield CorrelationMatrix(epoch=t, entries=r, mode=spec.mode)


def _batch_row_sums(panel: SeriesPanel, spec: WindowSpec, t: int) -> np.ndarray:
    return indicator_row_sums(correlation_matrix(build_window(panel, t, spec), spec))


def indicator_trace(
    panel: SeriesPanel,
    spec: WindowSpec,
    *,
    method: str = "incremental",
    workers: int | None = None,
    compensated: bool = False,
) -> IndicatorTrace:
    """Evaluate ``G_i(t)`` for every epoch and the system indicator ``G``.

    ``method`` is ``"incremental"`` (sliding Gram) or ``"batch"`` (each epoch
    from scratch). ``workers`` sets the thread count: kernel threads for the
    incremental path, epochs in flight for batch. Results do not depend on it.
    """
    epochs = spec.epochs(panel.t_max)
    g = np.empty((len(epochs), panel.n), dtype=np.float64)
    if method == "incremental":
        _kernels.set_threads(workers)
        for row, (_, sums, _) in enumerate(_sliding_sweep(panel, spec, keep_matrices=False)):
            g[row] = sums
    elif method == "batch":
        if workers and workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                rows = pool.map(lambda t: _batch_row_sums(panel, spec, t), epochs)
                for row, sums in enumerate(rows):
                    g[row] = sums
        else:
            for row, t in enumerate(epochs):
                g[row] = _batch_row_sums(panel, spec, t)
    else:
        raise ValueError(f"unknown method {method!r}; use 'incremental' or 'batch'")
    g.setflags(write=False)
    return IndicatorTrace(
        epochs=tuple(epochs),
        g=g,
        g_total=_total(g, compensated),
        parameter_ids=panel.parameter_ids,
        spec=spec,
    )


def system_indicator(panel: SeriesPanel, spec: WindowSpec, **kwargs) -> float:
    """The scalar ``G`` summed over all epochs and parameters."""
    return indicator_trace(panel, spec, **kwargs).g_total
