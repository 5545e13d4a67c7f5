"""The parameter-by-period value matrix and its CSV form."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from os import PathLike
from typing import Sequence

import numpy as np

from .errors import PanelError


@dataclass(frozen=True, eq=False)
class SeriesPanel:
    """An ``n x T_max`` matrix of parameter values, one column per period.

    Periods are labelled ``1..T_max``. The value array is stored read-only;
    operations that alter values return a new panel.
    """

    parameter_ids: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        ids = tuple(str(p) for p in self.parameter_ids)
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim != 2:
            raise PanelError(f"values must be 2-D, got shape {values.shape}")
        n, t_max = values.shape
        if n < 1 or t_max < 1:
            raise PanelError(f"panel needs n >= 1 and T_max >= 1, got {n}x{t_max}")
        if len(ids) != n:
            raise PanelError(f"{len(ids)} parameter ids for {n} value rows")
        if len(set(ids)) != n:
            seen, dups = set(), []
            for p in ids:
                if p in seen:
                    dups.append(p)
                seen.add(p)
            raise PanelError(f"duplicate parameter ids: {sorted(set(dups))}")
        if not np.isfinite(values).all():
            i, t = np.argwhere(~np.isfinite(values))[0]
            raise PanelError(f"non-finite value for {ids[i]!r} at period {t + 1}")
        values.setflags(write=False)
        object.__setattr__(self, "parameter_ids", ids)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def t_max(self) -> int:
        return self.values.shape[1]

    @property
    def periods(self) -> range:
        return range(1, self.t_max + 1)

    def index_of(self, parameter_id: str) -> int:
        try:
            return self._index[parameter_id]
        except AttributeError:
            object.__setattr__(
                self, "_index", {p: i for i, p in enumerate(self.parameter_ids)}
            )
            return self._index[parameter_id]

    def column(self, t: int) -> np.ndarray:
        """Values of all parameters at period ``t`` (1-based)."""
        if not 1 <= t <= self.t_max:
            raise IndexError(f"period {t} outside 1..{self.t_max}")
        return self.values[:, t - 1]

    def with_values(self, values: np.ndarray) -> "SeriesPanel":
        return SeriesPanel(self.parameter_ids, values)

    def permuted(self, order: Sequence[int]) -> "SeriesPanel":
        order = list(order)
        return SeriesPanel([self.parameter_ids[i] for i in order], self.values[order])

    def identical_to(self, other: "SeriesPanel") -> bool:
        """Bitwise equality of ids and values."""
        return (
            self.parameter_ids == other.parameter_ids
            and self.values.shape == other.values.shape
            and self.values.tobytes() == other.values.tobytes()
        )


def format_float(x: float) -> str:
    """Shortest decimal that round-trips to the same double."""
    return repr(float(x))


def panel_to_csv(panel: SeriesPanel) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["period", *panel.parameter_ids])
    for t in panel.periods:
        writer.writerow([t, *map(format_float, panel.values[:, t - 1])])
    return buf.getvalue()


def write_panel_csv(panel: SeriesPanel, path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(panel_to_csv(panel))


def parse_panel_csv(text: str) -> SeriesPanel:
    """Parse the wide CSV form: a ``period`` column then one column per parameter."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise PanelError("empty panel file")
    header = [h.strip() for h in rows[0]]
    if not header or header[0] != "period":
        raise PanelError("first header column must be 'period'")
    ids = header[1:]
    if not ids:
        raise PanelError("panel has no parameter columns")
    if any(not p for p in ids):
        raise PanelError("empty parameter id in header")
    data = np.empty((len(ids), len(rows) - 1), dtype=np.float64)
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise PanelError(f"line {line}: expected {len(header)} fields, got {len(row)}")
        try:
            period = int(row[0])
        except ValueError:
            raise PanelError(f"line {line}: bad period label {row[0]!r}") from None
        if period != line - 1:
            raise PanelError(f"line {line}: periods must ascend from 1, got {period}")
        for i, cell in enumerate(row[1:]):
            try:
                x = float(cell)
            except ValueError:
                raise PanelError(f"line {line}: bad number {cell!r} for {ids[i]!r}") from None
            if not math.isfinite(x):
                raise PanelError(f"line {line}: non-finite value for {ids[i]!r}")
            data[i, line - 2] = x
    if data.shape[1] == 0:
        raise PanelError("panel has no period rows")
    return SeriesPanel(ids, data)


def read_panel_csv(path: str | PathLike) -> SeriesPanel:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_panel_csv(fh.read())
