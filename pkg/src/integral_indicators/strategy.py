"""HR strategies, sanction schedules, and strategy comparison by system indicator.

A strategy is a set of duties; each duty drives one or more panel
parameters. A sanction schedule blocks duties over period intervals, and a
blocked duty's parameters read 0 for those periods. Comparing the system
indicator of the untouched panel with that of the sanctioned panel gives the
estimate of sanction impact ``delta_g = G(alternative) - G(baseline)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from .core import IndicatorTrace, WindowSpec, indicator_trace
from .errors import BindingError, ScheduleError
from .panel import SeriesPanel

SIGN_CONVENTION = "delta_g = g_values[1] - g_values[0] (alternative minus baseline)"


@dataclass(frozen=True)
class Duty:
    duty_id: str
    mapped_parameters: frozenset[str]
    position: str = ""
    description: str = ""
    compliance: int = 1

    def __post_init__(self):
        object.__setattr__(self, "mapped_parameters", frozenset(self.mapped_parameters))
        if not self.mapped_parameters:
            raise ValueError(f"duty {self.duty_id!r} maps no parameters")
        if self.compliance not in (0, 1):
            raise ValueError(f"duty {self.duty_id!r}: compliance must be 0 or 1")


@dataclass(frozen=True)
class Strategy:
    """A labelled set of duties.

    ``active`` maps a duty id to the periods in which it is performed; a duty
    missing from the map is performed in every period.
    """

    label: str
    duties: tuple[Duty, ...]
    active: Mapping[str, frozenset[int]] = field(default_factory=dict)

    def __post_init__(self):
        duties = tuple(self.duties)
        ids = [d.duty_id for d in duties]
        dups = sorted({d for d in ids if ids.count(d) > 1})
        if dups:
            raise ValueError(f"strategy {self.label!r}: duplicate duty ids {dups}")
        active = {d: frozenset(int(t) for t in ts) for d, ts in dict(self.active).items()}
        stray = sorted(set(active) - set(ids))
        if stray:
            raise ValueError(f"strategy {self.label!r}: activity given for unknown duties {stray}")
        object.__setattr__(self, "duties", duties)
        object.__setattr__(self, "active", active)

    @property
    def duty_ids(self) -> tuple[str, ...]:
        return tuple(d.duty_id for d in self.duties)

    def duty(self, duty_id: str) -> Duty:
        for d in self.duties:
            if d.duty_id == duty_id:
                return d
        raise KeyError(duty_id)

    def is_active(self, duty_id: str, t: int) -> bool:
        periods = self.active.get(duty_id)
        return periods is None or t in periods


def bind(strategy: Strategy, panel: SeriesPanel) -> None:
    """Check that every mapped parameter and active period exists in ``panel``."""
    known = set(panel.parameter_ids)
    unknown = sorted({p for d in strategy.duties for p in d.mapped_parameters} - known)
    if unknown:
        raise BindingError(
            f"strategy {strategy.label!r} maps unknown parameters: {', '.join(unknown)}",
            unknown,
        )
    for duty_id, periods in strategy.active.items():
        bad = sorted(t for t in periods if not 1 <= t <= panel.t_max)
        if bad:
            raise BindingError(
                f"strategy {strategy.label!r}: duty {duty_id!r} active in periods "
                f"{bad} outside 1..{panel.t_max}"
            )


@dataclass(frozen=True)
class SanctionBlock:
    duty_id: str
    start: int
    end: int


@dataclass(frozen=True)
class SanctionSchedule:
    """Duty blocks over inclusive period intervals; intervals may overlap.

    Intervals may run past the end of a panel; only existing periods are
    blocked.
    """

    blocks: tuple[SanctionBlock, ...] = ()

    def __post_init__(self):
        blocks = tuple(
            b if isinstance(b, SanctionBlock) else SanctionBlock(*b) for b in self.blocks
        )
        for i, b in enumerate(blocks):
            if b.start > b.end:
                raise ScheduleError(
                    f"blocks[{i}] ({b.duty_id!r}): start {b.start} is after end {b.end}"
                )
            if b.start < 1:
                raise ScheduleError(f"blocks[{i}] ({b.duty_id!r}): start {b.start} < 1")
        object.__setattr__(self, "blocks", blocks)

    def check_against(self, strategy: Strategy) -> None:
        unknown = sorted({b.duty_id for b in self.blocks} - set(strategy.duty_ids))
        if unknown:
            raise ScheduleError(
                f"schedule blocks duties not in strategy {strategy.label!r}: {', '.join(unknown)}"
            )


def sanction_mask(
    panel: SeriesPanel, strategy: Strategy, schedule: SanctionSchedule
) -> np.ndarray:
    """Boolean ``n x T_max`` mask of the cells a schedule blocks."""
    schedule.check_against(strategy)
    bind(strategy, panel)
    mask = np.zeros(panel.values.shape, dtype=bool)
    for b in schedule.blocks:
        if b.start > panel.t_max:
            continue
        rows = [panel.index_of(p) for p in strategy.duty(b.duty_id).mapped_parameters]
        mask[rows, b.start - 1 : min(b.end, panel.t_max)] = True
    return mask


def apply_sanctions(
    panel: SeriesPanel, strategy: Strategy, schedule: SanctionSchedule
) -> SeriesPanel:
    """Return a copy of ``panel`` with every blocked cell set to 0."""
    mask = sanction_mask(panel, strategy, schedule)
    values = panel.values.copy()
    values[mask] = 0.0
    return panel.with_values(values)


def strategy_cost(strategy: Strategy, panel: SeriesPanel, t: int) -> float:
    """Cost of the duties performed at period ``t``.

    Each active, compliant duty contributes the sum of its mapped parameters
    at ``t``; a parameter mapped by several duties counts once per duty.
    """
    bind(strategy, panel)
    if not 1 <= t <= panel.t_max:
        raise IndexError(f"period {t} outside 1..{panel.t_max}")
    column = panel.values[:, t - 1]
    total = 0.0
    for duty in strategy.duties:
        if duty.compliance and strategy.is_active(duty.duty_id, t):
            for p in sorted(duty.mapped_parameters):
                total += column[panel.index_of(p)]
    return float(total)


def aggregate_strategy_cost(strategy: Strategy, panel: SeriesPanel) -> float:
    """Sum of :func:`strategy_cost` over every period."""
    return float(sum(strategy_cost(strategy, panel, t) for t in panel.periods))


class BudgetScope(str, Enum):
    PER_PERIOD = "per_period"
    CUMULATIVE = "cumulative"


@dataclass(frozen=True)
class BudgetConstraint:
    cap: float
    scope: BudgetScope = BudgetScope.PER_PERIOD

    def __post_init__(self):
        if not self.cap >= 0:
            raise ValueError(f"budget cap must be >= 0, got {self.cap}")
        object.__setattr__(self, "scope", BudgetScope(self.scope))


@dataclass(frozen=True)
class BudgetReport:
    scope: BudgetScope
    cap: float
    violating_periods: tuple[int, ...]
    cumulative_violated: bool | None

    @property
    def violated(self) -> bool:
        return bool(self.violating_periods) or bool(self.cumulative_violated)

    def to_dict(self):
        if self.scope is BudgetScope.CUMULATIVE:
            return {"scope": self.scope.value, "violated": bool(self.cumulative_violated)}
        return {"scope": self.scope.value, "periods": list(self.violating_periods)}


def check_budget(panel: SeriesPanel, constraint: BudgetConstraint) -> BudgetReport:
    """Flag periods (or the whole horizon) where total spend exceeds the cap."""
    totals = panel.values.sum(axis=0)
    if constraint.scope is BudgetScope.CUMULATIVE:
        return BudgetReport(constraint.scope, constraint.cap, (), bool(totals.sum() > constraint.cap))
    periods = tuple(int(t) + 1 for t in np.flatnonzero(totals > constraint.cap))
    return BudgetReport(constraint.scope, constraint.cap, periods, None)


@dataclass(frozen=True)
class EconomicParameter:
    """A labelled economic figure under each strategy, e.g. a credit line in %.

    Missing values are ``None``; the delta treats a single missing side as 0
    and is ``None`` only when both are missing.
    """

    label: str
    baseline: float | None
    alternative: float | None
    unit: str = ""

    @property
    def delta(self) -> float | None:
        if self.baseline is None and self.alternative is None:
            return None
        return (self.alternative or 0.0) - (self.baseline or 0.0)

    def to_dict(self):
        return {
            "label": self.label,
            "baseline": self.baseline,
            "alternative": self.alternative,
            "unit": self.unit,
            "delta": self.delta,
        }


@dataclass(frozen=True, eq=False)
class ScenarioReport:
    strategy_labels: tuple[str, str]
    g_values: tuple[float, float]
    delta_g: float
    per_parameter_delta: np.ndarray
    parameter_ids: tuple[str, ...]
    blocked_cells: int
    strategy_costs: tuple[float, float]
    window: WindowSpec
    economic_deltas: tuple[EconomicParameter, ...] = ()
    budget_violations: tuple[BudgetReport, BudgetReport] | None = None
    traces: tuple[IndicatorTrace, IndicatorTrace] | None = field(default=None, repr=False)
    sign_convention: str = SIGN_CONVENTION

    def to_dict(self) -> dict:
        budget = None
        if self.budget_violations is not None:
            budget = {
                label: rep.to_dict()
                for label, rep in zip(self.strategy_labels, self.budget_violations)
            }
        return {
            "strategy_labels": list(self.strategy_labels),
            "g_values": list(self.g_values),
            "delta_g": self.delta_g,
            "sign_convention": self.sign_convention,
            "window": {"k": self.window.k, "mode": self.window.mode.value},
            "indicator_kind": self.traces[0].kind if self.traces else None,
            "blocked_cells": self.blocked_cells,
            "strategy_costs": list(self.strategy_costs),
            "per_parameter_delta": {
                p: float(d) for p, d in zip(self.parameter_ids, self.per_parameter_delta)
            },
            "economic_deltas": [e.to_dict() for e in self.economic_deltas],
            "budget_violations": budget,
        }


def compare_strategies(
    panel: SeriesPanel,
    baseline: Strategy,
    alt: Strategy,
    schedule: SanctionSchedule,
    spec: WindowSpec,
    constraint: BudgetConstraint | None = None,
    economic: Iterable[EconomicParameter] = (),
    **trace_kwargs,
) -> ScenarioReport:
    """Score the untouched panel (baseline) against the sanctioned one (alternative).

    ``trace_kwargs`` are passed to :func:`indicator_trace`.
    """
    bind(baseline, panel)
    bind(alt, panel)
    mask = sanction_mask(panel, alt, schedule)
    values = panel.values.copy()
    values[mask] = 0.0
    sanctioned = panel.with_values(values)

    trace1 = indicator_trace(panel, spec, **trace_kwargs)
    trace2 = indicator_trace(sanctioned, spec, **trace_kwargs)
    g1, g2 = trace1.g_total, trace2.g_total
    budget = None
    if constraint is not None:
        budget = (check_budget(panel, constraint), check_budget(sanctioned, constraint))
    return ScenarioReport(
        strategy_labels=(baseline.label, alt.label),
        g_values=(g1, g2),
        delta_g=g2 - g1,
        per_parameter_delta=(trace2.g - trace1.g).sum(axis=0),
        parameter_ids=panel.parameter_ids,
        blocked_cells=int(mask.sum()),
        strategy_costs=(
            aggregate_strategy_cost(baseline, panel),
            aggregate_strategy_cost(alt, sanctioned),
        ),
        window=spec,
        economic_deltas=tuple(economic),
        budget_violations=budget,
        traces=(trace1, trace2),
    )

