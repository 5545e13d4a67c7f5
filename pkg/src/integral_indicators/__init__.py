"""Integral indicators of a multidimensional system from sliding-window correlations."""

from .core import (
    CorrelationMatrix,
    IndicatorTrace,
    Mode,
    WindowMatrix,
    WindowSpec,
    batch_correlations,
    build_window,
    correlation_matrix,
    incremental_correlations,
    indicator_row_sums,
    indicator_trace,
    sliding_gram_update,
    system_indicator,
)
from .errors import (
    BindingError,
    ConfigError,
    DimensionError,
    EpochRangeError,
    IndicatorError,
    InsufficientDataError,
    PanelError,
    ScheduleError,
)
from .panel import SeriesPanel, parse_panel_csv, panel_to_csv, read_panel_csv, write_panel_csv
from .strategy import (
    BudgetConstraint,
    BudgetReport,
    BudgetScope,
    Duty,
    EconomicParameter,
    SanctionBlock,
    SanctionSchedule,
    ScenarioReport,
    Strategy,
    aggregate_strategy_cost,
    apply_sanctions,
    bind,
    check_budget,
    compare_strategies,
    sanction_mask,
    strategy_cost,
)
from .synth import ShockEvent, SynthConfig, generate_panel

__version__ = "0.1.0"
