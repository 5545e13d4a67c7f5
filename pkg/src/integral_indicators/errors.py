"""Exception hierarchy shared by the library and the CLI."""


class IndicatorError(Exception):
    """Base class for all errors raised by this package."""


class PanelError(IndicatorError, ValueError):
    """A panel violates its shape, finiteness, or identifier invariants."""


class EpochRangeError(IndicatorError, IndexError):
    def __init__(self, t: int, k: int, t_max: int):
        self.t, self.k, self.t_max = t, k, t_max
        super().__init__(
            f"epoch t={t} out of range for k={k}, T_max={t_max} "
            f"(valid epochs are {k + 1}..{t_max + 1})"
        )


class InsufficientDataError(IndicatorError):
    """The panel has fewer periods than the window length."""


class DimensionError(IndicatorError, ValueError):
    pass


class BindingError(IndicatorError):
    """A strategy references parameters or periods the panel does not have."""

    def __init__(self, message: str, unknown: list[str] | None = None):
        self.unknown = list(unknown or [])
        super().__init__(message)


class ScheduleError(IndicatorError):
    """A sanction schedule references unknown duties or has a bad interval."""


class ConfigError(IndicatorError, ValueError):
    """Invalid generator configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
