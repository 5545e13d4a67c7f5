"""Seeded factor-model panels with step shocks, a stand-in for private enterprise data.

Every random quantity is a pure function of ``(seed, stream, a, b)`` via
:mod:`integral_indicators.rng`, so panels are identical whatever the chunking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from . import rng
from .errors import ConfigError
from .panel import SeriesPanel

# RNG streams
_LOADINGS = 1
_FACTORS = 2
_NOISE = 3
_EVENTS = 4

_U64_MAX = 2**64 - 1


@dataclass(frozen=True)
class ShockEvent:
    """From ``period`` on, a ``fraction`` of parameters is multiplied by ``multiplier``."""

    period: int
    fraction: float
    multiplier: float


@dataclass(frozen=True)
class SynthConfig:
    n: int
    t_max: int
    m: int = 3
    loading_scale: float = 1.0
    noise_scale: float = 1.0
    events: tuple[ShockEvent, ...] = ()
    seed: int = 0
    # all loadings set to +loading_scale instead of drawn
    equal_loadings: bool = False

    def __post_init__(self):
        events = tuple(
            e if isinstance(e, ShockEvent) else ShockEvent(**e) for e in self.events
        )
        object.__setattr__(self, "events", events)
        self.validate()

    def validate(self) -> None:
        for name in ("n", "t_max", "m", "seed"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ConfigError(name, f"must be an integer, got {value!r}")
        if self.n < 1:
            raise ConfigError("n", f"must be >= 1, got {self.n}")
        if self.t_max < 1:
            raise ConfigError("t_max", f"must be >= 1, got {self.t_max}")
        if not 1 <= self.m <= self.n:
            raise ConfigError("m", f"must satisfy 1 <= m <= n={self.n}, got {self.m}")
        for name in ("loading_scale", "noise_scale"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and np.isfinite(value) and value > 0):
                raise ConfigError(name, f"must be a finite number > 0, got {value!r}")
        if not 0 <= self.seed <= _U64_MAX:
            raise ConfigError("seed", f"must be an unsigned 64-bit integer, got {self.seed}")
        for i, e in enumerate(self.events):
            where = f"events[{i}]"
            if not 1 <= e.period <= self.t_max:
                raise ConfigError(f"{where}.period", f"must lie in 1..{self.t_max}, got {e.period}")
            if not 0.0 <= e.fraction <= 1.0:
                raise ConfigError(f"{where}.fraction", f"must lie in [0, 1], got {e.fraction}")
            if not np.isfinite(e.multiplier):
                raise ConfigError(f"{where}.multiplier", "must be finite")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SynthConfig":
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(unknown[0], "unknown configuration field")
        for required in ("n", "t_max"):
            if required not in data:
                raise ConfigError(required, "missing required field")
        events = []
        for i, e in enumerate(data.get("events", ())):
            try:
                events.append(
                    ShockEvent(int(e["period"]), float(e["fraction"]), float(e["multiplier"]))
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"events[{i}]", f"malformed event: {exc}") from None
        return cls(**{**data, "events": tuple(events)})

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "t_max": self.t_max,
            "m": self.m,
            "loading_scale": self.loading_scale,
            "noise_scale": self.noise_scale,
            "events": [vars(e).copy() for e in self.events],
            "seed": self.seed,
            "equal_loadings": self.equal_loadings,
        }


def parameter_ids(n: int) -> list[str]:
    width = len(str(n))
    return [f"p{i:0{width}d}" for i in range(1, n + 1)]


def _rows(config: SynthConfig, lo: int, hi: int, factors: np.ndarray) -> np.ndarray:
    seed = config.seed
    i = np.arange(lo, hi, dtype=np.uint64)[:, None]
    if config.equal_loadings:
        loadings = np.full((hi - lo, config.m), float(config.loading_scale))
    else:
        f = np.arange(config.m, dtype=np.uint64)[None, :]
        loadings = config.loading_scale * rng.normal(seed, _LOADINGS, i, f)
    t = np.arange(config.t_max, dtype=np.uint64)[None, :]
    # explicit sum over factors: a BLAS product may round differently per chunk shape
    values = config.noise_scale * rng.normal(seed, _NOISE, i, t)
    common = np.zeros_like(values)
    for f in range(config.m):
        common += loadings[:, f, None] * factors[None, f, :]
    values = common + values
    for e_idx, event in enumerate(config.events):
        hit = rng.uniform(seed, _EVENTS, np.uint64(e_idx), i[:, 0]) <= event.fraction
        values[hit, event.period - 1 :] *= event.multiplier
    return values


def generate_panel(config: SynthConfig, chunk_rows: int | None = None) -> SeriesPanel:
    """Draw ``values[i, t] = sum_f loading[i, f] * factor[f, t] + noise[i, t]``,
    then apply each shock event to its parameters from the event period onward.

    ``chunk_rows`` bounds how many parameter rows are generated at once; it
    affects memory only, never the result.
    """
    config.validate()
    f = np.arange(config.m, dtype=np.uint64)[:, None]
    t = np.arange(config.t_max, dtype=np.uint64)[None, :]
    factors = rng.normal(config.seed, _FACTORS, f, t)
    step = chunk_rows or config.n
    values = np.empty((config.n, config.t_max), dtype=np.float64)
    for lo in range(0, config.n, step):
        hi = min(lo + step, config.n)
        values[lo:hi] = _rows(config, lo, hi, factors)
    return SeriesPanel(parameter_ids(config.n), values)


def affected_parameters(config: SynthConfig, event_index: int) -> np.ndarray:
    """Indices of the parameters hit by ``config.events[event_index]``."""
    event = config.events[event_index]
    i = np.arange(config.n, dtype=np.uint64)
    u = rng.uniform(config.seed, _EVENTS, np.uint64(event_index), i)
    return np.flatnonzero(u <= event.fraction)
