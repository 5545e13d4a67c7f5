"""Scenario files: duties, strategies, sanction blocks and budget as JSON.

Example::

    {
      "window": {"k": 6, "mode": "pearson"},
      "duties": [
        {"duty_id": "concept_engineer_docs", "position": "Concept engineer",
         "description": "Providing technical documentation for the construction site",
         "mapped_parameters": ["design_docs_cost"], "compliance": 1}
      ],
      "strategies": [
        {"label": "baseline", "duty_ids": ["concept_engineer_docs"]},
        {"label": "sanctions", "duty_ids": ["concept_engineer_docs"],
         "active_periods": {"concept_engineer_docs": [[1, 52]]}}
      ],
      "blocks": [{"duty_id": "concept_engineer_docs", "from": 1, "to": 19}],
      "budget": {"cap": 1000000.0, "scope": "per_period"},
      "economic_parameters": [
        {"label": "Line of credit", "baseline": 100, "alternative": 126, "unit": "%"}
      ]
    }

The first strategy is the baseline and the second the alternative, unless
top-level ``baseline`` / ``alternative`` name other labels. Blocks apply to
the alternative. ``active_periods`` entries are period numbers or inclusive
``[from, to]`` pairs.

Structural problems raise :class:`ScenarioParseError`; references to
undeclared duties or to parameters missing from the panel raise
:class:`IntegrityError`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from os import PathLike
from typing import Any

from .core import WindowSpec
from .errors import IndicatorError
from .panel import SeriesPanel
from .strategy import (
    BudgetConstraint,
    Duty,
    EconomicParameter,
    SanctionBlock,
    SanctionSchedule,
    Strategy,
)

_TOP_LEVEL = {
    "window",
    "duties",
    "strategies",
    "blocks",
    "budget",
    "economic_parameters",
    "baseline",
    "alternative",
}


class ScenarioParseError(IndicatorError):
    pass


class IntegrityError(IndicatorError):
    def __init__(self, dangling: list[str]):
        self.dangling = dangling
        super().__init__("dangling references: " + "; ".join(dangling))


@dataclass(frozen=True)
class ScenarioFile:
    window: WindowSpec
    duties: tuple[Duty, ...]
    strategies: tuple[tuple[str, tuple[str, ...], dict[str, frozenset[int]]], ...]
    schedule: SanctionSchedule
    budget: BudgetConstraint | None
    economic: tuple[EconomicParameter, ...]
    baseline_label: str
    alternative_label: str

    def resolve(self, panel: SeriesPanel) -> tuple[Strategy, Strategy]:
        """Check every reference and build the baseline and alternative strategies."""
        dangling = []
        declared = {d.duty_id: d for d in self.duties}
        known = set(panel.parameter_ids)
        for d in self.duties:
            for p in sorted(d.mapped_parameters - known):
                dangling.append(f"duty {d.duty_id!r} maps unknown parameter {p!r}")
        for label, duty_ids, active in self.strategies:
            for d in duty_ids:
                if d not in declared:
                    dangling.append(f"strategy {label!r} references undeclared duty {d!r}")
            for d in active:
                if d not in duty_ids:
                    dangling.append(f"strategy {label!r} sets periods for unlisted duty {d!r}")
            for d, periods in active.items():
                bad = sorted(t for t in periods if not 1 <= t <= panel.t_max)
                if bad:
                    dangling.append(
                        f"strategy {label!r} duty {d!r} active outside 1..{panel.t_max}: {bad}"
                    )
        labels = {label: (ids, active) for label, ids, active in self.strategies}
        alt_ids = labels[self.alternative_label][0]
        for i, b in enumerate(self.schedule.blocks):
            if b.duty_id not in declared:
                dangling.append(f"blocks[{i}] references undeclared duty {b.duty_id!r}")
            elif b.duty_id not in alt_ids:
                dangling.append(
                    f"blocks[{i}] duty {b.duty_id!r} is not in strategy {self.alternative_label!r}"
                )
        if dangling:
            raise IntegrityError(dangling)

        def build(label: str) -> Strategy:
            ids, active = labels[label]
            return Strategy(label, tuple(declared[d] for d in ids), active)

        return build(self.baseline_label), build(self.alternative_label)


def _require(obj: Any, key: str, where: str) -> Any:
    if not isinstance(obj, dict):
        raise ScenarioParseError(f"{where}: expected an object")
    if key not in obj:
        raise ScenarioParseError(f"{where}: missing field {key!r}")
    return obj[key]


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioParseError(f"{where}: expected an integer, got {value!r}")
    return value


def _number(value: Any, where: str, optional: bool = False) -> float | None:
    if value is None and optional:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioParseError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _periods(spec: Any, where: str) -> frozenset[int]:
    if not isinstance(spec, list):
        raise ScenarioParseError(f"{where}: expected a list of periods or [from, to] pairs")
    out: set[int] = set()
    for j, item in enumerate(spec):
        if isinstance(item, list):
            if len(item) != 2:
                raise ScenarioParseError(f"{where}[{j}]: interval must be [from, to]")
            a, b = _int(item[0], f"{where}[{j}]"), _int(item[1], f"{where}[{j}]")
            if a > b:
                raise ScenarioParseError(f"{where}[{j}]: from {a} is after to {b}")
            out.update(range(a, b + 1))
        else:
            out.add(_int(item, f"{where}[{j}]"))
    return frozenset(out)


def parse_scenario(data: Any) -> ScenarioFile:
    if not isinstance(data, dict):
        raise ScenarioParseError("scenario must be a JSON object")
    if "optimize" in data or "objective" in data:
        raise ScenarioParseError(
            "duty-set optimization is not supported; scenarios are evaluated as given"
        )
    unknown = sorted(set(data) - _TOP_LEVEL)
    if unknown:
        raise ScenarioParseError(f"unknown top-level fields: {unknown}")

    window = _require(data, "window", "scenario")
    try:
        spec = WindowSpec(_int(_require(window, "k", "window"), "window.k"),
                          window.get("mode", "pearson"))
    except ValueError as exc:
        raise ScenarioParseError(f"window: {exc}") from None

    duties = []
    seen = set()
    for i, d in enumerate(_require(data, "duties", "scenario")):
        where = f"duties[{i}]"
        duty_id = _require(d, "duty_id", where)
        if not isinstance(duty_id, str) or not duty_id:
            raise ScenarioParseError(f"{where}.duty_id: expected a non-empty string")
        if duty_id in seen:
            raise ScenarioParseError(f"{where}: duplicate duty_id {duty_id!r}")
        seen.add(duty_id)
        mapped = _require(d, "mapped_parameters", where)
        if not isinstance(mapped, list) or not mapped or not all(isinstance(p, str) for p in mapped):
            raise ScenarioParseError(f"{where}.mapped_parameters: expected a non-empty list of ids")
        compliance = d.get("compliance", 1)
        if compliance not in (0, 1) or isinstance(compliance, bool):
            raise ScenarioParseError(f"{where}.compliance: must be 0 or 1")
        duties.append(
            Duty(
                duty_id=duty_id,
                mapped_parameters=frozenset(mapped),
                position=str(d.get("position", "")),
                description=str(d.get("description", "")),
                compliance=compliance,
            )
        )

    strategies = []
    for i, s in enumerate(_require(data, "strategies", "scenario")):
        where = f"strategies[{i}]"
        label = _require(s, "label", where)
        duty_ids = _require(s, "duty_ids", where)
        if not isinstance(duty_ids, list) or not all(isinstance(d, str) for d in duty_ids):
            raise ScenarioParseError(f"{where}.duty_ids: expected a list of duty ids")
        if len(set(duty_ids)) != len(duty_ids):
            raise ScenarioParseError(f"{where}.duty_ids: duplicate entries")
        active_raw = s.get("active_periods", {})
        if not isinstance(active_raw, dict):
            raise ScenarioParseError(f"{where}.active_periods: expected an object")
        active = {
            d: _periods(spec_, f"{where}.active_periods.{d}") for d, spec_ in active_raw.items()
        }
        strategies.append((str(label), tuple(duty_ids), active))
    labels = [s[0] for s in strategies]
    if len(strategies) < 2:
        raise ScenarioParseError("strategies: need at least two (baseline and alternative)")
    if len(set(labels)) != len(labels):
        raise ScenarioParseError("strategies: labels must be unique")
    baseline = data.get("baseline", labels[0])
    alternative = data.get("alternative", labels[1])
    for key, label in (("baseline", baseline), ("alternative", alternative)):
        if label not in labels:
            raise ScenarioParseError(f"{key}: no strategy labelled {label!r}")

    blocks = []
    for i, b in enumerate(data.get("blocks", [])):
        where = f"blocks[{i}]"
        start = _int(_require(b, "from", where), f"{where}.from")
        end = _int(_require(b, "to", where), f"{where}.to")
        duty_id = _require(b, "duty_id", where)
        if start > end:
            raise ScenarioParseError(f"{where}: from {start} is after to {end}")
        if start < 1:
            raise ScenarioParseError(f"{where}: from {start} < 1")
        blocks.append(SanctionBlock(str(duty_id), start, end))

    budget = None
    if data.get("budget") is not None:
        raw = data["budget"]
        try:
            budget = BudgetConstraint(
                _number(_require(raw, "cap", "budget"), "budget.cap"),
                raw.get("scope", "per_period"),
            )
        except ValueError as exc:
            raise ScenarioParseError(f"budget: {exc}") from None

    economic = []
    for i, e in enumerate(data.get("economic_parameters", [])):
        where = f"economic_parameters[{i}]"
        economic.append(
            EconomicParameter(
                label=str(_require(e, "label", where)),
                baseline=_number(e.get("baseline"), f"{where}.baseline", optional=True),
                alternative=_number(e.get("alternative"), f"{where}.alternative", optional=True),
                unit=str(e.get("unit", "")),
            )
        )

    return ScenarioFile(
        window=spec,
        duties=tuple(duties),
        strategies=tuple(strategies),
        schedule=SanctionSchedule(tuple(blocks)),
        budget=budget,
        economic=tuple(economic),
        baseline_label=baseline,
        alternative_label=alternative,
    )


def read_scenario(path: str | PathLike) -> ScenarioFile:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioParseError(f"invalid JSON: {exc}") from None
    return parse_scenario(data)
