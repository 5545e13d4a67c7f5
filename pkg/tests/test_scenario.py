import copy

import pytest

from integral_indicators.scenario import IntegrityError, ScenarioParseError, parse_scenario

BASE = {
    "window": {"k": 6, "mode": "pearson"},
    "duties": [
        {"duty_id": "docs", "mapped_parameters": ["x001", "x002"], "position": "Concept engineer"},
        {"duty_id": "solutions", "mapped_parameters": ["x003"], "compliance": 1},
    ],
    "strategies": [
        {"label": "baseline", "duty_ids": ["docs", "solutions"]},
        {"label": "sanctions", "duty_ids": ["docs", "solutions"],
         "active_periods": {"docs": [[1, 4], 9, [12, 12]]}},
    ],
    "blocks": [{"duty_id": "docs", "from": 1, "to": 19}, {"duty_id": "solutions", "from": 8, "to": 9}],
    "budget": {"cap": 5000.0, "scope": "cumulative"},
    "economic_parameters": [{"label": "Loan rate", "baseline": 10, "alternative": 13, "unit": "%"}],
}


def scenario(**changes):
    data = copy.deepcopy(BASE)
    data.update(changes)
    return data


def test_parse_full_example(panel_5x20):
    sf = parse_scenario(scenario())
    assert sf.window.k == 6
    assert [b.duty_id for b in sf.schedule.blocks] == ["docs", "solutions"]
    assert sf.budget.cap == 5000.0 and sf.budget.scope.value == "cumulative"
    assert sf.economic[0].delta == 3
    base, alt = sf.resolve(panel_5x20)
    assert base.label == "baseline" and alt.label == "sanctions"
    assert alt.active["docs"] == frozenset({1, 2, 3, 4, 9, 12})
    assert not base.active


def test_explicit_baseline_selection(panel_5x20):
    base, alt = parse_scenario(scenario(baseline="sanctions", alternative="baseline")).resolve(panel_5x20)
    assert (base.label, alt.label) == ("sanctions", "baseline")


def test_reversed_block_reports_index():
    data = scenario()
    data["blocks"][1] = {"duty_id": "solutions", "from": 9, "to": 8}
    with pytest.raises(ScenarioParseError, match=r"blocks\[1\]: from 9 is after to 8"):
        parse_scenario(data)


def test_reversed_active_interval():
    data = scenario()
    data["strategies"][1]["active_periods"] = {"docs": [[5, 2]]}
    with pytest.raises(ScenarioParseError, match="from 5 is after to 2"):
        parse_scenario(data)


@pytest.mark.parametrize(
    "changes, pattern",
    [
        ({"optimize": True}, "optimization is not supported"),
        ({"objective": "min"}, "optimization is not supported"),
        ({"extra": 1}, "unknown top-level"),
        ({"window": {"k": 1}}, "window"),
        ({"window": {"k": "6"}}, "window.k"),
        ({"strategies": [{"label": "a", "duty_ids": []}]}, "at least two"),
        ({"strategies": [{"label": "a", "duty_ids": []}, {"label": "a", "duty_ids": []}]}, "unique"),
        ({"duties": [{"duty_id": "d", "mapped_parameters": []}]}, r"duties\[0\].mapped_parameters"),
        ({"duties": [{"duty_id": "d", "mapped_parameters": ["a"], "compliance": 2}]}, "compliance"),
        ({"budget": {"cap": -1}}, "budget"),
        ({"baseline": "nobody"}, "baseline"),
    ],
)
def test_parse_errors(changes, pattern):
    with pytest.raises(ScenarioParseError, match=pattern):
        parse_scenario(scenario(**changes))


def test_integrity_lists_every_dangling_reference(panel_5x20):
    data = scenario()
    data["duties"][0]["mapped_parameters"] = ["x001", "ghost_param"]
    data["strategies"][1]["duty_ids"] = ["docs", "solutions", "phantom"]
    data["blocks"].append({"duty_id": "missing_duty", "from": 2, "to": 3})
    sf = parse_scenario(data)
    with pytest.raises(IntegrityError) as err:
        sf.resolve(panel_5x20)
    text = "\n".join(err.value.dangling)
    assert len(err.value.dangling) == 3
    for name in ("ghost_param", "phantom", "missing_duty"):
        assert name in text


def test_block_on_duty_outside_alternative(panel_5x20):
    data = scenario()
    data["strategies"][1]["duty_ids"] = ["docs"]
    data["strategies"][1]["active_periods"] = {}
    with pytest.raises(IntegrityError, match="solutions"):
        parse_scenario(data).resolve(panel_5x20)


def test_active_period_outside_panel(panel_5x20):
    data = scenario()
    data["strategies"][1]["active_periods"] = {"docs": [[19, 22]]}
    with pytest.raises(IntegrityError, match=r"\[21, 22\]"):
        parse_scenario(data).resolve(panel_5x20)
