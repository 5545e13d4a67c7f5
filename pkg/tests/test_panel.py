import numpy as np
import pytest

from integral_indicators import PanelError, SeriesPanel, panel_to_csv, parse_panel_csv


def test_rejects_bad_shapes_and_values():
    with pytest.raises(PanelError):
        SeriesPanel(["a"], np.zeros((1, 0)))
    with pytest.raises(PanelError):
        SeriesPanel(["a", "b"], np.zeros((1, 3)))
    with pytest.raises(PanelError, match="duplicate"):
        SeriesPanel(["a", "a"], np.zeros((2, 3)))
    with pytest.raises(PanelError, match="non-finite"):
        SeriesPanel(["a"], [[1.0, np.nan]])


def test_values_are_read_only_copy():
    src = np.ones((2, 3))
    panel = SeriesPanel(["a", "b"], src)
    src[0, 0] = 5.0
    assert panel.values[0, 0] == 1.0
    with pytest.raises(ValueError):
        panel.values[0, 0] = 2.0


def test_csv_round_trip_is_bit_exact():
    rng = np.random.default_rng(0)
    values = rng.standard_normal((4, 9)) * 10.0 ** rng.integers(-300, 300, (4, 9))
    values[0, 0] = 5e-324
    values[1, 1] = -0.0
    panel = SeriesPanel(["a", "b", "c", "d"], values)
    back = parse_panel_csv(panel_to_csv(panel))
    assert back.identical_to(panel)


def test_csv_accepts_scientific_notation():
    panel = parse_panel_csv("period,a,b\n1,1e3,-2.5E-2\n2,3,4\n")
    assert panel.values.tolist() == [[1000.0, 3.0], [-0.025, 4.0]]
    assert panel.periods == range(1, 3)


@pytest.mark.parametrize(
    "text, match",
    [
        ("", "empty"),
        ("time,a\n1,2\n", "period"),
        ("period,a\n2,1.0\n", "ascend"),
        ("period,a\n1,abc\n", "bad number"),
        ("period,a\n1,nan\n", "non-finite"),
        ("period,a,b\n1,2\n", "expected 3"),
        ("period,a,a\n1,2,3\n", "duplicate"),
        ("period,a\n", "no period rows"),
    ],
)
def test_csv_parse_errors(text, match):
    with pytest.raises(PanelError, match=match):
        parse_panel_csv(text)
