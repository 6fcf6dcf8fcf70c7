import math

import numpy as np
import pytest

from cpbfridge.errors import ColumnMissing, ShapeMismatch
from cpbfridge.results import ResultTable


def _table():
    rows = np.array([[1e6, 1.5e-16, math.nan], [2e6, -3.25e-17, 1.0]])
    return ResultTable(["f_drive", "q_dot_cold", "failed"], ["Hz", "W", "1"], rows, "otto_sweep", "abc123def456",
                       {"error_row_0000": "step too coarse"})


def test_csv_layout():
    text = _table().to_csv()
    lines = text.splitlines()
    assert lines[0] == "# experiment: otto_sweep"
    assert lines[1] == "# config_hash: abc123def456"
    assert lines[2] == "# units: Hz,W,1"
    assert lines[3] == "f_drive,q_dot_cold,failed"
    assert lines[4].split(",")[0] == "1.00000000000000000e+06"
    assert lines[-2].startswith("# provenance: cpbfridge")
    assert lines[-1] == "# error_row_0000: step too coarse"
    assert text.endswith("\n")


def test_csv_round_trip_is_exact():
    t = _table()
    back = ResultTable.from_csv(t.to_csv())
    assert back.columns == t.columns and back.units == t.units
    np.testing.assert_array_equal(back.rows, t.rows)
    assert back.notes == t.notes and back.config_hash == t.config_hash
    assert back.to_csv() == t.to_csv()


def test_column_access():
    t = _table()
    np.testing.assert_array_equal(t.column("f_drive"), [1e6, 2e6])
    assert t.unit("q_dot_cold") == "W"
    with pytest.raises(ColumnMissing):
        t.column("nope")
    with pytest.raises(ColumnMissing):
        t.unit("nope")


def test_shape_checks():
    with pytest.raises(ShapeMismatch):
        ResultTable(["a", "b"], ["1"], np.zeros((2, 2)))
    with pytest.raises(ShapeMismatch):
        ResultTable(["a", "b"], ["1", "1"], np.zeros((2, 3)))
    assert len(ResultTable(["a"], ["1"], np.zeros((0, 1)))) == 0
    with pytest.raises(ValueError):
        ResultTable.from_csv("# only a comment\n")
