"""Result tables and their CSV representation.

Layout::

    # experiment: otto_sweep
    # config_hash: 0123abcd4567
    # units: Hz,W,W,W,W/K,1
    f_drive,q_dot_cold,...
    1.00000000000000000e+06,...
    # provenance: cpbfridge 0.1.0 config_hash=0123abcd4567
    # note: free-form footer lines

Values are written in full-precision scientific notation; failed sweep
points are kept as rows (NaN values plus a flag column).
"""
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import ColumnMissing, ShapeMismatch


@dataclass
class ResultTable:
    columns: list
    units: list
    rows: np.ndarray
    experiment: str = ""
    config_hash: str = ""
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        self.columns = list(self.columns)
        self.units = list(self.units)
        self.rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if self.rows.size == 0:
            self.rows = self.rows.reshape(0, len(self.columns))
        if len(self.units) != len(self.columns):
            raise ShapeMismatch("one unit per column is required")
        if self.rows.shape[1] != len(self.columns):
            raise ShapeMismatch(f"rows have {self.rows.shape[1]} values for {len(self.columns)} columns")

    def __len__(self):
        return self.rows.shape[0]

    def column(self, name):
        try:
            return self.rows[:, self.columns.index(name)]
        except ValueError:
            raise ColumnMissing(f"no column {name!r}; available: {', '.join(self.columns)}") from None

    def unit(self, name):
        if name not in self.columns:
            raise ColumnMissing(f"no column {name!r}")
        return self.units[self.columns.index(name)]

    def to_csv(self) -> str:
        out = [
            f"# experiment: {self.experiment}",
            f"# config_hash: {self.config_hash}",
            "# units: " + ",".join(self.units),
            ",".join(self.columns),
        ]
        for row in self.rows:
            out.append(",".join(format(float(v), ".17e") for v in row))
        out.append(f"# provenance: cpbfridge {__version__} config_hash={self.config_hash}")
        for k in sorted(self.notes):
            out.append(f"# {k}: {self.notes[k]}")
        return "\n".join(out) + "\n"

    @classmethod
    def from_csv(cls, text) -> "ResultTable":
        header, notes, rows, columns = {}, {}, [], None
        for line in text.splitlines():
            if not line.strip():
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(": ")
                target = header if columns is None else notes
                target[key] = value
                continue
            if columns is None:
                columns = line.split(",")
                continue
            rows.append([float(v) for v in line.split(",")])
        if columns is None:
            raise ValueError("CSV has no column header")
        units = header.get("units", ",".join([""] * len(columns))).split(",")
        notes.pop("provenance", None)
        rows = np.array(rows, dtype=float).reshape(len(rows), len(columns))
        return cls(columns, units, rows, header.get("experiment", ""), header.get("config_hash", ""), notes)
