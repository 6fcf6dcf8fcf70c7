"""Static SVG line plots rendered from result tables.

Plots are a convenience view of the CSV data. Output is byte-stable: the
SVG id salt is fixed and no date metadata is written.
"""
import io
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .errors import ColumnMissing  # noqa: E402
from .results import ResultTable  # noqa: E402


@dataclass(frozen=True)
class PlotSpec:
    x: str
    y: tuple
    title: str = ""
    x_label: str = ""
    y_label: str = ""
    x_log: bool = False
    y_log: bool = False
    y_scale: float = 1.0  # multiply y values (e.g. 1e18 for aW)
    labels: tuple = field(default=())


def render_line_plot(table: ResultTable, spec: PlotSpec) -> str:
    """Standalone SVG document with one line per entry of ``spec.y``."""
    if len(table) == 0:
        raise ColumnMissing("table has no rows to plot")
    x = table.column(spec.x)
    ys = [table.column(name) for name in spec.y]
    with plt.rc_context({"svg.hashsalt": "cpbfridge", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        try:
            labels = spec.labels or spec.y
            for y, label in zip(ys, labels):
                ax.plot(x, np.asarray(y) * spec.y_scale, marker=".", label=label)
            if spec.x_log:
                ax.set_xscale("log")
            if spec.y_log:
                ax.set_yscale("log")
            ax.set_xlabel(spec.x_label or f"{spec.x} [{table.unit(spec.x)}]")
            ax.set_ylabel(spec.y_label or ", ".join(spec.y))
            if spec.title:
                ax.set_title(spec.title)
            ax.grid(True, alpha=0.3)
            ax.legend()
            fig.tight_layout()
            buf = io.StringIO()
            fig.savefig(buf, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return buf.getvalue()
