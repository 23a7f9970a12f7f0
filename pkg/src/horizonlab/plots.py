"""Plot scripts for emitted CSV files.

Scripts are standalone matplotlib programs written next to the data; running one
saves a PNG of the same stem. Nothing here imports matplotlib.
"""
from __future__ import annotations

from enum import StrEnum
from pathlib import Path
from string import Template
from typing import Dict, List, Sequence

from horizonlab.costmeter.fit import fit_poly_log, fit_power_law
from horizonlab.exceptions import FormatError, OutputError
from horizonlab.utils import read_csv
from horizonlab.utils.csvio import column


class PlotKind(StrEnum):
    OVERLAP = "overlap"
    DEVIATION = "deviation"
    COST_SCAN = "cost_scan"
    CONVERGENCE = "convergence"
    DIVERGENCE = "divergence"
    HORIZON = "horizon"


COLUMNS: Dict[PlotKind, tuple[str, str]] = {
    PlotKind.OVERLAP: ("time", "overlap_re"),
    PlotKind.DEVIATION: ("time", "deviation"),
    PlotKind.COST_SCAN: ("T", "model_cost"),
    PlotKind.CONVERGENCE: ("D", "error"),
    PlotKind.DIVERGENCE: ("step", "separation"),
    PlotKind.HORIZON: ("dE", "tp_empirical"),
}
PLOT_PREFIX = "plot_"
LOG_AXES = {PlotKind.COST_SCAN, PlotKind.CONVERGENCE, PlotKind.HORIZON}

_HEAD = Template('''\
#!/usr/bin/env python3
"""$title"""
import csv
import math
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent


def load(name, x, y):
    with open(HERE / name, encoding="utf-8", newline="") as f:
        rows = list(csv.DictReader(f))
    return [float(r[x]) for r in rows], [float(r[y]) for r in rows]


fig, ax = plt.subplots(figsize=(7, 4.5))
''')

_SERIES = Template('''\
xs, ys = load("$name", "$x", "$y")
ax.$method(xs, ys, $style, label="$name")
''')

_SQRT2 = '''\
ax.axhline(2 ** 0.5, color="k", linestyle="--", linewidth=0.8, label="sqrt(2)")
'''

_FITS = Template('''\
ax.plot(xs, [math.exp($pl_b) * x ** $pl_p for x in xs], "--", label="a T^p, p=$pl_p_fmt, r2=$pl_r2")
ax.plot(xs, [math.exp($lg_b) * math.log2(x) ** $lg_q for x in xs], ":",
        label="a (log2 T)^q, q=$lg_q_fmt, r2=$lg_r2")
''')

_TAIL = Template('''\
ax.set_xlabel("$x")
ax.set_ylabel("$y")
ax.legend(fontsize="small")
fig.tight_layout()
fig.savefig(Path(__file__).with_suffix(".png"), dpi=150)
''')


def _check(paths: Sequence[Path], kind: PlotKind) -> List[tuple[List[float], List[float]]]:
    x, y = COLUMNS[kind]
    data = []
    for path in paths:
        header, rows = read_csv(path, (x, y))
        if not rows:
            raise FormatError(f"No rows under column '{y}' in {path}")
        data.append((column(header, rows, x), column(header, rows, y)))
    return data


def emit_plot_script(csv_paths: Sequence[Path | str], kind: PlotKind | str, out: Path | str | None = None) -> Path:
    """Write a plotting script for csv_paths.

    Scaling kinds use log axes, cost scans overlay both fitted laws, the deviation plot
    carries a sqrt(2) guide.

    :raises FormatError: missing or empty CSV, or a missing column, named in the message
    """
    kind = PlotKind(kind)
    paths = [Path(p) for p in csv_paths]
    if not paths:
        raise FormatError("No CSV file to plot.")
    data = _check(paths, kind)
    x, y = COLUMNS[kind]
    if out is None:
        out = paths[0].with_name(f"{PLOT_PREFIX}{paths[0].stem}.py")
    out = Path(out)

    method = "loglog" if kind in LOG_AXES else "plot"
    style = '"o"' if kind in LOG_AXES else '"-"'
    parts = [_HEAD.substitute(title=f"{kind.value} plot of {', '.join(p.name for p in paths)}.")]
    for path in paths:
        rel = path.name if path.parent == out.parent else str(path.resolve())
        parts.append(_SERIES.substitute(name=rel, x=x, y=y, method=method, style=style))
    if kind == PlotKind.DEVIATION:
        parts.append(_SQRT2)
    if kind == PlotKind.COST_SCAN:
        xs, ys = data[0]
        if all(v > 1 for v in xs) and all(v > 0 for v in ys) and len(xs) > 1:
            pl, lg = fit_power_law(xs, ys), fit_poly_log(xs, ys)
            parts.append(_FITS.substitute(
                pl_b=repr(pl.intercept), pl_p=repr(pl.exponent), pl_p_fmt=f"{pl.exponent:.3g}",
                pl_r2=f"{pl.r2:.3f}", lg_b=repr(lg.intercept), lg_q=repr(lg.exponent),
                lg_q_fmt=f"{lg.exponent:.3g}", lg_r2=f"{lg.r2:.3f}",
            ))
    parts.append(_TAIL.substitute(x=x, y=y))

    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text("".join(parts), encoding="utf-8")
    except OSError as e:
        raise OutputError("Could not write plot script.", path=str(out)) from e
    return out
