"""CSV, gnuplot command files and the run manifest."""

import json
import os
import platform
import time

import numpy as np

from nlstirap import __version__
from nlstirap._table import write_table

SCHEMA_VERSION = 1

_COLUMNS = {
    "stability": ("region", "growth_rate", "growth_peak", "t_peak"),
    "adiabaticity": ("r", "region"),
    "efficiency": ("efficiency",),
}
_FLAG_NAME = {"stability": None, "adiabaticity": "degenerate", "efficiency": "failed"}
_INT_FIELDS = {"region"}


def sweep_rows(result):
    names = _COLUMNS[result.kind]
    flag = _FLAG_NAME[result.kind]
    header = ["U_aa", "Delta_u", *names] + ([flag] if flag else [])
    rows = []
    for i, j, u, d in result.grid.cells():
        row = [u, d]
        for n in names:
            v = result.fields[n][i, j]
            row.append(int(v) if n in _INT_FIELDS else float(v))
        if flag:
            row.append(int(result.flags[i, j]))
        rows.append(row)
    return header, rows


def write_sweep_csv(result, path):
    header, rows = sweep_rows(result)
    return write_table(path, header, rows)


def write_optimal_line(result, path):
    line = result.optimal_line
    rows = zip(line["U_aa"], line["Delta_u"], line["efficiency"])
    return write_table(path, ["U_aa", "Delta_u_opt", "efficiency"], rows)


def write_gnuplot(csv_path, column, title, zlabel, x="U_aa", y="Delta_u", xcol=1, ycol=2):
    """Heatmap command file next to ``csv_path``; returns its path."""
    gp = os.path.splitext(csv_path)[0] + ".gp"
    name = os.path.basename(csv_path)
    png = os.path.splitext(name)[0] + ".png"
    lines = [
        f"# heatmap of {zlabel} over ({x}, {y}); run with: gnuplot {os.path.basename(gp)}",
        "set datafile separator ','",
        "set terminal pngcairo size 900,700",
        f"set output '{png}'",
        f"set title '{title}'",
        f"set xlabel '{x} (rad/us)'",
        f"set ylabel '{y} (rad/us)'",
        f"set cblabel '{zlabel}'",
        "set view map",
        f"plot '{name}' every ::1 using {xcol}:{ycol}:{column} with image notitle",
        "",
    ]
    with open(gp, "w", newline="\n") as fh:
        fh.write("\n".join(lines))
    return gp


def write_trace_gnuplot(csv_path, columns):
    gp = os.path.splitext(csv_path)[0] + ".gp"
    name = os.path.basename(csv_path)
    idx = {c: k + 1 for k, c in enumerate(columns)}
    png = os.path.splitext(name)[0] + ".png"
    series = ", ".join(f"'{name}' every ::1 using 1:{idx[c]} with lines title '{c}'"
                       for c in ("P_a", "P_e", "P_g") if c in idx)
    lines = [
        f"# populations against time; run with: gnuplot {os.path.basename(gp)}",
        "set datafile separator ','",
        "set terminal pngcairo size 900,600",
        f"set output '{png}'",
        "set xlabel 't (us)'",
        "set ylabel 'population'",
        f"plot {series}",
        "",
    ]
    with open(gp, "w", newline="\n") as fh:
        fh.write("\n".join(lines))
    return gp


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, float) and x != x:
        return None
    return x


def write_manifest(path, kind, config, outputs, started, failures=(), extra=None):
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "code_version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "started_unix": started,
        "wall_clock_s": time.time() - started,
        "config": _jsonable(config),
        "outputs": [os.path.basename(o) for o in outputs],
        "failed_cells": _jsonable(list(failures)),
    }
    if extra:
        manifest.update(_jsonable(extra))
    with open(path, "w", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
