"""Deterministic CSV output shared by trajectories and sweeps."""

import math


def format_value(x):
    if isinstance(x, (bool,)):
        return "1" if x else "0"
    if isinstance(x, (int, str)):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    return "%.17g" % x


def write_table(path, header, rows):
    """Header line plus comma-separated rows, 17 significant digits."""
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")
    return path
