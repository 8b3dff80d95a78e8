"""Sweep axes and per-cell result storage."""

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SweepGrid:
    """Rectangular ``(U_aa, Delta_u)`` grid; cells are ordered row-major with ``U_aa`` outermost."""

    U_aa: tuple
    Delta_u: tuple

    def __post_init__(self):
        for name in ("U_aa", "Delta_u"):
            axis = tuple(float(x) for x in getattr(self, name))
            if not axis:
                raise ValueError(f"{name} axis is empty")
            if not all(math.isfinite(x) for x in axis):
                raise ValueError(f"{name} axis has non-finite values")
            if any(b <= a for a, b in zip(axis, axis[1:])):
                raise ValueError(f"{name} axis must be strictly increasing")
            object.__setattr__(self, name, axis)

    @classmethod
    def from_ranges(cls, u_range=(-10.0, 10.0), n_u=101, d_range=(-10.0, 10.0), n_d=101):
        return cls(U_aa=tuple(_axis(u_range, n_u)), Delta_u=tuple(_axis(d_range, n_d)))

    @property
    def shape(self):
        return len(self.U_aa), len(self.Delta_u)

    @property
    def resolution(self):
        return self.shape

    def cells(self):
        """``(i, j, U_aa, Delta_u)`` in row-major order."""
        for i, u in enumerate(self.U_aa):
            for j, d in enumerate(self.Delta_u):
                yield i, j, u, d

    def index_of(self, U_aa, Delta_u):
        """Indices of the grid node nearest to ``(U_aa, Delta_u)``."""
        i = int(np.argmin(np.abs(np.asarray(self.U_aa) - U_aa)))
        j = int(np.argmin(np.abs(np.asarray(self.Delta_u) - Delta_u)))
        return i, j


def _axis(bounds, n):
    lo, hi = map(float, bounds)
    n = int(n)
    if n < 1:
        raise ValueError(f"axis needs at least one point, got {n}")
    if n == 1:
        if lo != hi:
            raise ValueError("a one-point axis needs equal bounds")
        return [lo]
    return np.linspace(lo, hi, n).tolist()


@dataclass
class SweepResult:
    """Per-cell arrays of shape ``grid.shape`` keyed by quantity name.

    ``flags`` is 0 for a clean cell; the meaning of non-zero codes depends on
    ``kind`` (see :data:`FLAG_CODES`). ``optimal_line`` is filled by efficiency
    sweeps: one ``(Delta_u, efficiency)`` pair per ``U_aa``.
    """

    kind: str
    grid: SweepGrid
    fields: dict
    flags: np.ndarray
    optimal_line: dict = None
    settings: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, arr in self.fields.items():
            if np.shape(arr) != self.grid.shape:
                raise ValueError(f"field {name!r} has shape {np.shape(arr)}, expected {self.grid.shape}")

    def __getitem__(self, name):
        return self.fields[name]

    def at(self, name, U_aa, Delta_u):
        i, j = self.grid.index_of(U_aa, Delta_u)
        return self.fields[name][i, j]

    def failed_cells(self):
        return [
            {"U_aa": u, "Delta_u": d, "flag": int(self.flags[i, j]),
             "meaning": FLAG_CODES.get(self.kind, {}).get(int(self.flags[i, j]), "")}
            for i, j, u, d in self.grid.cells() if self.flags[i, j] != 0
        ]


FLAG_CODES = {
    "stability": {},
    "adiabaticity": {
        1: "degenerate at t_eval; value taken from t_eval +- 1e-3 us",
        2: "degenerate or singular; r undefined",
    },
    "efficiency": {
        1: "integration failed",
    },
}
