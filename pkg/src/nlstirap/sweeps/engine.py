"""Sweep engine: per-cell evaluations scheduled over a static worker partition.

Each cell is a pure function of its coordinates and the shared settings, so
the assembled grid does not depend on the number of workers or on the order
in which chunks finish.
"""

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from nlstirap._table import write_table
from nlstirap.adiabaticity import analytic_r_from_drive, projection_from_drive
from nlstirap.errors import DegenerateSpectrumError, NlstirapError, SingularProjectionError
from nlstirap.meanfield import ATOMS, DEFAULT_SPAN, DEFAULT_TOL, SystemParams, integrate, transfer_efficiency
from nlstirap.pulses import CHIRPED, PUMP, STANDARD_PULSES, STOKES, DetuningPolicy, envelope, mixing_ratio
from nlstirap.stability import growth_rate, regions
from nlstirap.sweeps.grid import SweepGrid, SweepResult

EP_SHIFT = 1e-3
PEAK_SAMPLES = 4001


def _run_chunk(fn, chunk):
    return [fn(*args) for args in chunk]


def parallel_map(fn, tasks, workers=1):
    """``[fn(*t) for t in tasks]`` over ``workers`` processes.

    Tasks are split into ``workers`` contiguous blocks up front; results are
    reassembled in task order.
    """
    tasks = list(tasks)
    workers = max(1, min(int(workers), len(tasks) or 1))
    if workers == 1:
        return _run_chunk(fn, tasks)
    n = len(tasks)
    bounds = [(k * n // workers, (k + 1) * n // workers) for k in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_chunk, fn, tasks[a:b]) for a, b in bounds]
        out = []
        for fut in futures:
            out.extend(fut.result())
    return out


# --- stability ---------------------------------------------------------------

def _stability_row(U_aa, deltas, pulses, t_eval, times):
    deltas = np.asarray(deltas)
    om_p = envelope(t_eval, PUMP, pulses)
    om_s = envelope(t_eval, STOKES, pulses)
    reg = regions(om_p, om_s, U_aa, deltas)
    rate = growth_rate(om_p, om_s, U_aa, deltas)
    tp = envelope(times, PUMP, pulses)[:, None]
    ts = envelope(times, STOKES, pulses)[:, None]
    trace = growth_rate(tp, ts, U_aa, deltas[None, :])
    k = np.argmax(trace, axis=0)
    peak = trace[k, np.arange(len(deltas))]
    t_peak = np.where(peak > 0, times[k], np.nan)
    return reg, rate, peak, t_peak


def sweep_stability(grid, pulses=STANDARD_PULSES, t_eval=None, t_span=DEFAULT_SPAN, workers=1):
    """Region and growth rate at ``t_eval`` (default ``t_sp``) plus the peak of ``Lambda(t)``."""
    if t_eval is None:
        t_eval = pulses.t_sp
    times = np.linspace(t_span[0], t_span[1], PEAK_SAMPLES)
    fn = partial(_stability_row, deltas=grid.Delta_u, pulses=pulses, t_eval=t_eval, times=times)
    rows = parallel_map(fn, [(u,) for u in grid.U_aa], workers)
    fields = {
        "region": np.array([r[0] for r in rows], dtype=int),
        "growth_rate": np.array([r[1] for r in rows]),
        "growth_peak": np.array([r[2] for r in rows]),
        "t_peak": np.array([r[3] for r in rows]),
    }
    return SweepResult(kind="stability", grid=grid, fields=fields, flags=np.zeros(grid.shape, dtype=int),
                       settings={"t_eval": t_eval, "t_span": list(t_span), "peak_samples": PEAK_SAMPLES})


# --- adiabaticity --------------------------------------------------------------

def _r_at(t, U_aa, Delta_u, pulses, gamma):
    om_p = envelope(t, PUMP, pulses)
    om_s = envelope(t, STOKES, pulses)
    _, chi_dot = mixing_ratio(t, pulses)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return projection_from_drive(om_p, om_s, chi_dot, U_aa, Delta_u, gamma).r


def adiabaticity_cell(U_aa, Delta_u, pulses, gamma, t_eval):
    """``(r, flag)``; degenerate cells are retried at ``t_eval +- EP_SHIFT``."""
    try:
        return _r_at(t_eval, U_aa, Delta_u, pulses, gamma), 0
    except (DegenerateSpectrumError, SingularProjectionError):
        pass
    values = []
    for t in (t_eval - EP_SHIFT, t_eval + EP_SHIFT):
        try:
            values.append(_r_at(t, U_aa, Delta_u, pulses, gamma))
        except (DegenerateSpectrumError, SingularProjectionError):
            continue
    if not values:
        return math.nan, 2
    return float(np.mean(values)), 1


def _adiabaticity_row(U_aa, deltas, pulses, gamma, t_eval):
    return [adiabaticity_cell(U_aa, d, pulses, gamma, t_eval) for d in deltas]


def sweep_adiabaticity(grid, pulses=STANDARD_PULSES, gamma=1.0, t_eval=None, workers=1):
    """Adiabatic parameter ``r`` per cell at ``t_eval`` (default ``t_sp``); undefined cells are NaN."""
    if t_eval is None:
        t_eval = pulses.t_sp
    fn = partial(_adiabaticity_row, deltas=grid.Delta_u, pulses=pulses, gamma=gamma, t_eval=t_eval)
    rows = parallel_map(fn, [(u,) for u in grid.U_aa], workers)
    r = np.array([[c[0] for c in row] for row in rows])
    flags = np.array([[c[1] for c in row] for row in rows], dtype=int)
    om_p = envelope(t_eval, PUMP, pulses)
    om_s = envelope(t_eval, STOKES, pulses)
    reg = np.stack([regions(om_p, om_s, u, np.asarray(grid.Delta_u)) for u in grid.U_aa])
    return SweepResult(kind="adiabaticity", grid=grid, fields={"r": r, "region": reg}, flags=flags,
                       settings={"t_eval": t_eval, "gamma": gamma, "ep_shift": EP_SHIFT})


# --- efficiency ----------------------------------------------------------------

def efficiency_cell(U_aa, Delta_u, pulses, gamma, tol, t_span, U_ag=0.0, U_gg=0.0):
    """``(efficiency, flag)`` for the chirped scheme at effective detuning ``Delta_u``."""
    p = SystemParams(U_aa=U_aa, gamma=gamma, detuning=DetuningPolicy.chirped(Delta_u), pulses=pulses,
                     U_ag=U_ag, U_gg=U_gg)
    try:
        traj = integrate(ATOMS, p, t_span=t_span, tol=tol, t_eval=[t_span[0], t_span[1]])
        return transfer_efficiency(traj), 0
    except NlstirapError:
        return math.nan, 1


def _parabola_vertex(x, y):
    """Vertex abscissa of the parabola through three points, or ``None`` if it opens upward."""
    (x0, x1, x2), (y0, y1, y2) = x, y
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
    b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom
    if not a < 0:
        return None
    return -b / (2.0 * a)


def optimal_line(grid, eff, refine=None):
    """Per-``U_aa`` argmax over ``Delta_u`` with parabolic refinement.

    ``refine(U_aa, Delta_u) -> efficiency`` evaluates a refined detuning; the
    refined point replaces the grid maximum only if it is at least as high.
    """
    deltas = np.asarray(grid.Delta_u)
    best_d, best_e, candidates = [], [], []
    for i, _ in enumerate(grid.U_aa):
        col = eff[i]
        if np.all(np.isnan(col)):
            best_d.append(math.nan)
            best_e.append(math.nan)
            candidates.append(None)
            continue
        j = int(np.nanargmax(col))
        best_d.append(float(deltas[j]))
        best_e.append(float(col[j]))
        cand = None
        if 0 < j < len(deltas) - 1 and np.all(np.isfinite(col[j - 1:j + 2])):
            cand = _parabola_vertex(deltas[j - 1:j + 2], col[j - 1:j + 2])
            if cand is not None:
                cand = float(min(max(cand, deltas[j - 1]), deltas[j + 1]))
        candidates.append(cand)
    if refine is not None:
        refined = refine([(u, c) for u, c in zip(grid.U_aa, candidates) if c is not None])
        k = 0
        for i, c in enumerate(candidates):
            if c is None:
                continue
            e = refined[k]
            k += 1
            if math.isfinite(e) and e >= best_e[i]:
                best_d[i], best_e[i] = c, e
    return {"U_aa": list(grid.U_aa), "Delta_u": best_d, "efficiency": best_e}


def sweep_efficiency(grid, pulses=STANDARD_PULSES, gamma=1.0, tol=DEFAULT_TOL, t_span=DEFAULT_SPAN,
                     workers=1, U_ag=0.0, U_gg=0.0):
    """Transfer efficiency per cell (one ODE run each) and the optimal-detuning line."""
    fn = partial(efficiency_cell, pulses=pulses, gamma=gamma, tol=tol, t_span=tuple(t_span), U_ag=U_ag, U_gg=U_gg)
    cells = parallel_map(fn, [(u, d) for _, _, u, d in grid.cells()], workers)
    eff = np.array([c[0] for c in cells]).reshape(grid.shape)
    flags = np.array([c[1] for c in cells], dtype=int).reshape(grid.shape)

    def refine(points):
        return [c[0] for c in parallel_map(fn, points, workers)]

    line = optimal_line(grid, eff, refine)
    return SweepResult(kind="efficiency", grid=grid, fields={"efficiency": eff}, flags=flags, optimal_line=line,
                       settings={"gamma": gamma, "tol": tol, "t_span": list(t_span)})


# --- single-run trace ------------------------------------------------------------

@dataclass
class TraceBundle:
    """Aligned time series of one run; ``columns`` preserves CSV column order."""

    columns: dict = field(default_factory=dict)
    efficiency: float = math.nan

    def __getitem__(self, name):
        return self.columns[name]

    @property
    def times(self):
        return self.columns["t"]

    def to_csv(self, path):
        names = list(self.columns)
        rows = zip(*(self.columns[n] for n in names))
        return write_table(path, names, rows)


def _r_trace(times, om_p, om_s, U_aa, du_eff, gamma, pulses):
    out = np.full(len(times), math.nan)
    for k, t in enumerate(times):
        if om_s[k] == 0.0:
            continue
        _, chi_dot = mixing_ratio(float(t), pulses)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                out[k] = projection_from_drive(om_p[k], om_s[k], chi_dot, U_aa, du_eff[k], gamma).r
        except (DegenerateSpectrumError, SingularProjectionError, ArithmeticError):
            pass
    return out


def trace_run(p, t_span=DEFAULT_SPAN, samples=801, tol=DEFAULT_TOL, initial=ATOMS, with_r=True):
    """Integrate one run and collect populations, drive, ``Lambda(t)`` and ``r(t)`` on a uniform grid."""
    times = np.linspace(t_span[0], t_span[1], samples)
    traj = integrate(initial, p, t_span=t_span, tol=tol, t_eval=times)
    pops = traj.populations
    om_p, om_s, big, small = (traj.drive[:, k] for k in range(4))
    du_eff = np.asarray(p.detuning.effective_single_photon(times, p.pulses, p.U_aa), dtype=float)
    du_eff = np.broadcast_to(du_eff, times.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = growth_rate(om_p, om_s, p.U_aa, du_eff)
    cols = {
        "t": times,
        "P_a": pops[:, 0],
        "P_e": pops[:, 1],
        "P_g": pops[:, 2],
        "N": pops.sum(axis=1),
        "Omega_p": om_p,
        "Omega_s": om_s,
        "Delta": big,
        "delta": small,
        "Delta_u": du_eff,
        "Lambda": lam,
    }
    if with_r:
        cols["r"] = _r_trace(times, om_p, om_s, p.U_aa, du_eff, p.gamma, p.pulses)
        on_resonance = p.detuning.single_photon == CHIRPED and p.detuning.delta_u == 0.0
        if on_resonance:
            ra = np.full(len(times), math.nan)
            for k, t in enumerate(times):
                if om_s[k] > 0 and om_p[k] > 0:
                    _, chi_dot = mixing_ratio(float(t), p.pulses)
                    ra[k] = analytic_r_from_drive(om_p[k], om_s[k], chi_dot, p.U_aa, p.gamma)
            cols["r_analytic"] = ra
    for k, name in enumerate(("psi_a", "psi_e", "psi_g")):
        cols["re_" + name] = traj.states[:, k].real
        cols["im_" + name] = traj.states[:, k].imag
    try:
        eff = transfer_efficiency(traj)
    except NlstirapError:
        eff = math.nan
    return TraceBundle(columns=cols, efficiency=eff)


def default_grid(kind):
    n = 61 if kind == "efficiency" else 101
    return SweepGrid.from_ranges((-10.0, 10.0), n, (-10.0, 10.0), n)
