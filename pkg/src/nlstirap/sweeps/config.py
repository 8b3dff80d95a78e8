"""YAML run configuration with CLI overrides.

Example::

    pulses: {peak_pump: 10, peak_stokes: 10, t_pump: 19, t_stokes: 11, width: 4}
    detuning: {single_photon: chirped, delta_u: 0.0, two_photon: chirped}
    collisions: {U_aa: 5.0, U_ag: 0.0, U_gg: 0.0}
    gamma: 1.0
    grid: {U_aa: [-10, 10, 101], Delta_u: [-10, 10, 101]}
    tolerances: {rtol: 1.0e-9}
    t_span: [0, 40]
    outputs: {dir: out}

Precedence for the worker count: ``--workers``, then ``$NLSTIRAP_WORKERS``,
then ``workers:`` in the file, then 1.
"""

import copy
import os

import yaml

from nlstirap.meanfield import DEFAULT_SPAN, DEFAULT_TOL, SystemParams
from nlstirap.pulses import DetuningPolicy, PulseParams
from nlstirap.sweeps.grid import SweepGrid

WORKERS_ENV = "NLSTIRAP_WORKERS"

DEFAULTS = {
    "pulses": {"peak_pump": 10.0, "peak_stokes": 10.0, "t_pump": 19.0, "t_stokes": 11.0, "width": 4.0,
               "width_stokes": None},
    "detuning": {"single_photon": "chirped", "delta_u": 0.0, "delta": 0.0, "two_photon": "chirped",
                 "two_photon_delta": 0.0},
    "collisions": {"U_aa": 0.0, "U_ag": 0.0, "U_gg": 0.0},
    "gamma": 1.0,
    "grid": {"U_aa": None, "Delta_u": None},
    "tolerances": {"rtol": DEFAULT_TOL},
    "t_span": list(DEFAULT_SPAN),
    "t_eval": None,
    "trace": {"samples": 801, "with_r": True},
    "outputs": {"dir": "out"},
    "workers": None,
}

DEFAULT_COUNTS = {"efficiency": 61, "stability": 101, "adiabaticity": 101}


class ConfigError(ValueError):
    pass


def _merge(base, update, path=""):
    for key, value in update.items():
        if key not in base:
            raise ConfigError(f"unknown config key {path + key!r}")
        if isinstance(base[key], dict) and value is not None:
            if not isinstance(value, dict):
                raise ConfigError(f"config key {path + key!r} must be a mapping")
            _merge(base[key], value, path + key + ".")
        else:
            base[key] = value
    return base


def load_config(path=None, text=None):
    """Defaults merged with a YAML file (or YAML ``text``)."""
    cfg = copy.deepcopy(DEFAULTS)
    if path is not None:
        with open(path) as fh:
            text = fh.read()
    if text:
        data = yaml.safe_load(text) or {}
        if not isinstance(data, dict):
            raise ConfigError("config root must be a mapping")
        _merge(cfg, data)
    return cfg


def parse_range(text):
    """``"v"`` -> ``(v, v)``; ``"lo:hi"`` -> ``(lo, hi)``."""
    parts = str(text).split(":")
    if len(parts) == 1:
        v = float(parts[0])
        return v, v
    if len(parts) == 2:
        return float(parts[0]), float(parts[1])
    raise ConfigError(f"bad range {text!r}; expected 'v' or 'lo:hi'")


def parse_grid(text):
    try:
        n, m = (int(x) for x in str(text).lower().split("x"))
    except ValueError:
        raise ConfigError(f"bad grid {text!r}; expected NxM") from None
    if n < 1 or m < 1:
        raise ConfigError("grid counts must be positive")
    return n, m


def _axis_spec(spec, count):
    lo, hi, n = spec
    return [float(lo), float(hi), int(n if count is None else count)]


def apply_overrides(cfg, uaa=None, delta_u=None, grid=None, gamma=None, out=None, workers=None):
    """CLI overrides. A single ``--uaa``/``--delta-u`` value also collapses the
    corresponding grid axis to that point (``--grid`` then leaves it alone);
    ``lo:hi`` keeps the axis count."""
    cfg = copy.deepcopy(cfg)
    counts = parse_grid(grid) if grid is not None else (None, None)
    for key, text, count in (("U_aa", uaa, counts[0]), ("Delta_u", delta_u, counts[1])):
        spec = cfg["grid"][key]
        if text is not None:
            lo, hi = parse_range(text)
            if lo == hi:
                spec = [lo, hi, 1]
                if key == "U_aa":
                    cfg["collisions"]["U_aa"] = lo
                else:
                    cfg["detuning"]["delta_u"] = lo
            else:
                spec = [lo, hi, (spec[2] if spec else None)]
        if count is not None and not (spec and spec[0] == spec[1]):
            spec = _axis_spec(spec or [-10.0, 10.0, None], count)
        cfg["grid"][key] = spec
    if gamma is not None:
        cfg["gamma"] = float(gamma)
    if out is not None:
        cfg["outputs"]["dir"] = str(out)
    if workers is not None:
        cfg["workers"] = int(workers)
    return cfg


def resolve_workers(cfg, environ=None):
    environ = os.environ if environ is None else environ
    if cfg.get("workers") is not None:
        return max(1, int(cfg["workers"]))
    if environ.get(WORKERS_ENV):
        try:
            return max(1, int(environ[WORKERS_ENV]))
        except ValueError:
            raise ConfigError(f"${WORKERS_ENV} must be an integer, got {environ[WORKERS_ENV]!r}") from None
    return 1


def pulses_from(cfg):
    return PulseParams(**{k: (float(v) if v is not None else None) for k, v in cfg["pulses"].items()})


def detuning_from(cfg):
    d = cfg["detuning"]
    return DetuningPolicy(single_photon=d["single_photon"], delta_u=float(d["delta_u"]), delta=float(d["delta"]),
                          two_photon=d["two_photon"], two_photon_delta=float(d["two_photon_delta"]))


def system_from(cfg):
    c = cfg["collisions"]
    return SystemParams(U_aa=float(c["U_aa"]), gamma=float(cfg["gamma"]), detuning=detuning_from(cfg),
                        pulses=pulses_from(cfg), U_ag=float(c["U_ag"]), U_gg=float(c["U_gg"]))


def grid_from(cfg, kind):
    """Sweep grid for ``kind``; missing axes use ``[-10, 10]`` at the kind's default count."""
    n = DEFAULT_COUNTS[kind]
    axes = []
    for key in ("U_aa", "Delta_u"):
        spec = cfg["grid"][key]
        if spec is None:
            spec = [-10.0, 10.0, n]
        lo, hi, count = spec
        axes.append(((float(lo), float(hi)), int(n if count is None else count)))
    (ur, nu), (dr, nd) = axes
    return SweepGrid.from_ranges(ur, nu, dr, nd)


def resolved(cfg, kind=None):
    """Fully resolved, JSON-serializable configuration for the manifest."""
    out = copy.deepcopy(cfg)
    if kind in DEFAULT_COUNTS:
        g = grid_from(cfg, kind)
        out["grid"] = {"U_aa": [g.U_aa[0], g.U_aa[-1], len(g.U_aa)],
                       "Delta_u": [g.Delta_u[0], g.Delta_u[-1], len(g.Delta_u)]}
    out["pulses"]["width_stokes"] = pulses_from(cfg).width_stokes
    out["workers"] = resolve_workers(cfg)
    return out
