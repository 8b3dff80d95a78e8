"""Command-line entry point: ``nlstirap <subcommand> [--config FILE] [overrides]``."""

import argparse
import os
import sys
import time

from nlstirap.sweeps import config as cfgmod
from nlstirap.sweeps import io
from nlstirap.sweeps.engine import sweep_adiabaticity, sweep_efficiency, sweep_stability, trace_run
from nlstirap.sweeps.presets import collisional_strength, species_presets


def _common(parser):
    parser.add_argument("--config", help="YAML configuration file")
    parser.add_argument("--uaa", help="U_aa value or lo:hi range (rad/us)")
    parser.add_argument("--delta-u", dest="delta_u", help="Delta_u value or lo:hi range (rad/us)")
    parser.add_argument("--grid", help="grid counts NxM (U_aa x Delta_u)")
    parser.add_argument("--gamma", type=float, help="excited-state loss rate (rad/us)")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--workers", type=int, help="worker processes (overrides $%s)" % cfgmod.WORKERS_ENV)


def build_parser():
    parser = argparse.ArgumentParser(prog="nlstirap", description="Collisional STIRAP photoassociation sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("stability-map", "region and growth rate over (U_aa, Delta_u)"),
        ("r-map", "adiabatic parameter r over (U_aa, Delta_u)"),
        ("efficiency-map", "transfer efficiency over (U_aa, Delta_u), with the optimal line"),
        ("trace", "time series of a single run"),
        ("presets", "species table with collisional strengths"),
    ):
        _common(sub.add_parser(name, help=help_text))
    return parser


def _load(args):
    cfg = cfgmod.load_config(args.config)
    return cfgmod.apply_overrides(cfg, uaa=args.uaa, delta_u=args.delta_u, grid=args.grid, gamma=args.gamma,
                                  out=args.out, workers=args.workers)


def _outdir(cfg):
    d = cfg["outputs"]["dir"]
    os.makedirs(d, exist_ok=True)
    return d


def run_stability(cfg):
    grid = cfgmod.grid_from(cfg, "stability")
    pulses = cfgmod.pulses_from(cfg)
    res = sweep_stability(grid, pulses, t_eval=cfg["t_eval"], t_span=tuple(cfg["t_span"]),
                          workers=cfgmod.resolve_workers(cfg))
    return res, [("stability_map.csv", io.write_sweep_csv, (3, "stability region at t_eval", "region"))]


def run_adiabaticity(cfg):
    grid = cfgmod.grid_from(cfg, "adiabaticity")
    res = sweep_adiabaticity(grid, cfgmod.pulses_from(cfg), gamma=float(cfg["gamma"]), t_eval=cfg["t_eval"],
                             workers=cfgmod.resolve_workers(cfg))
    return res, [("r_map.csv", io.write_sweep_csv, (3, "adiabatic parameter r at t_eval", "r"))]


def run_efficiency(cfg):
    grid = cfgmod.grid_from(cfg, "efficiency")
    c = cfg["collisions"]
    res = sweep_efficiency(grid, cfgmod.pulses_from(cfg), gamma=float(cfg["gamma"]),
                           tol=float(cfg["tolerances"]["rtol"]), t_span=tuple(cfg["t_span"]),
                           workers=cfgmod.resolve_workers(cfg), U_ag=float(c["U_ag"]), U_gg=float(c["U_gg"]))
    return res, [("efficiency_map.csv", io.write_sweep_csv, (3, "transfer efficiency", "efficiency")),
                 ("optimal_line.csv", io.write_optimal_line, None)]


_SWEEPS = {"stability-map": ("stability", run_stability), "r-map": ("adiabaticity", run_adiabaticity),
           "efficiency-map": ("efficiency", run_efficiency)}


def _sweep(command, cfg):
    kind, runner = _SWEEPS[command]
    started = time.time()
    res, outputs = runner(cfg)
    d = _outdir(cfg)
    written = []
    for name, writer, plot in outputs:
        path = writer(res, os.path.join(d, name))
        written.append(path)
        if plot is not None:
            column, title, zlabel = plot
            written.append(io.write_gnuplot(path, column, title, zlabel))
    manifest = os.path.join(d, kind + "_manifest.json")
    io.write_manifest(manifest, kind, cfgmod.resolved(cfg, kind), written, started, res.failed_cells(),
                      extra={"settings": res.settings})
    return written + [manifest]


def _trace(cfg):
    started = time.time()
    p = cfgmod.system_from(cfg)
    bundle = trace_run(p, t_span=tuple(cfg["t_span"]), samples=int(cfg["trace"]["samples"]),
                       tol=float(cfg["tolerances"]["rtol"]), with_r=bool(cfg["trace"]["with_r"]))
    d = _outdir(cfg)
    path = bundle.to_csv(os.path.join(d, "trace.csv"))
    gp = io.write_trace_gnuplot(path, list(bundle.columns))
    manifest = os.path.join(d, "trace_manifest.json")
    io.write_manifest(manifest, "trace", cfgmod.resolved(cfg), [path, gp], started,
                      extra={"efficiency": bundle.efficiency})
    print(f"efficiency {bundle.efficiency:.6f}")
    return [path, gp, manifest]


def _presets(cfg, out_given):
    rows = []
    for sp in species_presets():
        rows.append([sp.species, sp.B0, sp.a_bg, sp.U_aa, collisional_strength(sp.a_bg, sp.mass_number)])
    header = ["species", "B0_G", "a_bg_nm", "U_aa_table", "U_aa_computed"]
    print(",".join(header))
    for r in rows:
        print(",".join([r[0], r[1]] + ["%.6g" % x for x in r[2:]]))
    if not out_given:
        return []
    started = time.time()
    d = _outdir(cfg)
    path = io.write_table(os.path.join(d, "presets.csv"), header, rows)
    manifest = os.path.join(d, "presets_manifest.json")
    io.write_manifest(manifest, "presets", {"density_m3": 1e21}, [path], started)
    return [path, manifest]


_RANGE_FLAGS = ("--uaa", "--delta-u")


def _join_negative_ranges(argv):
    # argparse reads "-5:5" as an option; bind it to its flag as "--flag=-5:5"
    out = []
    it = iter(argv)
    for a in it:
        if a in _RANGE_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and not nxt.startswith("--"):
                out.append(f"{a}={nxt}")
                continue
            out.append(a)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(a)
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_negative_ranges(argv))
    try:
        cfg = _load(args)
        if args.command in _SWEEPS:
            written = _sweep(args.command, cfg)
        elif args.command == "trace":
            written = _trace(cfg)
        else:
            written = _presets(cfg, args.out is not None)
    except (cfgmod.ConfigError, ValueError, OSError) as exc:
        print(f"nlstirap: error: {exc}", file=sys.stderr)
        return 2
    for w in written:
        print(w)
    return 0


if __name__ == "__main__":
    sys.exit(main())
