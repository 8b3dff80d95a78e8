"""Grid sweeps, single-run traces, species presets, configuration and the CLI."""

from nlstirap.sweeps.engine import (
    TraceBundle,
    parallel_map,
    sweep_adiabaticity,
    sweep_efficiency,
    sweep_stability,
    trace_run,
)
from nlstirap.sweeps.grid import SweepGrid, SweepResult
from nlstirap.sweeps.presets import SpeciesPreset, collisional_strength, species_presets

__all__ = [
    "SpeciesPreset",
    "SweepGrid",
    "SweepResult",
    "TraceBundle",
    "collisional_strength",
    "parallel_map",
    "species_presets",
    "sweep_adiabaticity",
    "sweep_efficiency",
    "sweep_stability",
    "trace_run",
]
