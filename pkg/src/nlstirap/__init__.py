"""Nonlinear STIRAP photoassociation in a Lambda-type atom-molecule system.

Submodules
----------
pulses        Gaussian pump/Stokes envelopes, mixing ratio, detuning chirps.
cpt           Collision-shifted dark (CPT) state and its time derivative.
meanfield     Three-level mean-field equations of motion and their integration.
stability     Linearized fluctuation matrices, Bogoliubov frequencies, regions.
adiabaticity  Bogoliubov modes, Goldstone pair, projection system and r.
sweeps        Parameter sweeps, species presets, configuration and the CLI.
"""

from nlstirap.cpt import CptState, cpt_rate, cpt_state
from nlstirap.errors import (
    DegenerateSpectrumError,
    IntegrationError,
    NlstirapError,
    PulsesNotFinishedError,
    SingularGoldstoneError,
    SingularProjectionError,
)
from nlstirap.meanfield import SystemParams, Trajectory, integrate, populations, transfer_efficiency
from nlstirap.pulses import DetuningPolicy, PulseParams, envelope, envelope_rate, mixing_ratio

__version__ = "0.1.0"

__all__ = [
    "CptState",
    "DegenerateSpectrumError",
    "DetuningPolicy",
    "IntegrationError",
    "NlstirapError",
    "PulseParams",
    "PulsesNotFinishedError",
    "SingularGoldstoneError",
    "SingularProjectionError",
    "SystemParams",
    "Trajectory",
    "cpt_rate",
    "cpt_state",
    "envelope",
    "envelope_rate",
    "integrate",
    "mixing_ratio",
    "populations",
    "transfer_efficiency",
]
