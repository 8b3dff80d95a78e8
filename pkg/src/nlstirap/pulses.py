"""Gaussian pump/Stokes drive and detuning chirps.

Units: angular frequencies in rad/us, times in us. A value quoted as
"10 MHz" means 1e7 s^-1, i.e. 10 rad/us, so products Omega * t carry no 2*pi.
"""

import math
from dataclasses import dataclass

import numpy as np

from nlstirap.cpt import atomic_fraction
from nlstirap.errors import PulseError

PUMP = "pump"
STOKES = "stokes"

CHIRPED = "chirped"
CONSTANT = "constant"


@dataclass(frozen=True)
class PulseParams:
    """Peak Rabi frequencies, centers and widths of the two Gaussian pulses.

    Defaults are the standard pulse pair: peaks 10 rad/us, pump centered at
    19 us, Stokes (control) at 11 us, shared width 4 us.
    ``width_stokes=None`` means "same as ``width``".
    """

    peak_pump: float = 10.0
    peak_stokes: float = 10.0
    t_pump: float = 19.0
    t_stokes: float = 11.0
    width: float = 4.0
    width_stokes: float = None

    def __post_init__(self):
        if self.width_stokes is None:
            object.__setattr__(self, "width_stokes", self.width)
        for name in ("peak_pump", "peak_stokes", "width", "width_stokes"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    @property
    def t_sp(self):
        """Symmetric point ``(t_p + t_s) / 2``."""
        return 0.5 * (self.t_pump + self.t_stokes)

    def _select(self, which):
        if which == PUMP:
            return self.peak_pump, self.t_pump, self.width
        if which == STOKES:
            return self.peak_stokes, self.t_stokes, self.width_stokes
        raise ValueError(f"which must be 'pump' or 'stokes', got {which!r}")

    def peak(self, which):
        return self._select(which)[0]


def envelope(t, which, p):
    """``Omega0 * exp(-(t - t_c)**2 / tau**2)``; accepts scalar or array ``t``."""
    peak, center, width = p._select(which)
    x = (np.asarray(t, dtype=float) - center) / width
    out = peak * np.exp(-x * x)
    return float(out) if out.ndim == 0 else out


def envelope_rate(t, which, p):
    """Analytic time derivative of :func:`envelope`."""
    peak, center, width = p._select(which)
    dt = np.asarray(t, dtype=float) - center
    out = -2.0 * dt / (width * width) * peak * np.exp(-(dt / width) ** 2)
    return float(out) if out.ndim == 0 else out


def mixing_ratio(t, p):
    """Return ``(chi, chi_dot)`` with ``chi = Omega_p / Omega_s``.

    Raises :class:`PulseError` if the Stokes envelope underflows to zero.
    """
    om_p = envelope(t, PUMP, p)
    om_s = envelope(t, STOKES, p)
    if np.any(np.asarray(om_s) == 0.0):
        raise PulseError(f"Stokes envelope vanishes at t = {t!r}; chi is undefined")
    chi = om_p / om_s
    # d ln(chi)/dt = d ln(Omega_p)/dt - d ln(Omega_s)/dt for Gaussians
    t = np.asarray(t, dtype=float)
    log_rate = -2.0 * (t - p.t_pump) / p.width**2 + 2.0 * (t - p.t_stokes) / p.width_stokes**2
    chi_dot = chi * log_rate
    if np.ndim(chi_dot) == 0:
        return float(chi), float(chi_dot)
    return chi, chi_dot


@dataclass(frozen=True)
class DetuningPolicy:
    """How the single- and two-photon detunings are programmed in time.

    ``single_photon``
        ``"chirped"``: ``Delta(t) = delta_u - 4 U_aa phi_a(t)**2`` so that the
        effective single-photon detuning stays at ``delta_u``.
        ``"constant"``: ``Delta(t) = delta``.
    ``two_photon``
        ``"chirped"``: ``delta(t) = -4 U_aa phi_a(t)**2`` (effective two-photon
        resonance). ``"constant"``: ``delta(t) = two_photon_delta``.

    ``phi_a(t)`` is the dark-state amplitude at ``chi(t)``: the chirp is an
    externally programmed function of time, not feedback on the evolving state.
    """

    single_photon: str = CHIRPED
    delta_u: float = 0.0
    delta: float = 0.0
    two_photon: str = CHIRPED
    two_photon_delta: float = 0.0

    def __post_init__(self):
        for name in ("single_photon", "two_photon"):
            if getattr(self, name) not in (CHIRPED, CONSTANT):
                raise ValueError(f"{name} must be 'chirped' or 'constant', got {getattr(self, name)!r}")

    @classmethod
    def chirped(cls, delta_u=0.0):
        return cls(single_photon=CHIRPED, delta_u=delta_u)

    @classmethod
    def constant(cls, delta=0.0, two_photon=CHIRPED, two_photon_delta=0.0):
        return cls(single_photon=CONSTANT, delta=delta, two_photon=two_photon,
                   two_photon_delta=two_photon_delta)

    def detunings(self, t, pulses, U_aa):
        """``(Delta(t), delta(t))`` in rad/us; scalar in, scalar out."""
        shift = collision_shift(t, pulses, U_aa)
        if self.single_photon == CHIRPED:
            big = self.delta_u - shift
        else:
            big = np.full_like(shift, self.delta)
        if self.two_photon == CHIRPED:
            small = -shift
        else:
            small = np.full_like(shift, self.two_photon_delta)
        if big.ndim == 0:
            return float(big), float(small)
        return big, small

    def effective_single_photon(self, t, pulses, U_aa):
        """``Delta_u(t) = Delta(t) + 4 U_aa phi_a(t)**2``."""
        shift = collision_shift(t, pulses, U_aa)
        if self.single_photon == CHIRPED:
            out = np.full_like(shift, self.delta_u)
        else:
            out = self.delta + shift
        return float(out) if out.ndim == 0 else out


def collision_shift(t, pulses, U_aa):
    """``4 U_aa phi_a(t)**2`` with ``phi_a`` from the dark state at ``chi(t)``."""
    t = np.asarray(t, dtype=float)
    if U_aa == 0.0:
        return np.zeros_like(t)
    chi, _ = mixing_ratio(t, pulses)
    return 4.0 * U_aa * np.asarray(atomic_fraction(np.asarray(chi)))


STANDARD_PULSES = PulseParams()
