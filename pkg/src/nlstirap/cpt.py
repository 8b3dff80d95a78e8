"""Dark (CPT) state of the collisional Lambda system.

With the two-photon detuning locked to ``delta = -4 U_aa phi_a**2`` the
stationary state with an empty excited level is

    phi_a = sqrt(2 / (1 + s)),   phi_g = -2 chi / (1 + s),   s = sqrt(1 + 8 chi**2)

and rotates at the chemical potential ``mu = 2 U_aa phi_a**2``. The amplitudes
do not depend on ``U_aa``; only the phase rotation and the required detuning do.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CptState:
    """Instantaneous dark state for a given mixing ratio.

    Attributes
    ----------
    phi_a, phi_g : float
        Real amplitudes of the atomic and ground-molecular components.
        ``phi_a > 0`` and ``phi_g`` carries the sign (gauge fixed here).
    mu : float
        Chemical potential, rad/us.
    delta_resonant : float
        Two-photon detuning that keeps ``delta_eff = 0``, rad/us.
    """

    phi_a: float
    phi_g: float
    mu: float
    delta_resonant: float

    @property
    def phi_e(self):
        return 0.0

    @property
    def shift(self):
        """Collision-induced frequency shift ``4 U_aa phi_a**2``."""
        return -self.delta_resonant

    @property
    def amplitudes(self):
        return np.array([self.phi_a, 0.0, self.phi_g])


def dark_amplitudes(chi):
    """Vectorized ``(phi_a, phi_g)`` for ``chi >= 0`` (scalar or array)."""
    chi = np.asarray(chi, dtype=float)
    s = np.sqrt(1.0 + 8.0 * chi * chi)
    phi_a = np.sqrt(2.0 / (1.0 + s))
    phi_g = -2.0 * chi / (1.0 + s)
    return phi_a, phi_g


def atomic_fraction(chi):
    """``phi_a**2 = 2 / (1 + sqrt(1 + 8 chi**2))``; cheap scalar form for the ODE drive."""
    return 2.0 / (1.0 + (1.0 + 8.0 * chi * chi) ** 0.5)


def cpt_state(chi, U_aa=0.0):
    if chi < 0:
        raise ValueError(f"mixing ratio must be non-negative, got {chi!r}")
    phi_a, phi_g = dark_amplitudes(chi)
    phi_a = float(phi_a)
    phi_g = float(phi_g)
    pa2 = phi_a * phi_a
    return CptState(phi_a=phi_a, phi_g=phi_g, mu=2.0 * U_aa * pa2, delta_resonant=-4.0 * U_aa * pa2)


def cpt_rate(chi, chi_dot, U_aa=0.0):
    """Time derivatives ``(dphi_a/dt, dphi_g/dt)`` along ``chi(t)``.

    Uses the closed forms ``dphi_a/dchi = -2 chi phi_a**3 / s`` and
    ``dphi_g/dchi = -2 / (s (1 + s))``. ``U_aa`` is accepted for symmetry with
    :func:`cpt_state`; the amplitudes do not depend on it.
    """
    chi = np.asarray(chi, dtype=float)
    s = np.sqrt(1.0 + 8.0 * chi * chi)
    phi_a = np.sqrt(2.0 / (1.0 + s))
    dphi_a = -2.0 * chi * phi_a**3 / s
    dphi_g = -2.0 / (s * (1.0 + s))
    out_a = dphi_a * chi_dot
    out_g = dphi_g * chi_dot
    if out_a.ndim == 0:
        return float(out_a), float(out_g)
    return out_a, out_g
