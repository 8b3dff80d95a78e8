"""Bogoliubov stability of the dark state.

Small deviations from the dark state obey ``i d(dpsi)/dt = A dpsi + B conj(dpsi) + ...``;
stacking ``Xi = (dpsi, conj(dpsi))`` gives the 6x6 fluctuation matrix
``M = [[A, -B], [B, -A]]``. Its spectrum is ``{0, 0, +-omega_1, +-omega_2}`` with

    omega_{1,2} = sqrt(a1 +- sqrt(a1**2 - a2))
    a1 = Omega_s Omega_eff / 4 + Delta_u**2 / 2
    a2 = Omega_s**2 Omega_eff**2 / 16 + 4 U_aa Omega_p**2 phi_a**4 Delta_u
    Omega_eff = sqrt(Omega_s**2 + 8 Omega_p**2)

Region I (a2 < 0) and region II (a2 > a1**2) are dynamically unstable;
region III (everything else, boundaries included) is stable.
"""

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np
from scipy.optimize import brentq

from nlstirap.cpt import dark_amplitudes
from nlstirap.pulses import PUMP, STOKES, envelope


class Region(IntEnum):
    I = 1
    II = 2
    III = 3


@dataclass(frozen=True)
class FluctuationMatrices:
    A: np.ndarray
    B: np.ndarray
    Delta_u: float
    Omega_p: float
    Omega_s: float
    U_aa: float
    phi_a: float

    @property
    def M(self):
        return np.block([[self.A, -self.B], [self.B, -self.A]])

    @property
    def F(self):
        F = np.zeros((3, 3))
        F[1, 1] = 1.0
        return F

    @property
    def D(self):
        return np.kron(np.eye(2), self.F)

    @property
    def Omega_eff(self):
        return math.sqrt(self.Omega_s**2 + 8.0 * self.Omega_p**2)

    @property
    def chi(self):
        return self.Omega_p / self.Omega_s


def matrices_from_drive(Omega_p, Omega_s, U_aa, Delta_u):
    """Fluctuation matrices for given instantaneous Rabi frequencies."""
    phi_a, _ = dark_amplitudes(Omega_p / Omega_s)
    phi_a = float(phi_a)
    c = 2.0 * U_aa * phi_a * phi_a
    A = np.array([
        [c, -Omega_p * phi_a, 0.0],
        [-Omega_p * phi_a, -Delta_u, -0.5 * Omega_s],
        [0.0, -0.5 * Omega_s, 0.0],
    ])
    B = np.zeros((3, 3))
    B[0, 0] = c
    return FluctuationMatrices(A=A, B=B, Delta_u=float(Delta_u), Omega_p=float(Omega_p),
                               Omega_s=float(Omega_s), U_aa=float(U_aa), phi_a=phi_a)


def build_matrices(t, p, Delta_u):
    """Fluctuation matrices at time ``t`` for system ``p`` and effective detuning ``Delta_u``."""
    om_p = envelope(t, PUMP, p.pulses)
    om_s = envelope(t, STOKES, p.pulses)
    return matrices_from_drive(om_p, om_s, p.U_aa, Delta_u)


def auxiliaries(Omega_p, Omega_s, U_aa, Delta_u):
    """Vectorized ``(a1, a2, disc)`` with ``disc = a1**2 - a2``.

    ``disc`` is evaluated in the factored form ``Delta_u * cubic(Delta_u) / 4``,
    where ``cubic(x) = x**3 + Omega_s Omega_eff x - 16 U_aa Omega_p**2 phi_a**4``,
    so it is exactly zero at ``Delta_u = 0`` instead of a rounding residue.
    """
    Omega_p = np.asarray(Omega_p, dtype=float)
    Omega_s = np.asarray(Omega_s, dtype=float)
    Delta_u = np.asarray(Delta_u, dtype=float)
    phi_a, _ = dark_amplitudes(Omega_p / Omega_s)
    pa4 = phi_a**4
    om_eff = np.sqrt(Omega_s**2 + 8.0 * Omega_p**2)
    ss = Omega_s * om_eff
    a1 = ss / 4.0 + Delta_u**2 / 2.0
    q = 16.0 * U_aa * Omega_p**2 * pa4
    a2 = ss**2 / 16.0 + q * Delta_u / 4.0
    disc = Delta_u * (Delta_u**3 + ss * Delta_u - q) / 4.0
    return a1, a2, disc


def frequencies_from_aux(a1, disc, a2=None):
    """Principal-branch ``omega_{1,2} = sqrt(a1 +- sqrt(disc))``.

    With ``a2`` given and ``disc > 0``, ``omega_2**2`` comes from the product
    ``omega_1**2 omega_2**2 = a2``; the direct difference loses all digits
    when ``omega_2 << omega_1``.
    """
    root = np.sqrt(np.asarray(disc, dtype=complex))
    w1sq = a1 + root
    w2sq = a1 - root
    if a2 is not None:
        a2 = np.asarray(a2, dtype=float)
        ok = (np.asarray(disc) > 0) & (w1sq != 0)
        w2sq = np.where(ok, a2 / np.where(ok, w1sq, 1.0), w2sq)
    return np.sqrt(w1sq), np.sqrt(w2sq)


def excitation_frequencies(fm):
    """``(omega1, omega2, a1, a2)`` for a :class:`FluctuationMatrices`."""
    a1, a2, disc = auxiliaries(fm.Omega_p, fm.Omega_s, fm.U_aa, fm.Delta_u)
    w1, w2 = frequencies_from_aux(a1, disc, a2)
    return complex(w1), complex(w2), float(a1), float(a2)


def regions(Omega_p, Omega_s, U_aa, Delta_u):
    """Vectorized region labels (inequality form) as an int array."""
    _, a2, disc = auxiliaries(Omega_p, Omega_s, U_aa, Delta_u)
    out = np.full(np.broadcast(a2, disc).shape, int(Region.III))
    out[np.asarray(disc < 0)] = int(Region.II)
    out[np.asarray(a2 < 0)] = int(Region.I)
    return out


def growth_rate(Omega_p, Omega_s, U_aa, Delta_u):
    """Vectorized unstable growth rate ``max(|Im omega_1|, |Im omega_2|)``.

    In region II the two frequencies are complex conjugates and this is
    ``|Im omega_1|``; in region I only ``omega_2`` is imaginary. Zero in region III.
    """
    a1, a2, disc = auxiliaries(Omega_p, Omega_s, U_aa, Delta_u)
    w1, w2 = frequencies_from_aux(a1, disc, a2)
    rate = np.maximum(np.abs(w1.imag), np.abs(w2.imag))
    stable = (a2 >= 0) & (disc >= 0)
    return np.where(stable, 0.0, rate)


@dataclass(frozen=True)
class StabilityVerdict:
    region: Region
    omega1: complex
    omega2: complex
    a1: float
    a2: float
    growth_rate: float

    @property
    def stable(self):
        return self.region is Region.III


def classify(U_aa, Delta_u, Omega_p, Omega_s):
    """Classify one ``(U_aa, Delta_u)`` point for the instantaneous drive ``(Omega_p, Omega_s)``."""
    a1, a2, disc = auxiliaries(Omega_p, Omega_s, U_aa, Delta_u)
    a1, a2, disc = float(a1), float(a2), float(disc)
    w1, w2 = frequencies_from_aux(a1, disc, a2)
    if a2 < 0:
        region = Region.I
    elif disc < 0:
        region = Region.II
    else:
        region = Region.III
    rate = 0.0 if region is Region.III else max(abs(w1.imag), abs(w2.imag))
    return StabilityVerdict(region=region, omega1=complex(w1), omega2=complex(w2), a1=a1, a2=a2,
                            growth_rate=float(rate))


def classify_at(t, pulses, U_aa, Delta_u):
    return classify(U_aa, Delta_u, envelope(t, PUMP, pulses), envelope(t, STOKES, pulses))


def region_boundary_root(U_aa, Omega_p, Omega_s, phi_a):
    """Unique real root of ``x**3 + Omega_s Omega_eff x - 16 U_aa Omega_p**2 phi_a**4``.

    The cubic is strictly increasing, so the root is bracketed by 0 and
    ``sign(q) * min(|q| / p, |q|**(1/3))``. Bracketed Brent iteration, then one
    Newton polish.
    """
    p = Omega_s * math.sqrt(Omega_s**2 + 8.0 * Omega_p**2)
    q = 16.0 * U_aa * Omega_p**2 * phi_a**4
    if q == 0.0:
        return 0.0

    def cubic(x):
        return x * (x * x + p) - q

    bound = abs(q) ** (1.0 / 3.0)
    if p > 0:
        bound = min(bound, abs(q) / p)
    if bound == 0.0 or abs(q) < 1e-280:
        # |q| so small that x**3 is negligible (or the bracket underflows)
        return q / p if p > 0 else math.copysign(abs(q) ** (1.0 / 3.0), q)
    lo, hi = (0.0, bound) if q > 0 else (-bound, 0.0)
    for _ in range(60):
        # signs, not the product: the product underflows for tiny q
        if (cubic(lo) <= 0.0) != (cubic(hi) < 0.0):
            break
        # rounding at the bracket ends
        lo, hi = (lo, 2.0 * hi) if q > 0 else (2.0 * lo, hi)
    x = brentq(cubic, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)
    deriv = 3.0 * x * x + p
    if deriv > 0:
        x -= cubic(x) / deriv
    return x


def region_I_threshold(U_aa, Omega_p, Omega_s, phi_a):
    """``-Omega_eff**2 / (64 U_aa chi**2 phi_a**4)``: region I lies beyond it (below for U_aa > 0)."""
    chi = Omega_p / Omega_s
    om_eff2 = Omega_s**2 + 8.0 * Omega_p**2
    denom = 64.0 * U_aa * chi * chi * phi_a**4
    if denom == 0.0:
        return -math.copysign(math.inf, U_aa) if U_aa != 0 else math.nan
    return -om_eff2 / denom


def classify_boundary_form(U_aa, Delta_u, Omega_p, Omega_s):
    """Region from the explicit thresholds instead of the ``a1``/``a2`` inequalities."""
    phi_a = float(dark_amplitudes(Omega_p / Omega_s)[0])
    if U_aa != 0.0:
        thr = region_I_threshold(U_aa, Omega_p, Omega_s, phi_a)
        if (U_aa > 0 and Delta_u < thr) or (U_aa < 0 and Delta_u > thr):
            return Region.I
    x0 = region_boundary_root(U_aa, Omega_p, Omega_s, phi_a)
    if min(x0, 0.0) < Delta_u < max(x0, 0.0):
        return Region.II
    return Region.III


def growth_rate_trace(p, Delta_u, times):
    """``Lambda(t)`` along ``times`` for system ``p`` at fixed effective detuning ``Delta_u``.

    ``Delta_u`` may be an array broadcastable against ``times`` (e.g. when the
    single-photon detuning is held constant and ``Delta_u`` drifts with ``chi``).
    """
    times = np.asarray(times, dtype=float)
    om_p = envelope(times, PUMP, p.pulses)
    om_s = envelope(times, STOKES, p.pulses)
    return growth_rate(om_p, om_s, p.U_aa, Delta_u)
