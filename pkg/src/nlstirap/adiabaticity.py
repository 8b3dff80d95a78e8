"""Adiabatic parameter ``r`` from the Bogoliubov projection of the fluctuation dynamics.

Fluctuations ``Xi`` around the dark state obey
``dXi/dt = -i M^T Xi - gamma D Xi - dLambda/dt`` with ``Lambda = (phi_a, 0, phi_g)`` doubled.
They are expanded on the Goldstone pair ``(P, Q)`` and the two excitation
modes ``w_1, w_2``; to first order in the pulse rates the mode projections
``(c_1, c_2, c_1*, c_2*)`` solve a 4x4 linear system and
``r = sqrt(|c_1|**2 + |c_2|**2) / 2``.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from nlstirap.cpt import cpt_rate, dark_amplitudes
from nlstirap.errors import DegenerateSpectrumError, SingularGoldstoneError, SingularProjectionError
from nlstirap.pulses import PUMP, STOKES, envelope, envelope_rate, mixing_ratio
from nlstirap.stability import excitation_frequencies, matrices_from_drive

_I3 = np.eye(3)
_Z3 = np.zeros((3, 3))
ETA_PLUS = np.block([[_I3, _Z3], [_Z3, -_I3]])
ETA_MINUS = np.block([[_Z3, _I3], [-_I3, _Z3]])
SIGMA_X = np.block([[_Z3, _I3], [_I3, _Z3]])

DEGENERACY_TOL = 1e-6
COLLISIONLESS_TOL = 1e-8
CONDITION_WARN = 1e10
# The Hermitian norm is compared against this fraction of the vector norm to
# decide whether a real mode needs its partner.
_KREIN_TOL = 1e-9


@dataclass(frozen=True)
class BogoliubovMode:
    omega: complex
    u: np.ndarray
    v: np.ndarray

    @property
    def w(self):
        return np.concatenate([self.u, self.v])

    @property
    def normalization(self):
        """Complex square ``sum(u**2 - v**2)``."""
        return complex(np.sum(self.u**2 - self.v**2))

    @property
    def hermitian_norm(self):
        return float(np.vdot(self.u, self.u).real - np.vdot(self.v, self.v).real)

    def partner(self):
        """The mirror eigenpair ``(-conj(omega), [conj(v); conj(u)])``."""
        return BogoliubovMode(omega=-np.conj(self.omega), u=np.conj(self.v), v=np.conj(self.u))


def _null_vector(M, omega):
    _, sv, vh = np.linalg.svd(M - omega * np.eye(M.shape[0]))
    return np.conj(vh[-1]), sv


def _make_real(w):
    """Rotate the global phase so the largest component is real; drop a negligible imaginary part."""
    k = np.argmax(np.abs(w))
    w = w * (abs(w[k]) / w[k])
    if np.max(np.abs(w.imag)) < 1e-12 * np.max(np.abs(w)):
        w = w.real.astype(complex)
    return w


def _collisionless_modes(fm):
    evals, evecs = np.linalg.eigh(fm.A)
    order = np.argsort(np.abs(evals))
    nonzero = sorted(order[1:], key=lambda k: -abs(evals[k]))
    modes = []
    for k in nonzero:
        e = evecs[:, k].astype(complex)
        modes.append(BogoliubovMode(omega=complex(evals[k]), u=e, v=np.zeros(3, dtype=complex)))
    return tuple(modes)


def bogoliubov_modes(fm):
    """The two excitation modes paired with the closed-form ``omega_1``, ``omega_2``.

    Each mode is the null vector of ``M - omega I``. For real ``omega`` the
    representative with positive Hermitian norm ``|u|**2 - |v|**2`` is kept
    (the partner at ``-omega`` when needed), so ``U_aa -> 0`` recovers the
    eigenvectors of ``A`` with ``v = 0``. All modes are scaled to
    ``sum(u**2 - v**2) = 1``.

    Raises
    ------
    DegenerateSpectrumError
        Near an exceptional point (``omega_1 = omega_2``), a zero frequency, or
        a mode that cannot be normalized.
    """
    M = fm.M
    scale = np.linalg.norm(M, 2)
    tol = DEGENERACY_TOL * scale
    if abs(fm.U_aa) < COLLISIONLESS_TOL:
        # B = 0: the doubled spectrum is two copies of A's, never defective
        modes = _collisionless_modes(fm)
        if min(abs(m.omega) for m in modes) < tol:
            raise DegenerateSpectrumError("zero excitation frequency")
        return modes
    w1, w2, _, _ = excitation_frequencies(fm)
    if abs(w1 - w2) < tol or abs(w1) < tol or abs(w2) < tol:
        raise DegenerateSpectrumError(
            f"degenerate spectrum: omega1={w1:.6g}, omega2={w2:.6g}, |M|={scale:.6g}")

    modes = []
    for omega in (w1, w2):
        vec, sv = _null_vector(M, omega)
        if sv[-2] < tol:
            raise DegenerateSpectrumError(f"eigenvector not unique at omega={omega:.6g}")
        mode = BogoliubovMode(omega=omega, u=vec[:3], v=vec[3:])
        if abs(omega.imag) <= _KREIN_TOL * abs(omega):
            mode = BogoliubovMode(omega=complex(omega.real), u=mode.u, v=mode.v)
            w = _make_real(mode.w)
            mode = BogoliubovMode(omega=mode.omega, u=w[:3], v=w[3:])
            if mode.hermitian_norm < 0:
                mode = mode.partner()
        n = mode.normalization
        if abs(n) < DEGENERACY_TOL:
            raise DegenerateSpectrumError(f"mode at omega={omega:.6g} is not normalizable")
        root = np.sqrt(n)
        modes.append(BogoliubovMode(omega=mode.omega, u=mode.u / root, v=mode.v / root))
    return tuple(modes)


@dataclass(frozen=True)
class GoldstonePair:
    P: np.ndarray
    Q: np.ndarray
    nu: float


def goldstone_pair(fm):
    """Zero mode ``P`` and its generalized partner ``Q`` with ``M Q = P / nu``, ``Q^dag eta_+ P = 1``."""
    U, Du, om_p, om_s, pa = fm.U_aa, fm.Delta_u, fm.Omega_p, fm.Omega_s, fm.phi_a
    om_eff = fm.Omega_eff
    if abs(U) < COLLISIONLESS_TOL:
        raise SingularGoldstoneError("Goldstone pair singular: U_aa is zero")
    chi = om_p / om_s
    num = 64.0 * U * pa**4 * chi * chi * Du + om_eff * om_eff
    if abs(num) < 1e-12 * om_eff * om_eff:
        raise SingularGoldstoneError("Goldstone pair singular: nu vanishes")
    nu = num / (8.0 * U * pa * pa)
    qa = om_eff / (8.0 * nu * U * pa * pa)
    qe = 2.0 * chi * pa / nu
    qg = -(16.0 * U * pa * pa * chi * Du + om_p * om_eff) / (4.0 * nu * U * pa * om_s)
    p = np.array([0.5 * om_s, 0.0, -om_p * pa])
    q = np.array([qa, qe, qg])
    return GoldstonePair(P=np.concatenate([p, p]), Q=np.concatenate([q, -q]), nu=float(nu))


def _dual_project(xi, pair, modes):
    cp = np.vdot(pair.P, xi)
    cq = np.vdot(pair.Q, xi)
    cs = [np.vdot(m.w, xi) for m in modes]
    ds = [m.w @ SIGMA_X @ xi for m in modes]
    return np.array([cp, cq, *cs, *ds])


def expansion_coefficients(xi, pair, modes, refine=1):
    """Coefficients ``(c_p, c_q, c_1, c_2, d_1, d_2)`` of ``xi`` on the complete basis.

    ``xi = c_p eta_+ Q + c_q eta_+ P + sum_i (c_i eta_+ w_i - d_i eta_- conj(w_i))``;
    the duals follow from the biorthonormality relations, using
    ``eta_- conj(w) = eta_+ sigma_x conj(w)`` for the partner modes.

    Near the region boundaries ``|Q|`` and ``|w_2|`` grow large and rounding in
    the basis is amplified by their product; ``refine`` steps of iterative
    refinement project the residual ``xi - reconstruct(c)`` again.
    """
    xi = np.asarray(xi, dtype=complex)
    c = _dual_project(xi, pair, modes)
    for _ in range(refine):
        c = c + _dual_project(xi - reconstruct(c, pair, modes), pair, modes)
    return tuple(c)


def reconstruct(coeffs, pair, modes):
    cp, cq, c1, c2, d1, d2 = coeffs
    out = cp * (ETA_PLUS @ pair.Q) + cq * (ETA_PLUS @ pair.P)
    for c, d, m in ((c1, d1, modes[0]), (c2, d2, modes[1])):
        out = out + c * (ETA_PLUS @ m.w) - d * (ETA_MINUS @ np.conj(m.w))
    return out


def source_terms(mode, phi_g_over_chi, chi, phi_a, Omega_s, chi_dot, Omega_eff):
    """``(w^dag dLambda, w^T dLambda)`` in closed form.

    ``phi_g (dOmega_p - chi dOmega_s) / (chi Omega_eff)`` is written with
    ``dOmega_p - chi dOmega_s = Omega_s chi_dot`` and ``phi_g / chi`` passed in,
    so the expression stays finite at ``chi = 0``.
    """
    pref = phi_g_over_chi * Omega_s * chi_dot / Omega_eff
    ua, ug = mode.u[0], mode.u[2]
    va, vg = mode.v[0], mode.v[2]
    dag = pref * (2.0 * chi * phi_a * np.conj(ua + va) + np.conj(ug + vg))
    tr = pref * (2.0 * chi * phi_a * (ua + va) + (ug + vg))
    return complex(dag), complex(tr)


def lambda_rate(chi, chi_dot):
    """``dLambda/dt = (dphi_a, 0, dphi_g, dphi_a, 0, dphi_g)``."""
    da, dg = cpt_rate(chi, chi_dot)
    return np.array([da, 0.0, dg, da, 0.0, dg])


@dataclass(frozen=True)
class ProjectionState:
    c1: complex
    c2: complex
    c1_star: complex
    c2_star: complex
    omega1: complex
    omega2: complex
    condition: float

    @property
    def r(self):
        return 0.5 * math.sqrt(abs(self.c1) ** 2 + abs(self.c2) ** 2)


def projection_matrix(modes, gamma):
    (m1, m2) = modes
    o1, o2 = m1.omega, m2.omega
    u1e, u2e, v1e, v2e = m1.u[1], m2.u[1], m1.v[1], m2.v[1]
    cj = np.conj
    g11 = cj(u1e) * u1e - cj(v1e) * v1e
    g22 = cj(u2e) * u2e - cj(v2e) * v2e
    g12 = cj(u1e) * u2e - cj(v1e) * v2e
    f12 = cj(u1e) * cj(v2e) - cj(v1e) * cj(u2e)
    G = gamma
    return np.array([
        [1j * cj(o1) + G * g11, G * g12, 0.0, -G * f12],
        [G * cj(g12), 1j * cj(o2) + G * g22, G * f12, 0.0],
        [0.0, -G * cj(f12), G * cj(g11) - 1j * o1, G * cj(g12)],
        [G * cj(f12), 0.0, G * g12, G * cj(g22) - 1j * o2],
    ], dtype=complex)


def _solve_checked(K, rhs):
    cond = float(np.linalg.cond(K))
    if not math.isfinite(cond):
        raise SingularProjectionError("singular projection system", condition=cond)
    if cond > CONDITION_WARN:
        warnings.warn(f"ill-conditioned projection system (cond={cond:.3g})", RuntimeWarning, stacklevel=3)
    try:
        return np.linalg.solve(K, rhs), cond
    except np.linalg.LinAlgError as exc:
        raise SingularProjectionError(f"singular projection system: {exc}", condition=cond) from exc


def reduced_projection_from_drive(Omega_p, Omega_s, chi_dot, U_aa, gamma):
    """Projection system on ``Delta_u = 0`` in the reduced basis ``w'_+, w'_-``.

    There ``omega_1 = omega_2`` and the 6x6 basis is defective, but the
    symmetric-sum components decouple and the reduced modes stay complete.
    Unknowns ``(c_+, c_-, c_+*, c_-*)``; ``omega1``/``omega2`` report ``omega'_+-``.
    """
    rm = reduced_modes_from_drive(Omega_p, Omega_s)
    chi = Omega_p / Omega_s
    phi_a = float(dark_amplitudes(chi)[0])
    ss = Omega_s * math.sqrt(Omega_s**2 + 8.0 * Omega_p**2)
    coll = 8.0 * U_aa * Omega_p**2 * phi_a**4
    k_plus = (coll + ss**1.5) / (2.0 * ss)
    k_minus = (coll - ss**1.5) / (2.0 * ss)
    k0 = 0.5 * (k_plus + k_minus)
    C = np.array([[k_minus, k0], [k0, k_plus]])
    D = np.full((2, 2), k0)
    G = 0.5 * gamma * np.array([[1.0, -1.0], [-1.0, 1.0]])
    Z = np.zeros((2, 2))
    K = 1j * np.block([[C, D], [-D, -C]]) + np.block([[G, Z], [Z, G]])
    da, dg = cpt_rate(chi, chi_dot)
    lam = np.array([da, 0.0, dg])
    pi = np.array([rm.w_plus @ lam, rm.w_minus @ lam])
    c, cond = _solve_checked(K, -np.concatenate([pi, pi]).astype(complex))
    return ProjectionState(c1=complex(c[0]), c2=complex(c[1]), c1_star=complex(c[2]),
                           c2_star=complex(c[3]), omega1=complex(rm.omega_plus),
                           omega2=complex(rm.omega_minus), condition=cond)


def projection_from_drive(Omega_p, Omega_s, chi_dot, U_aa, Delta_u, gamma):
    """Solve the 4x4 projection system for given instantaneous drive and ``chi`` rate.

    Exactly on ``Delta_u = 0`` with collisions the 6x6 modes coalesce, so the
    reduced system is used instead.
    """
    if Delta_u == 0.0 and abs(U_aa) >= COLLISIONLESS_TOL:
        return reduced_projection_from_drive(Omega_p, Omega_s, chi_dot, U_aa, gamma)
    fm = matrices_from_drive(Omega_p, Omega_s, U_aa, Delta_u)
    modes = bogoliubov_modes(fm)
    chi = Omega_p / Omega_s
    s = math.sqrt(1.0 + 8.0 * chi * chi)
    phi_g_over_chi = -2.0 / (1.0 + s)
    rhs = np.empty(4, dtype=complex)
    for k, m in enumerate(modes):
        dag, tr = source_terms(m, phi_g_over_chi, chi, fm.phi_a, Omega_s, chi_dot, fm.Omega_eff)
        rhs[k] = -dag
        rhs[k + 2] = -tr
    c, cond = _solve_checked(projection_matrix(modes, gamma), rhs)
    return ProjectionState(c1=complex(c[0]), c2=complex(c[1]), c1_star=complex(c[2]),
                           c2_star=complex(c[3]), omega1=modes[0].omega, omega2=modes[1].omega,
                           condition=cond)


def projection_solve(t, p, Delta_u):
    """Projection amplitudes and ``r`` at time ``t`` for system ``p`` (``gamma`` from ``p``)."""
    om_p = envelope(t, PUMP, p.pulses)
    om_s = envelope(t, STOKES, p.pulses)
    _, chi_dot = mixing_ratio(t, p.pulses)
    return projection_from_drive(om_p, om_s, chi_dot, p.U_aa, Delta_u, p.gamma)


def adiabatic_parameter(t, p, Delta_u):
    return projection_solve(t, p, Delta_u).r


def analytic_r(t, p):
    """Closed-form ``r`` on effective one-photon resonance ``Delta_u = 0``."""
    om_p = envelope(t, PUMP, p.pulses)
    om_s = envelope(t, STOKES, p.pulses)
    chi, chi_dot = mixing_ratio(t, p.pulses)
    return analytic_r_from_drive(om_p, om_s, chi_dot, p.U_aa, p.gamma)


def analytic_r_from_drive(Omega_p, Omega_s, chi_dot, U_aa, gamma):
    chi = Omega_p / Omega_s
    s = math.sqrt(1.0 + 8.0 * chi * chi)
    om_eff = math.sqrt(Omega_s**2 + 8.0 * Omega_p**2)
    if U_aa == 0.0 or gamma == 0.0:
        eta = 0.0
    else:
        eta = (1.0 - 1.0 / s) ** 4 * 16.0 * U_aa**2 * gamma**2 / Omega_p**4
    num = math.sqrt((4.0 * gamma**2 + Omega_s * om_eff) * (1.0 + eta)) * abs(chi_dot)
    return num / (math.sqrt(Omega_s) * om_eff**1.5 * (1.0 + s) / 2.0)


def eta_factor(t, p):
    om_p = envelope(t, PUMP, p.pulses)
    om_s = envelope(t, STOKES, p.pulses)
    if p.U_aa == 0.0 or p.gamma == 0.0:
        return 0.0
    s = math.sqrt(1.0 + 8.0 * (om_p / om_s) ** 2)
    return (1.0 - 1.0 / s) ** 4 * 16.0 * p.U_aa**2 * p.gamma**2 / om_p**4


@dataclass(frozen=True)
class ReducedModes:
    matrix: np.ndarray
    omega0: float
    omega_plus: float
    omega_minus: float
    w0: np.ndarray
    w_plus: np.ndarray
    w_minus: np.ndarray


def reduced_modes_from_drive(Omega_p, Omega_s):
    phi_a = float(dark_amplitudes(Omega_p / Omega_s)[0])
    om_eff = math.sqrt(Omega_s**2 + 8.0 * Omega_p**2)
    ss = Omega_s * om_eff
    Mr = np.array([
        [0.0, -Omega_p * phi_a, 0.0],
        [-Omega_p * phi_a, 0.0, -0.5 * Omega_s],
        [0.0, -0.5 * Omega_s, 0.0],
    ])
    half = 0.5 * math.sqrt(ss)
    w0 = np.array([-Omega_s, 0.0, 2.0 * phi_a * Omega_p]) / math.sqrt(ss)
    # M' w = omega w with the printed +-sqrt(ss) middle entry pairs it with -+omega
    w_a = np.array([2.0 * phi_a * Omega_p, math.sqrt(ss), Omega_s]) / math.sqrt(2.0 * ss)
    w_b = np.array([2.0 * phi_a * Omega_p, -math.sqrt(ss), Omega_s]) / math.sqrt(2.0 * ss)
    return ReducedModes(matrix=Mr, omega0=0.0, omega_plus=half, omega_minus=-half,
                        w0=w0, w_plus=w_b, w_minus=w_a)


def reduced_modes_on_resonance(t, p):
    """Eigen-decomposition of the symmetric 3x3 matrix that governs ``Delta_u = 0``."""
    return reduced_modes_from_drive(envelope(t, PUMP, p.pulses), envelope(t, STOKES, p.pulses))


def pulse_rates(t, p):
    """``(dOmega_p/dt, dOmega_s/dt)``; convenience for trace output."""
    return envelope_rate(t, PUMP, p.pulses), envelope_rate(t, STOKES, p.pulses)
