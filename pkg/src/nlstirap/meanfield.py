"""Mean-field equations of motion for the atom / excited-molecule / ground-molecule triple.

The amplitudes obey (Omega_p, Omega_s real)::

    d psi_a/dt = i [ Omega_p conj(psi_a) psi_e - 2 U_aa |psi_a|^2 psi_a - 2 U_ag |psi_g|^2 psi_a ]
    d psi_e/dt = i [ (Delta + i gamma) psi_e + Omega_p/2 psi_a^2 + Omega_s/2 psi_g ]
    d psi_g/dt = i [ delta psi_g + Omega_s/2 psi_e - (2 U_ag |psi_a|^2 + 2 U_gg |psi_g|^2) psi_g ]

and the particle number ``N = |psi_a|^2 + 2|psi_e|^2 + 2|psi_g|^2`` decays as
``dN/dt = -4 gamma |psi_e|^2``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import DOP853, OdeSolution

from nlstirap._table import write_table
from nlstirap.errors import IntegrationError, PulsesNotFinishedError, StiffnessError
from nlstirap.pulses import CHIRPED, PUMP, STANDARD_PULSES, STOKES, DetuningPolicy, PulseParams, envelope

ATOMS = (1.0 + 0j, 0j, 0j)
DEFAULT_SPAN = (0.0, 40.0)
DEFAULT_TOL = 1e-9
# atol = ATOL_FACTOR * tol; small components (psi_e, early psi_g) need the tight floor
ATOL_FACTOR = 1e-9
# The embedded error estimate is not a bound; the solver runs at RTOL_SAFETY * tol
# so the realized local error stays below tol.
RTOL_SAFETY = 0.1

# Amplitudes are bounded by sqrt(N(0)); anything this large is a blow-up.
_OVERFLOW = 1e3


@dataclass(frozen=True)
class SystemParams:
    U_aa: float = 0.0
    gamma: float = 1.0
    detuning: DetuningPolicy = field(default_factory=DetuningPolicy)
    pulses: PulseParams = STANDARD_PULSES
    U_ag: float = 0.0
    U_gg: float = 0.0

    def __post_init__(self):
        if not self.gamma >= 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma!r}")

    def drive(self, t):
        """``(Omega_p, Omega_s, Delta, delta)`` at ``t`` (scalar or array)."""
        om_p = envelope(t, PUMP, self.pulses)
        om_s = envelope(t, STOKES, self.pulses)
        big, small = self.detuning.detunings(t, self.pulses, self.U_aa)
        return om_p, om_s, big, small


def _drive_function(p):
    """Scalar-only drive using ``math``; the ODE right-hand side calls this a lot."""
    pulses, pol, U = p.pulses, p.detuning, p.U_aa
    P0, tp, wp = pulses.peak_pump, pulses.t_pump, pulses.width
    S0, ts, ws = pulses.peak_stokes, pulses.t_stokes, pulses.width_stokes
    log_ratio = math.log(P0 / S0)
    exp = math.exp
    chirp_big = pol.single_photon == CHIRPED
    chirp_small = pol.two_photon == CHIRPED
    du, d0, dd0 = pol.delta_u, pol.delta, pol.two_photon_delta

    def drive(t):
        xp = (t - tp) / wp
        xs = (t - ts) / ws
        om_p = P0 * exp(-xp * xp)
        om_s = S0 * exp(-xs * xs)
        if U != 0.0:
            log_chi = min(log_ratio - xp * xp + xs * xs, 700.0)
            chi = exp(log_chi)
            shift = 8.0 * U / (1.0 + math.sqrt(1.0 + 8.0 * chi * chi))
        else:
            shift = 0.0
        big = du - shift if chirp_big else d0
        small = -shift if chirp_small else dd0
        return om_p, om_s, big, small

    return drive


def _real_rhs(p):
    drive = _drive_function(p)
    U2, Uag2, Ugg2, gamma = 2.0 * p.U_aa, 2.0 * p.U_ag, 2.0 * p.U_gg, p.gamma

    def f(t, y):
        a = complex(y[0], y[1])
        e = complex(y[2], y[3])
        g = complex(y[4], y[5])
        om_p, om_s, big, small = drive(t)
        na = a.real * a.real + a.imag * a.imag
        ng = g.real * g.real + g.imag * g.imag
        da = 1j * (om_p * a.conjugate() * e - (U2 * na + Uag2 * ng) * a)
        de = 1j * ((big + 1j * gamma) * e + 0.5 * om_p * a * a + 0.5 * om_s * g)
        dg = 1j * (small * g + 0.5 * om_s * e - (Uag2 * na + Ugg2 * ng) * g)
        return np.array((da.real, da.imag, de.real, de.imag, dg.real, dg.imag))

    return f


def rhs(t, s, p):
    """Complex time derivative of the amplitude triple ``s = (psi_a, psi_e, psi_g)``."""
    s = np.asarray(s, dtype=complex)
    y = np.array([s[0].real, s[0].imag, s[1].real, s[1].imag, s[2].real, s[2].imag])
    dy = _real_rhs(p)(float(t), y)
    return dy[0::2] + 1j * dy[1::2]


def populations(s):
    """``(P_a, P_e, P_g) = (|psi_a|^2, 2|psi_e|^2, 2|psi_g|^2)``; works along a leading axis too."""
    s = np.asarray(s, dtype=complex)
    w = np.array([1.0, 2.0, 2.0])
    return np.abs(s) ** 2 * w


def particle_number(s):
    return populations(s).sum(axis=-1)


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    drive: np.ndarray
    params: SystemParams
    solution: OdeSolution = field(default=None, repr=False, compare=False)
    n_steps: int = 0
    initial: np.ndarray = None

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states differ in length")

    def __call__(self, t):
        """Dense-output amplitudes at arbitrary ``t`` inside the integration span."""
        if self.solution is None:
            raise ValueError("trajectory has no dense output")
        y = self.solution(t)
        return (y[0::2] + 1j * y[1::2]).T

    @property
    def populations(self):
        return populations(self.states)

    @property
    def number(self):
        return particle_number(self.states)

    def to_csv(self, path):
        header = ["t", "re_psi_a", "im_psi_a", "re_psi_e", "im_psi_e", "re_psi_g", "im_psi_g",
                  "P_a", "P_e", "P_g", "Omega_p", "Omega_s", "Delta", "delta"]
        pops = self.populations
        rows = []
        for k, t in enumerate(self.times):
            s = self.states[k]
            rows.append([t, s[0].real, s[0].imag, s[1].real, s[1].imag, s[2].real, s[2].imag,
                         *pops[k], *self.drive[k]])
        return write_table(path, header, rows)


def integrate(initial=ATOMS, p=None, t_span=DEFAULT_SPAN, tol=DEFAULT_TOL, t_eval=None, atol=None):
    """Integrate the mean-field equations with an adaptive Dormand-Prince 8(5,3) scheme.

    Parameters
    ----------
    initial : sequence of 3 complex
        ``(psi_a, psi_e, psi_g)`` at ``t_span[0]``. Default is a pure atomic condensate.
    p : SystemParams
    t_span : (float, float)
    tol : float
        Relative local error tolerance (passed to the solver as ``RTOL_SAFETY * tol``).
        The absolute tolerance defaults to ``ATOL_FACTOR * tol``.
    t_eval : array_like, optional
        Sample times for the returned trajectory (dense output). Default: accepted steps.

    Raises
    ------
    StiffnessError
        The step size underflowed.
    IntegrationError
        The state became non-finite or blew up.
    """
    if p is None:
        p = SystemParams()
    t0, t1 = map(float, t_span)
    if not (math.isfinite(t0) and math.isfinite(t1) and t1 > t0):
        raise ValueError(f"t_span must be finite and increasing, got {t_span!r}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    if atol is None:
        atol = ATOL_FACTOR * tol
    s0 = np.asarray(initial, dtype=complex)
    y0 = np.array([s0[0].real, s0[0].imag, s0[1].real, s0[1].imag, s0[2].real, s0[2].imag])

    solver = DOP853(_real_rhs(p), t0, y0, t1, rtol=RTOL_SAFETY * tol, atol=atol)
    ts = [t0]
    ys = [y0]
    interpolants = []
    while solver.status == "running":
        message = solver.step()
        if solver.status == "failed":
            raise StiffnessError(f"integration failed: {message}", t=solver.t)
        y = solver.y
        if not np.all(np.isfinite(y)):
            raise IntegrationError("non-finite amplitudes", t=solver.t)
        if np.max(np.abs(y)) > _OVERFLOW:
            raise IntegrationError("amplitude overflow", t=solver.t)
        interpolants.append(solver.dense_output())
        ts.append(solver.t)
        ys.append(y.copy())

    sol = OdeSolution(np.array(ts), interpolants)
    if t_eval is None:
        times = np.array(ts)
        Y = np.array(ys)
    else:
        times = np.asarray(t_eval, dtype=float)
        if np.any(np.diff(times) <= 0):
            raise ValueError("t_eval must be strictly increasing")
        if times[0] < t0 or times[-1] > t1:
            raise ValueError("t_eval outside t_span")
        Y = sol(times).T
    states = Y[:, 0::2] + 1j * Y[:, 1::2]
    drive = np.column_stack(p.drive(times))
    return Trajectory(times=times, states=states, drive=drive, params=p, solution=sol,
                      n_steps=len(interpolants), initial=s0)


def transfer_efficiency(traj, threshold=1e-6):
    """Final ground-molecule fraction ``2|psi_g(T)|^2 / N(0)``.

    Raises :class:`PulsesNotFinishedError` unless both envelopes are below
    ``threshold`` times their peaks at the final time.
    """
    pulses = traj.params.pulses
    T = float(traj.times[-1])
    for which in (PUMP, STOKES):
        if envelope(T, which, pulses) >= threshold * pulses.peak(which):
            raise PulsesNotFinishedError(f"{which} pulse still on at t = {T} us")
    n0 = particle_number(traj.states[0] if traj.initial is None else traj.initial)
    return float(2.0 * abs(traj.states[-1][2]) ** 2 / n0)


def run_efficiency(p, t_span=DEFAULT_SPAN, tol=DEFAULT_TOL):
    """Efficiency of a pure-atom start; one sweep cell."""
    traj = integrate(ATOMS, p, t_span=t_span, tol=tol, t_eval=[t_span[0], t_span[1]])
    return transfer_efficiency(traj)
