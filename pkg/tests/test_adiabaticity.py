import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from nlstirap.adiabaticity import (
    ETA_MINUS, ETA_PLUS, analytic_r, analytic_r_from_drive, bogoliubov_modes, eta_factor, expansion_coefficients,
    goldstone_pair, lambda_rate, projection_from_drive, projection_solve, reconstruct, reduced_modes_from_drive,
    reduced_modes_on_resonance, source_terms,
)
from nlstirap.errors import DegenerateSpectrumError, SingularGoldstoneError
from nlstirap.meanfield import SystemParams
from nlstirap.pulses import STANDARD_PULSES, PulseParams, mixing_ratio
from nlstirap.stability import Region, build_matrices, classify, matrices_from_drive

times = st.floats(min_value=6.0, max_value=24.0)
coupling = st.floats(min_value=-10.0, max_value=10.0)
detuning = st.floats(min_value=-10.0, max_value=10.0)


def _stable_modes(t, U, du):
    fm = build_matrices(t, SystemParams(U_aa=U), du)
    assume(classify(U, du, fm.Omega_p, fm.Omega_s).region is Region.III)
    try:
        modes = bogoliubov_modes(fm)
        pair = goldstone_pair(fm)
    except (DegenerateSpectrumError, SingularGoldstoneError):
        assume(False)
    return fm, modes, pair


def _rel(x, a, b):
    return abs(x) / (np.linalg.norm(a) * np.linalg.norm(b))


@settings(max_examples=150)
@given(times, coupling, detuning)
def test_modes_are_normalized_eigenvectors(t, U, du):
    fm, modes, _ = _stable_modes(t, U, du)
    scale = np.linalg.norm(fm.M, 2)
    for m in modes:
        assert abs(m.normalization - 1) < 1e-10
        assert np.linalg.norm(fm.M @ m.w - m.omega * m.w) < 1e-8 * scale


@settings(max_examples=150)
@given(times, coupling, detuning)
def test_biorthonormality(t, U, du):
    _, modes, pair = _stable_modes(t, U, du)
    for i, a in enumerate(modes):
        for j, b in enumerate(modes):
            assert abs(np.vdot(a.w, ETA_PLUS @ b.w) - (i == j)) < 1e-8
            assert abs(np.vdot(a.w, ETA_MINUS @ b.w)) < 1e-8
        for v in (pair.P, pair.Q):
            for eta in (ETA_PLUS, ETA_MINUS):
                assert _rel(np.vdot(v, eta @ a.w), v, a.w) < 1e-8


@settings(max_examples=150)
@given(times, coupling, detuning, st.integers(0, 2**32 - 1))
def test_completeness(t, U, du, seed):
    _, modes, pair = _stable_modes(t, U, du)
    rng = np.random.default_rng(seed)
    xi = rng.normal(size=6) + 1j * rng.normal(size=6)
    back = reconstruct(expansion_coefficients(xi, pair, modes), pair, modes)
    assert np.linalg.norm(back - xi) < 1e-8 * np.linalg.norm(xi)


def test_goldstone_printed_form():
    fm = build_matrices(STANDARD_PULSES.t_sp, SystemParams(U_aa=2.0), 1.0)
    g = goldstone_pair(fm)
    om = 10 / math.e
    pa2 = 0.5
    nu = (64 * 2.0 * 0.25 * 1.0 + 9 * om * om) / (8 * 2.0 * pa2)
    assert g.nu == pytest.approx(nu, rel=1e-14)
    assert g.Q[0] == pytest.approx(3 * om / (8 * nu * 2.0 * pa2), rel=1e-14)
    scale = np.linalg.norm(fm.M, 2)
    assert np.linalg.norm(fm.M @ g.Q - g.P / g.nu) < 1e-8 * scale
    assert abs(np.vdot(g.Q, ETA_PLUS @ g.P) - 1) < 1e-10
    assert np.linalg.norm(fm.M @ g.P) < 1e-12 * scale


def test_goldstone_singular_cases():
    with pytest.raises(SingularGoldstoneError):
        goldstone_pair(build_matrices(15.0, SystemParams(U_aa=0.0), 1.0))
    om = 10 / math.e
    # nu = 0 where 64 U phi_a^4 chi^2 Delta_u = -Omega_eff^2
    du = -9 * om * om / (64 * 8.0 * 0.25)
    with pytest.raises(SingularGoldstoneError):
        goldstone_pair(matrices_from_drive(om, om, 8.0, du))


def test_collisionless_modes_have_no_v():
    fm = build_matrices(15.0, SystemParams(U_aa=0.0), 2.0)
    modes = bogoliubov_modes(fm)
    for m in modes:
        assert np.all(m.v == 0)
        assert np.sum(m.u**2) == pytest.approx(1.0)
        assert np.linalg.norm(fm.A @ m.u - m.omega * m.u) < 1e-12 * np.linalg.norm(fm.A)


def test_small_coupling_is_continuous_with_collisionless():
    p0 = projection_solve(15.0, SystemParams(U_aa=0.0), 2.0).r
    p1 = projection_solve(15.0, SystemParams(U_aa=1e-6), 2.0).r
    assert p1 == pytest.approx(p0, rel=1e-4)


def test_exceptional_point_is_rejected():
    # Delta_u = 0 with U_aa != 0 makes omega1 = omega2
    with pytest.raises(DegenerateSpectrumError):
        bogoliubov_modes(build_matrices(15.0, SystemParams(U_aa=2.0), 0.0))


@settings(max_examples=100)
@given(times, coupling, detuning)
def test_source_terms_closed_form(t, U, du):
    fm = build_matrices(t, SystemParams(U_aa=U), du)
    try:
        modes = bogoliubov_modes(fm)
    except DegenerateSpectrumError:
        assume(False)
    chi, chi_dot = mixing_ratio(t, STANDARD_PULSES)
    lam = lambda_rate(chi, chi_dot)
    s = math.sqrt(1 + 8 * chi * chi)
    for m in modes:
        dag, tr = source_terms(m, -2 / (1 + s), chi, fm.phi_a, fm.Omega_s, chi_dot, fm.Omega_eff)
        ref = np.linalg.norm(m.w) * np.linalg.norm(lam)
        assert abs(dag - np.vdot(m.w, lam)) < 1e-12 * ref
        assert abs(tr - m.w @ lam) < 1e-12 * ref


def test_no_drive_no_excitation():
    st_ = projection_from_drive(3.0, 4.0, 0.0, 2.0, 1.0, 1.0)
    assert st_.r == 0.0


@pytest.mark.parametrize("t", [12.0, 13.5, 15.0, 16.5, 18.0])
def test_collisionless_pipeline_matches_analytic(t):
    p = SystemParams(U_aa=0.0, gamma=1.0)
    assert projection_solve(t, p, 0.0).r == pytest.approx(analytic_r(t, p), rel=1e-10)


def test_frozen_r_values():
    p = SystemParams(U_aa=0.0, gamma=1.0)
    assert analytic_r(15.0, p) == pytest.approx(0.047484007344888425, rel=1e-12)
    # frozen from this implementation; region II, region I and region III cells
    assert projection_solve(15.0, SystemParams(U_aa=8.0), 3.0).r == pytest.approx(0.04911616497076519, rel=1e-9)
    assert projection_solve(15.0, SystemParams(U_aa=8.0), -3.0).r == pytest.approx(0.06481901404907033, rel=1e-9)
    assert projection_solve(15.0, SystemParams(U_aa=2.0), 6.0).r == pytest.approx(0.07562141149451555, rel=1e-9)


def test_analytic_collisionless_limit():
    p = SystemParams(U_aa=0.0, gamma=0.0)
    assert eta_factor(15.0, p) == 0.0
    chi, chi_dot = mixing_ratio(15.0, STANDARD_PULSES)
    om = 10 / math.e
    om_eff = 3 * om
    assert analytic_r(15.0, p) == pytest.approx(2 * abs(chi_dot) / (om_eff * (1 + 3)), rel=1e-14)


def test_strong_pump_insensitive_to_collisions():
    # 16 U^2 gamma^2 / Omega_p^4 << 1 leaves r within 1% of the collisionless value
    r0 = analytic_r_from_drive(60.0, 60.0, 1.0, 0.0, 1.0)
    r1 = analytic_r_from_drive(60.0, 60.0, 1.0, 8.0, 1.0)
    assert abs(r1 / r0 - 1) < 0.01


def test_eta_finite_before_pump():
    p = SystemParams(U_aa=8.0, gamma=1.0)
    assert math.isfinite(eta_factor(2.0, p))
    assert eta_factor(2.0, p) < eta_factor(15.0, p)


@given(st.floats(min_value=0.1, max_value=10), st.floats(min_value=0.1, max_value=10))
def test_reduced_modes(om_p, om_s):
    rm = reduced_modes_from_drive(om_p, om_s)
    half = 0.5 * math.sqrt(om_s * math.sqrt(om_s**2 + 8 * om_p**2))
    assert rm.omega_plus == pytest.approx(half) and rm.omega_minus == -rm.omega_plus
    for w, e in ((rm.w0, 0.0), (rm.w_plus, rm.omega_plus), (rm.w_minus, rm.omega_minus)):
        assert np.linalg.norm(rm.matrix @ w - e * w) < 1e-10 * max(1.0, half)
        assert np.linalg.norm(w) == pytest.approx(1.0, abs=1e-12)
    assert abs(rm.w0 @ rm.w_plus) < 1e-12 and abs(rm.w0 @ rm.w_minus) < 1e-12


def test_reduced_modes_equal_rabi():
    om = 4.0
    rm = reduced_modes_from_drive(om, om)
    assert rm.omega_plus == pytest.approx(math.sqrt(3) / 2 * om)
    rm2 = reduced_modes_on_resonance(15.0, SystemParams())
    assert rm2.omega_plus == pytest.approx(math.sqrt(3) / 2 * 10 / math.e)


def test_time_rescaling_invariance():
    # rates x k, times / k leaves the dimensionless r unchanged
    k = 3.0
    base = PulseParams()
    fast = PulseParams(peak_pump=10 * k, peak_stokes=10 * k, t_pump=19 / k, t_stokes=11 / k, width=4 / k)
    r0 = projection_solve(15.0, SystemParams(U_aa=2.0, gamma=1.0, pulses=base), 1.5).r
    r1 = projection_solve(15.0 / k, SystemParams(U_aa=2.0 * k, gamma=k, pulses=fast), 1.5 * k).r
    assert r1 == pytest.approx(r0, rel=1e-9)
