import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlstirap.cpt import cpt_rate, cpt_state, dark_amplitudes
from nlstirap.meanfield import SystemParams, rhs
from nlstirap.pulses import PUMP, STANDARD_PULSES, STOKES, envelope, mixing_ratio

chis = st.floats(min_value=0.0, max_value=1e6)


def test_unit_ratio_exact():
    s = cpt_state(1.0)
    assert s.phi_a == math.sqrt(0.5)
    assert s.phi_g == -0.5


def test_limits():
    s = cpt_state(0.0, U_aa=3.0)
    assert (s.phi_a, s.phi_g) == (1.0, 0.0)
    assert s.mu == 6.0
    assert s.delta_resonant == -12.0
    assert s.shift == 12.0
    big = cpt_state(1e8)
    assert big.phi_a < 1e-3 and big.phi_g == pytest.approx(-1 / math.sqrt(2), rel=1e-6)


def test_negative_ratio_rejected():
    with pytest.raises(ValueError):
        cpt_state(-0.1)


@given(chis)
def test_normalization(chi):
    a, g = dark_amplitudes(chi)
    assert abs(a * a + 2 * g * g - 1) < 1e-12


@given(st.floats(min_value=2e-6, max_value=50.0))
def test_rates_match_difference(chi):
    h = 1e-6 * max(chi, 1.0)
    a1, g1 = dark_amplitudes(chi + h)
    a0, g0 = dark_amplitudes(chi - h)
    da, dg = cpt_rate(chi, 1.0)
    assert da == pytest.approx((a1 - a0) / (2 * h), rel=1e-5, abs=1e-9)
    assert dg == pytest.approx((g1 - g0) / (2 * h), rel=1e-5, abs=1e-9)


def test_rates_at_zero():
    assert cpt_rate(0.0, 1.0) == (0.0, -1.0)


def test_vectorized():
    chi = np.array([0.0, 1.0, 2.0])
    a, g = dark_amplitudes(chi)
    assert a.shape == (3,)
    da, dg = cpt_rate(chi, np.ones(3))
    assert da.shape == (3,)


@given(st.floats(min_value=5.0, max_value=25.0), st.floats(min_value=-10, max_value=10))
def test_dark_state_is_stationary(t, U):
    # with the chirped two-photon detuning the dark state only rotates:
    # psi_a at mu, psi_g at 2 mu, psi_e stays empty
    p = SystemParams(U_aa=U)
    chi, _ = mixing_ratio(t, STANDARD_PULSES)
    s = cpt_state(chi, U)
    d = rhs(t, s.amplitudes, p)
    scale = max(envelope(t, PUMP, STANDARD_PULSES), envelope(t, STOKES, STANDARD_PULSES), abs(U), 1.0)
    assert abs(d[0] + 1j * s.mu * s.phi_a) < 1e-12 * scale
    assert abs(d[1]) < 1e-12 * scale
    assert abs(d[2] + 2j * s.mu * s.phi_g) < 1e-12 * scale
