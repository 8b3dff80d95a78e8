import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlstirap.errors import PulseError
from nlstirap.pulses import (
    PUMP, STANDARD_PULSES, STOKES, DetuningPolicy, PulseParams, collision_shift, envelope, envelope_rate,
    mixing_ratio,
)

times = st.floats(min_value=0.0, max_value=40.0)


def test_standard_values():
    p = STANDARD_PULSES
    assert p.t_sp == 15.0
    assert envelope(19.0, PUMP, p) == 10.0
    assert envelope(11.0, STOKES, p) == 10.0
    assert envelope(15.0, PUMP, p) == pytest.approx(10.0 / math.e, rel=1e-15)
    chi, chi_dot = mixing_ratio(15.0, p)
    assert chi == pytest.approx(1.0, abs=1e-15)
    # d ln chi/dt = 2(t_p - t_s)/tau^2 = 1 at the symmetric point
    assert chi_dot == pytest.approx(1.0, rel=1e-14)


def test_array_input():
    t = np.linspace(0, 40, 9)
    out = envelope(t, PUMP, STANDARD_PULSES)
    assert out.shape == t.shape
    assert isinstance(envelope(3.0, STOKES, STANDARD_PULSES), float)


@given(times)
def test_envelope_rate_matches_difference(t):
    h = 1e-5
    for which in (PUMP, STOKES):
        fd = (envelope(t + h, which, STANDARD_PULSES) - envelope(t - h, which, STANDARD_PULSES)) / (2 * h)
        assert envelope_rate(t, which, STANDARD_PULSES) == pytest.approx(fd, rel=1e-6, abs=1e-9)


@given(st.floats(min_value=2.0, max_value=30.0))
def test_chi_rate_matches_difference(t):
    h = 1e-6
    c1, _ = mixing_ratio(t + h, STANDARD_PULSES)
    c0, _ = mixing_ratio(t - h, STANDARD_PULSES)
    _, rate = mixing_ratio(t, STANDARD_PULSES)
    assert rate == pytest.approx((c1 - c0) / (2 * h), rel=1e-5)


def test_validation():
    with pytest.raises(ValueError):
        PulseParams(width=0.0)
    with pytest.raises(ValueError):
        PulseParams(peak_pump=-1.0)
    with pytest.raises(ValueError):
        envelope(1.0, "probe", STANDARD_PULSES)
    with pytest.raises(ValueError):
        DetuningPolicy(single_photon="ramped")


def test_chi_undefined_when_stokes_underflows():
    with pytest.raises(PulseError):
        mixing_ratio(1e4, STANDARD_PULSES)


def test_width_stokes_defaults_to_width():
    assert PulseParams(width=3.0).width_stokes == 3.0
    assert PulseParams(width=3.0, width_stokes=5.0).width_stokes == 5.0


@settings(max_examples=50)
@given(times, st.floats(min_value=-10, max_value=10), st.floats(min_value=-10, max_value=10))
def test_chirp_keeps_effective_detuning(t, U, du):
    pol = DetuningPolicy.chirped(du)
    big, small = pol.detunings(t, STANDARD_PULSES, U)
    shift = collision_shift(t, STANDARD_PULSES, U)
    assert big + shift == pytest.approx(du, abs=1e-12)
    assert small + shift == pytest.approx(0.0, abs=1e-12)
    assert pol.effective_single_photon(t, STANDARD_PULSES, U) == du


def test_constant_policy():
    pol = DetuningPolicy.constant(delta=0.0)
    big, small = pol.detunings(15.0, STANDARD_PULSES, 5.0)
    assert big == 0.0
    # two-photon detuning stays chirped unless asked otherwise
    assert small == pytest.approx(-4 * 5.0 * 2 / (1 + 3), rel=1e-14)
    assert pol.effective_single_photon(15.0, STANDARD_PULSES, 5.0) == pytest.approx(10.0, rel=1e-14)
    fixed = DetuningPolicy.constant(delta=1.0, two_photon="constant", two_photon_delta=0.5)
    assert fixed.detunings(15.0, STANDARD_PULSES, 5.0) == (1.0, 0.5)


def test_shift_limits():
    # all atoms before the pump arrives, all molecules after
    assert collision_shift(0.0, STANDARD_PULSES, 2.0) == pytest.approx(8.0, rel=1e-6)
    assert collision_shift(30.0, STANDARD_PULSES, 2.0) < 1e-3
    assert collision_shift(15.0, STANDARD_PULSES, 0.0) == 0.0
