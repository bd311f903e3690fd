import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from suspopt import metrics
from suspopt.errors import ConfigError, DomainError
from suspopt.metrics import (
    WK,
    classify_comfort,
    contact_force_ratio,
    settling_time,
    weight_acceleration,
    weighted_rms,
)
from suspopt.model import LIGHT

from oracles import sine_amplitude, wk_iso

FS = 1000.0


def filtered_amplitude(f, seconds=None):
    seconds = seconds or max(10.0, 20.0 / f)
    t = np.arange(0, seconds, 1 / FS)
    y = weight_acceleration(np.sin(2 * math.pi * f * t), FS)
    tail = t >= seconds / 2
    return sine_amplitude(t[tail], y[tail], f)


def test_zero_in_zero_out():
    assert np.all(weight_acceleration(np.zeros(5000), FS) == 0.0)


def test_gain_at_6hz():
    assert 0.9 <= filtered_amplitude(6.0) <= 1.1


def test_gain_at_005hz():
    assert filtered_amplitude(0.05, seconds=400.0) < 0.05


def test_analog_prototype_matches_iso_form():
    f = np.logspace(-1, np.log10(400), 60)
    np.testing.assert_allclose(np.abs(WK.analog_response(f)), wk_iso(f), rtol=1e-10)


def test_band_shape():
    f = np.linspace(4, 8, 21)
    g = np.abs(WK.analog_response(f))
    assert np.all((g >= 0.7) & (g <= 1.1))
    assert abs(WK.analog_response(0.1)) < 0.1
    assert abs(WK.analog_response(400.0)) < 0.1
    assert np.abs(WK.digital_response([400.0], FS))[0] < 0.1


def test_digital_tracks_analog_to_50hz():
    f = np.logspace(-1, np.log10(50), 200)
    ratio = np.abs(WK.digital_response(f, FS)) / np.abs(WK.analog_response(f))
    assert np.max(np.abs(ratio - 1)) < 0.02


def test_simulated_tone_matches_digital_response():
    for f in (1.0, 12.0):
        assert filtered_amplitude(f) == pytest.approx(np.abs(WK.digital_response([f], FS))[0], rel=2e-3)


def test_low_sample_rate_rejected():
    with pytest.raises(ConfigError):
        WK.sos(400.0)


# -- weighted RMS --------------------------------------------------------


def test_rms_constant():
    assert weighted_rms(np.full(1001, -0.7), 1.0) == pytest.approx(0.7, rel=1e-12)


def test_rms_sinusoid_whole_periods():
    t = np.linspace(0, 3.0, 30001)
    assert weighted_rms(np.sin(2 * math.pi * 2 * t), 3.0) == pytest.approx(1 / math.sqrt(2), rel=1e-9)


@given(arrays(float, st.integers(2, 200), elements=st.floats(-100, 100)), st.floats(-1e3, 1e3))
def test_rms_scale_equivariance(a, c):
    assert weighted_rms(c * a, 2.0) == pytest.approx(abs(c) * weighted_rms(a, 2.0), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("a,T", [(np.array([1.0]), 1.0), (np.array([]), 1.0), (np.ones(10), 0.0)])
def test_rms_domain(a, T):
    with pytest.raises(DomainError):
        weighted_rms(a, T)


# -- comfort classes ---------------------------------------------------


@pytest.mark.parametrize("value,labels", [
    (0.2, ["not uncomfortable"]),
    (0.9, ["fairly uncomfortable", "uncomfortable"]),
    (1.33, ["uncomfortable", "very uncomfortable"]),
    (3.0, ["extremely uncomfortable"]),
])
def test_comfort_classes(value, labels):
    assert classify_comfort(value) == labels


def test_comfort_table():
    rows = [(lvl.low, lvl.high) for lvl in metrics.COMFORT_LEVELS]
    assert rows == [(0, 0.315), (0.315, 0.63), (0.5, 1.0), (0.8, 1.6), (1.25, 2.5), (2.0, math.inf)]


def test_comfort_negative():
    with pytest.raises(DomainError):
        classify_comfort(-0.1)


@given(st.floats(0, 10))
def test_every_level_has_a_label(v):
    assert classify_comfort(v)


# -- contact-force ratio -------------------------------------------------


def test_rft_constant_is_zero():
    assert contact_force_ratio(np.full(100, 2000.0), LIGHT) == 0.0


@given(arrays(float, st.integers(1, 300), elements=st.floats(0, 1e4)), st.floats(-1e3, 1e3))
def test_rft_shift_invariant(f, shift):
    a = contact_force_ratio(f, LIGHT)
    assert contact_force_ratio(f + shift, LIGHT) == pytest.approx(a, rel=1e-6, abs=1e-9)


def test_rft_definition():
    f = np.array([1.0, 3.0])
    assert contact_force_ratio(f, LIGHT) == pytest.approx(1.0 / LIGHT.static_load)


def test_rft_empty():
    with pytest.raises(DomainError):
        contact_force_ratio(np.array([]), LIGHT)


# -- settling time ------------------------------------------------------


def test_already_settled():
    t = np.linspace(0, 10, 10001)
    assert settling_time(np.zeros_like(t), t, 1.0) == (0.0, True)


@pytest.mark.parametrize("tau,band", [(0.3, 0.05), (1.0, 0.05), (0.5, 0.02)])
def test_exponential_envelope(tau, band):
    dt = 1e-3
    t = np.arange(0, 30, dt)
    t0 = 2.0
    x = np.where(t < t0, 0.0, np.exp(-(t - t0) / tau))
    ts, settled = settling_time(x, t, t0, band=band, final_value=0.0)
    assert settled
    assert abs(ts - tau * math.log(1 / band)) <= dt


def test_tighter_band_settles_later():
    t = np.arange(0, 20, 1e-3)
    x = np.exp(-t / 0.4) * np.cos(2 * math.pi * 1.5 * t)
    assert settling_time(x, t, 0.0, band=0.02).time >= settling_time(x, t, 0.0, band=0.05).time


def test_never_settles():
    t = np.arange(0, 10, 1e-3)
    x = np.sin(2 * math.pi * t)
    ts, settled = settling_time(x, t, 1.0)
    assert not settled
    assert ts == pytest.approx(t[-1] - 1.0, abs=1e-3)


def test_settling_domain():
    t = np.linspace(0, 1, 11)
    with pytest.raises(DomainError):
        settling_time(np.zeros(5), t, 0.1)
    with pytest.raises(DomainError):
        settling_time(np.zeros(11), t, 2.0)
