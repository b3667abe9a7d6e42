import math

import numpy as np
import pytest
from scipy.special import jv

from qhhg.params import ParameterError, SystemParams
from qhhg.smbe import (
    CurrentTrace,
    PulseShape,
    classical_current,
    compare_backends,
    emission_spectrum,
    find_peak,
)

from oracles import jacobi_anger_sin_cos


def make(b=5.7, mu=1.0):
    return SystemParams.from_ratio(b, 1e4, mu, 9)


def test_pulse_validation():
    with pytest.raises(ParameterError):
        PulseShape("cos2", 3.0, 5.0)
    with pytest.raises(ParameterError):
        PulseShape("cos2", 3.0, 8.0, 100)
    with pytest.raises(ParameterError):
        PulseShape("square")
    PulseShape("flat", 3.0, 2.0)


@pytest.mark.parametrize("env", ["cos2", "gaussian"])
def test_envelope_fwhm(env):
    pulse = PulseShape(env, 3.0, 8.0, 1024)
    tau = pulse.time()
    g = pulse.envelope_values(tau)
    above = tau[g >= 0.5]
    width = (above[-1] - above[0]) / (2 * math.pi)
    assert width == pytest.approx(3.0, abs=2 / 1024)
    assert g.max() == pytest.approx(1.0, abs=1e-6)


def test_linear_response():
    p = make(b=1e-7)
    pulse = PulseShape("cos2", 3.0, 8.0)
    tr = classical_current(p, pulse)
    lin = 1e-7 * pulse.envelope_values(tr.time) * np.cos(tr.time)
    assert np.max(np.abs(tr.current - lin)) < 1e-20


def test_jacobi_anger_pointwise():
    tr = classical_current(make(), PulseShape("flat", 3.0, 4.0))
    ref = jacobi_anger_sin_cos(5.7, tr.time)
    assert np.max(np.abs(tr.current - ref)) < 1e-12


def test_zero_field():
    tr = classical_current(make(b=0.0), PulseShape())
    assert np.all(tr.current == 0)
    assert np.all(np.abs(tr.current) <= 1)


def test_trace_validation():
    with pytest.raises(ValueError):
        CurrentTrace(np.zeros(3), np.zeros(4), "flat", 0.1)


def test_flat_peak_ratios():
    tr = classical_current(make(), PulseShape("flat", 3.0, 64.0))
    s = emission_spectrum(tr, 11.0)
    peaks = {m: find_peak(s.omega_over_wl, s.intensity, m) for m in (3, 5, 7, 9)}
    for m in (5, 7, 9):
        ref = (m * jv(m, 5.7)) ** 2 / (3 * jv(3, 5.7)) ** 2
        assert peaks[m] / peaks[3] == pytest.approx(ref, rel=0.01)


def test_sinusoid_single_peak():
    pulse = PulseShape("flat", 3.0, 64.0)
    tau = pulse.time()
    tr = CurrentTrace(tau, np.sin(3 * tau), "flat", pulse.dt)
    s = emission_spectrum(tr, 10.0)
    k = np.argmax(s.intensity)
    assert s.omega_over_wl[k] == pytest.approx(3.0, abs=0.01)
    far = np.abs(s.omega_over_wl - 3.0) > 0.5
    assert np.max(s.intensity[far]) < 1e-8


def test_time_reversal():
    tr = classical_current(make(), PulseShape("cos2", 2.5, 8.0))
    rev = CurrentTrace(tr.time, tr.current[::-1].copy(), tr.envelope, tr.dt)
    a = emission_spectrum(tr, 12.0)
    b = emission_spectrum(rev, 12.0)
    assert np.allclose(a.intensity, b.intensity, rtol=1e-9, atol=1e-14)


def test_nyquist_rejected():
    tr = classical_current(make(), PulseShape("cos2", 3.0, 8.0, 64))
    with pytest.raises(ValueError, match="Nyquist"):
        emission_spectrum(tr, 40.0)


def test_coupling_invariance():
    pulse = PulseShape()
    a = compare_backends(make(mu=1.0), pulse)
    b = compare_backends(make(mu=37.0), pulse)
    for x, y in zip(a, b):
        assert x.delta_db == pytest.approx(y.delta_db, abs=1e-9)


def test_resolution_convergence():
    p = make()
    peaks = []
    for spc in (256, 512):
        s = emission_spectrum(classical_current(p, PulseShape("cos2", 3.0, 8.0, spc)), 11.0)
        peaks.append([find_peak(s.omega_over_wl, s.intensity, m) for m in (3, 5, 7, 9)])
    assert np.all(np.abs(10 * np.log10(np.array(peaks[1]) / np.array(peaks[0]))) < 0.1)


@pytest.mark.parametrize("env", ["flat", "cos2", "gaussian"])
def test_even_suppression(env):
    s = emission_spectrum(classical_current(make(), PulseShape(env, 3.0, 8.0 if env != "flat" else 64.0)), 11.0)
    om, i = s.omega_over_wl, s.intensity
    for even in (2, 4, 6, 8):
        level = i[np.argmin(np.abs(om - even))]
        near = max(find_peak(om, i, even - 1) or 0, find_peak(om, i, even + 1) or 0)
        assert level <= 1e-3 * near


def test_flat_cross_backend():
    p = SystemParams.from_ratio(5.7, 1e4, 1.0, 9, t_end=64 * 2 * math.pi)
    rows = compare_backends(p, PulseShape("flat", 3.0, 64.0))
    for r in rows:
        assert r.found
        assert abs(r.delta_db) <= 0.5
