"""Semiclassical single-band current baseline.

This is the intraband limit of the semiconductor Maxwell-Bloch picture, not the
full multi-band solver: electrons in the cosine band follow the acceleration
theorem, kappa(tau) = (omega_B/omega_L) g(tau) cos(tau), and the current is the
group velocity sin(kappa). Interband polarization, dephasing and population
dynamics are deliberately absent. The radiated spectrum is |Omega j(Omega)|^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import SpectrumSeries, harmonic_amplitude
from .params import ENVELOPES, ParameterError, SystemParams

PEAK_HALFWIDTH = 0.4
ZERO_PAD = 16
# relative to the strongest odd peak
NOISE_FLOOR = 1e-14


@dataclass(frozen=True)
class PulseShape:
    """Field envelope g(tau) centred in a window of ``total_cycles`` optical cycles.

    ``fwhm_cycles`` is the full width at half maximum of the field amplitude;
    the cos^2 envelope then has compact support of exactly 2 * fwhm_cycles.
    The flat envelope ignores ``fwhm_cycles`` and fills the whole window.
    """

    envelope: str = "cos2"
    fwhm_cycles: float = 3.0
    total_cycles: float = 8.0
    samples_per_cycle: int = 256

    def __post_init__(self):
        if self.envelope not in ENVELOPES:
            raise ParameterError(f"envelope must be one of {ENVELOPES}")
        if self.envelope != "flat" and self.total_cycles < 2 * self.fwhm_cycles:
            raise ParameterError("total_cycles must be >= 2 * fwhm_cycles")
        n = self.samples_per_cycle
        if n < 64 or n % 64:
            raise ParameterError("samples_per_cycle must be a multiple of 64")
        if not self.fwhm_cycles > 0 or not self.total_cycles > 0:
            raise ParameterError("pulse durations must be positive")

    @property
    def samples(self) -> int:
        return int(round(self.total_cycles * self.samples_per_cycle))

    @property
    def dt(self) -> float:
        return 2 * math.pi / self.samples_per_cycle

    def time(self) -> np.ndarray:
        return np.arange(self.samples) * self.dt

    def envelope_values(self, tau: np.ndarray) -> np.ndarray:
        if self.envelope == "flat":
            return np.ones_like(tau)
        x = tau - math.pi * self.total_cycles
        width = 2 * math.pi * self.fwhm_cycles
        if self.envelope == "cos2":
            return np.where(np.abs(x) < width, np.cos(0.5 * np.pi * x / width) ** 2, 0.0)
        return np.exp(-4.0 * math.log(2.0) * (x / width) ** 2)


@dataclass(frozen=True)
class CurrentTrace:
    time: np.ndarray
    current: np.ndarray
    envelope: str
    dt: float

    def __post_init__(self):
        if self.time.shape != self.current.shape:
            raise ValueError("time and current lengths differ")


def classical_current(params: SystemParams, pulse: PulseShape) -> CurrentTrace:
    """Group-velocity current sin(kappa(tau)) in units of n_E E_g / K_c."""
    tau = pulse.time()
    kappa = params.bloch_ratio * pulse.envelope_values(tau) * np.cos(tau)
    return CurrentTrace(tau, np.sin(kappa), pulse.envelope, pulse.dt)


def odd_peak_norm(omega: np.ndarray, intensity: np.ndarray) -> float:
    top = 0.0
    m = 1
    while m - PEAK_HALFWIDTH <= omega[-1]:
        sel = np.abs(omega - m) <= PEAK_HALFWIDTH
        if np.any(sel):
            top = max(top, float(intensity[sel].max()))
        m += 2
    return top


def emission_spectrum(trace: CurrentTrace, omega_max_over_wl: float,
                      omega_min_over_wl: float = 0.0) -> SpectrumSeries:
    """Radiated intensity |Omega j(Omega)|^2, normalized to the strongest odd peak.

    A Hann window is applied only to flat-envelope traces; pulsed traces are
    already compact. The transform is zero-padded ``ZERO_PAD`` times.
    """
    nyquist = math.pi / trace.dt
    if omega_max_over_wl > nyquist:
        raise ValueError(f"omega_max {omega_max_over_wl} beyond Nyquist limit {nyquist:g}")
    j = trace.current
    if trace.envelope == "flat":
        j = j * np.hanning(j.size)
    npad = ZERO_PAD * j.size
    spec = np.fft.rfft(j, npad) * trace.dt
    omega = 2 * math.pi * np.fft.rfftfreq(npad, d=trace.dt)
    keep = (omega >= omega_min_over_wl) & (omega <= omega_max_over_wl)
    if omega_min_over_wl <= 0.0:
        keep &= omega > 0.0
    omega = omega[keep]
    amplitude = np.abs(omega * spec[keep])
    intensity = amplitude**2
    norm = odd_peak_norm(omega, intensity)
    if norm > 0:
        intensity = intensity / norm
        amplitude = amplitude / math.sqrt(norm)
    duration = trace.time[-1] - trace.time[0] + trace.dt
    return SpectrumSeries(omega, amplitude, intensity, duration)


def analytic_window(pulse: PulseShape) -> float:
    """Hard interaction window handed to the closed-form amplitude.

    The full window for a flat drive, the FWHM duration for a pulse.
    """
    cycles = pulse.total_cycles if pulse.envelope == "flat" else pulse.fwhm_cycles
    return 2 * math.pi * cycles


def find_peak(omega: np.ndarray, intensity: np.ndarray, m: int) -> float | None:
    """Interior maximum of ``intensity`` within +-0.4 of ``m``, or None."""
    idx = np.nonzero(np.abs(omega - m) <= PEAK_HALFWIDTH)[0]
    if idx.size < 3:
        return None
    k = idx[np.argmax(intensity[idx])]
    if k in (idx[0], idx[-1]):
        return None
    return float(intensity[k])


@dataclass(frozen=True)
class PeakComparison:
    harmonic: int
    peak_db_analytic: float
    peak_db_smbe: float
    delta_db: float
    found: bool


def _db(x: float | None, ref: float | None) -> float:
    if x is None or ref is None or x <= 0 or ref <= 0:
        return math.nan
    return 10.0 * math.log10(x / ref)


def compare_backends(params: SystemParams, pulse: PulseShape, harmonics=(3, 5, 7, 9),
                     analytic_samples_per_unit: int = 10000) -> list[PeakComparison]:
    """Odd-peak heights of both backends in dB relative to their own m = 3 peak."""
    omega_max = max(harmonics) + 1.0
    smbe = emission_spectrum(classical_current(params, pulse), omega_max)
    t = params.t_start + analytic_window(pulse)
    floor = NOISE_FLOOR * float(smbe.intensity.max())

    analytic_peaks = {}
    smbe_peaks = {}
    for m in sorted(set(harmonics) | {3}):
        om = np.linspace(m - PEAK_HALFWIDTH, m + PEAK_HALFWIDTH,
                         int(2 * PEAK_HALFWIDTH * analytic_samples_per_unit) + 1)
        analytic_peaks[m] = find_peak(om, harmonic_amplitude(params, om, t) ** 2, m)
        pk = find_peak(smbe.omega_over_wl, smbe.intensity, m)
        smbe_peaks[m] = pk if pk is not None and pk > floor else None

    rows = []
    for m in harmonics:
        a = _db(analytic_peaks[m], analytic_peaks[3])
        s = _db(smbe_peaks[m], smbe_peaks[3])
        found = not (math.isnan(a) or math.isnan(s))
        rows.append(PeakComparison(m, a, s, a - s if found else math.nan, found))
    return rows
