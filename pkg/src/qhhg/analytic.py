"""Closed-form post-interaction field: phase f(t; Q_L), displacements alpha_j(t; Q_L),
and the classical-limit harmonic amplitude with its spectra and intensity scans.

Everything here takes ``q_l`` as a scalar or an array of pump position-quadrature
values; the Bessel argument is always gamma_L * q_l. Replacing q_l by <Q_L> =
sqrt(2 N0) gives the classical limit, where the argument is the Bloch ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import LaserInput, MaterialInput, SimulationConfig, SystemParams, build_params
from .special import (
    bessel_j_derivative_table,
    bessel_j_table,
    cos_exp_array,
    cos_integral,
    double_time_matrix,
    truncation_order,
)

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class PhaseAndDisplacements:
    q_l: float
    f_value: float
    alpha: dict[int, complex]
    t: float


@dataclass(frozen=True)
class SpectrumSeries:
    omega_over_wl: np.ndarray
    amplitude: np.ndarray
    intensity: np.ndarray
    t_interaction: float

    def __post_init__(self):
        if np.any(np.diff(self.omega_over_wl) <= 0):
            raise ValueError("frequency grid must be strictly increasing")


def _signs(nterms: int) -> np.ndarray:
    n = np.arange(1, nterms + 1)
    return np.where(n % 2 == 0, 1.0, -1.0)


def phase_f(params: SystemParams, q_l, t: float):
    """Pump-mode phase f(t; Q_L), real.

    Sum of the secular J_0 term, the even-Bessel oscillation, and the
    mu^2 gamma_j^2 double-sum over the full square [t0, t]^2.
    """
    q = np.asarray(q_l, dtype=float)
    t0 = params.t_start
    mu = params.coupling_strength
    if mu == 0.0 or t == t0:
        return np.zeros_like(q) if q.ndim else 0.0
    x = params.gamma_l * q
    nmax = truncation_order(float(np.max(np.abs(x))))
    table = bessel_j_table(nmax + 1, x)

    value = mu * (table[0] - 1.0) * (t - t0)

    even_orders = np.arange(2, nmax + 1, 2)
    n = even_orders // 2
    w = np.where(n % 2 == 0, 1.0, -1.0) * cos_integral(even_orders, t0, t)
    value = value + 2.0 * mu * np.tensordot(w, table[even_orders], axes=1)

    nterms = (nmax + 1) // 2
    odd = table[1: 2 * nterms: 2]
    u = _signs(nterms).reshape((-1,) + (1,) * q.ndim) * odd
    for j, g in params.gamma.items():
        d = double_time_matrix(nterms, j, t0, t)
        value = value + 2.0 * mu**2 * g**2 * np.einsum("n...,nm,m...->...", u, d, u)
    return float(value) if q.ndim == 0 else value


def _alpha_weights(params: SystemParams, nterms: int, t: float) -> np.ndarray:
    """c[j, n] so that alpha_j = sum_n c[j, n] J_{2n-1}(gamma_L q)."""
    orders = 2 * np.arange(1, nterms + 1) - 1
    js = np.array(params.harmonics, dtype=float)
    integrals = cos_exp_array(orders[None, :], js[:, None], params.t_start, t)
    gam = np.array([params.gamma[j] for j in params.harmonics])
    return (1j * SQRT2 * params.coupling_strength * gam[:, None]
            * _signs(nterms)[None, :] * integrals)


def displacement_alpha(params: SystemParams, q_l, t: float) -> np.ndarray:
    """Coherent displacements alpha_j(t; Q_L) for j = 2..M.

    Returns shape ``(M - 1,)`` for scalar ``q_l``, else ``q_l.shape + (M - 1,)``.
    """
    q = np.asarray(q_l, dtype=float)
    x = params.gamma_l * q
    nmax = truncation_order(float(np.max(np.abs(x))))
    nterms = (nmax + 1) // 2
    table = bessel_j_table(2 * nterms - 1, x)
    odd = table[1::2]
    c = _alpha_weights(params, nterms, t)
    return np.moveaxis(np.tensordot(c, odd, axes=([1], [0])), 0, -1)


def phase_and_displacements(params: SystemParams, q_l: float, t: float) -> PhaseAndDisplacements:
    alpha = displacement_alpha(params, q_l, t)
    return PhaseAndDisplacements(
        q_l=float(q_l),
        f_value=float(phase_f(params, q_l, t)),
        alpha={j: complex(a) for j, a in zip(params.harmonics, alpha)},
        t=t,
    )


def linearized_coupling(params: SystemParams, t: float) -> dict[int, complex]:
    """Coefficients delta_j of Q_L Q_j in the state exponent, linearized at <Q_L>.

    delta_j = d/dQ_L [sqrt(2) alpha_j(t; Q_L)] at Q_L = sqrt(2 N0), so that
    exp(sqrt(2) alpha_j Q_j) ~ exp(delta_j Q_L Q_j) up to Q_L-independent factors.
    The real part is the position-space coupling; at whole optical cycles the
    displacements are purely imaginary and only the imaginary part survives.
    Uses J'_k = (J_{k-1} - J_{k+1})/2, no finite differencing.
    """
    x = params.bloch_ratio
    nmax = truncation_order(x)
    nterms = (nmax + 1) // 2
    dtable = bessel_j_derivative_table(2 * nterms - 1, x)
    c = _alpha_weights(params, nterms, t)
    dalpha = params.gamma_l * (c @ dtable[1::2])
    return {j: complex(SQRT2 * d) for j, d in zip(params.harmonics, dalpha)}


def cos_cos_integral(omega, m, t0: float, t: float):
    """int_{t0}^{t} cos(m tau) cos(Omega tau) dtau.

    Equal to [Omega sin(Omega tau) cos(m tau) - m cos(Omega tau) sin(m tau)] /
    (Omega^2 - m^2) between the bounds, and to its limit at Omega = m, but
    evaluated without the 0/0 cancellation near resonance.
    """
    return np.real(cos_exp_array(m, omega, t0, t))


def harmonic_amplitude(params: SystemParams, omega_over_wl, t: float | None = None):
    """Classical-limit emitted amplitude E_Omega at Bloch ratio omega_B/omega_L.

    mu * Omega * sum over odd m >= 3 of J_m(omega_B/omega_L) times the
    cos(m tau) cos(Omega tau) window integral. ``t`` defaults to ``params.t_end``.
    """
    t = params.t_end if t is None else t
    omega = np.asarray(omega_over_wl, dtype=float)
    b = params.bloch_ratio
    nmax = truncation_order(b)
    orders = np.arange(3, nmax + 1, 2)
    jm = bessel_j_table(nmax, b)[orders]
    window = cos_cos_integral(omega[..., None], orders, params.t_start, t)
    amp = params.coupling_strength * omega * (window @ jm)
    return float(amp) if omega.ndim == 0 else amp


def spectrum(params: SystemParams, omega_min: float, omega_max: float, samples: int,
             t: float | None = None) -> SpectrumSeries:
    if not omega_min < omega_max:
        raise ValueError("omega_min must be < omega_max")
    if samples < 2:
        raise ValueError("samples must be >= 2")
    t = params.t_end if t is None else t
    omega = np.linspace(omega_min, omega_max, samples)
    amp = harmonic_amplitude(params, omega, t)
    return SpectrumSeries(omega, amp, amp**2, t - params.t_start)


def intensity_scan(laser_template: LaserInput, material: MaterialInput, harmonic: int,
                   i0_grid, sim: SimulationConfig | None = None) -> list[tuple[float, float]]:
    """|E_Omega|^2 at Omega = harmonic * omega_L for each peak intensity in ``i0_grid``."""
    if harmonic < 3 or harmonic % 2 == 0:
        raise ValueError("harmonic must be an odd integer >= 3")
    i0 = np.asarray(i0_grid, dtype=float)
    if np.any(i0 < 0) or np.any(np.diff(i0) <= 0):
        raise ValueError("intensity grid must be non-negative and ascending")
    sim = sim or SimulationConfig()
    out = []
    for intensity in i0:
        laser = LaserInput(
            wavelength_um=laser_template.wavelength_um,
            peak_intensity_w_cm2=float(intensity),
            mean_photon_number=laser_template.mean_photon_number,
            pulse_fwhm_cycles=laser_template.pulse_fwhm_cycles,
        )
        params = build_params(laser, material, sim)
        out.append((float(intensity), float(harmonic_amplitude(params, float(harmonic)) ** 2)))
    return out
