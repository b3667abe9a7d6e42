"""Independent reference computations. None of these call the closed forms they check."""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np
from scipy import integrate
from scipy.special import jv

SQRT2 = math.sqrt(2.0)


def bessel_series(order: int, x: float, dps: int = 60) -> float:
    """J_order(x) from its power series in extended precision."""
    with mp.workdps(dps):
        x = mp.mpf(x)
        half = x / 2
        term = half**order / mp.factorial(order)
        total = term
        k = 0
        while True:
            k += 1
            term *= -(half**2) / (k * (k + order))
            total += term
            if abs(term) < mp.mpf(10) ** (-dps + 5) * max(abs(total), mp.mpf(10) ** -300) and k > half:
                break
        return float(total)


def first_zero_j0(lo: float = 2.0, hi: float = 3.0) -> float:
    """Bisection on the power series."""
    f = lambda x: bessel_series(0, x)  # noqa: E731
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-16:
            break
    return 0.5 * (lo + hi)


def quad_cos_exp(m: float, j: float, t0: float, t: float) -> complex:
    """int cos(m tau) exp(i j tau) by adaptive QAWO quadrature."""
    if t == t0:
        return 0j
    g = lambda tau: math.cos(m * tau)  # noqa: E731
    opts = dict(epsabs=1e-15, epsrel=1e-13, limit=2000)
    re, _ = integrate.quad(g, t0, t, weight="cos", wvar=j, **opts)
    im, _ = integrate.quad(g, t0, t, weight="sin", wvar=j, **opts)
    return complex(re, im)


def mp_cos_exp(m: float, j: float, t0: float, t: float, dps: int = 30) -> complex:
    """Same integral by mpmath quadrature, one panel per oscillation, ``dps`` digits.

    QUADPACK is limited to ~1e-11 absolute by double-precision cancellation on
    long windows; this is the referee for values smaller than that allows.
    """
    with mp.workdps(dps):
        mm, jj = mp.mpf(m), mp.mpf(j)
        panels = max(2, int((t - t0) * (abs(m) + abs(j)) / (2 * math.pi)) + 1)
        f = lambda x: mp.cos(mm * x) * mp.expj(jj * x)  # noqa: E731
        return complex(mp.quad(f, mp.linspace(mp.mpf(t0), mp.mpf(t), panels + 1)))


def cubature_double(n: int, m: int, j: float, t0: float, t: float) -> float:
    """2-D adaptive cubature of cos((2n-1)tau) cos((2m-1)tau') sin(j(tau'-tau))."""
    a, b = 2 * n - 1, 2 * m - 1
    length = t - t0

    def f(x):
        return np.cos(a * x[:, 0]) * np.cos(b * x[:, 1]) * np.sin(j * (x[:, 1] - x[:, 0]))

    res = integrate.cubature(f, [t0, t0], [t, t], rule="gk21", rtol=1e-10,
                             atol=1e-12 * length * length, max_subdivisions=200000)
    return float(res.estimate)


def gauss_legendre_double(n: int, m: int, j: float, t0: float, t: float, panels: int = 16,
                          order: int = 40) -> float:
    """Composite tensor Gauss-Legendre rule on [t0, t]^2."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(t0, t, panels + 1)
    nodes = np.concatenate([0.5 * (b - a) * x + 0.5 * (a + b) for a, b in zip(edges[:-1], edges[1:])])
    weights = np.concatenate([0.5 * (b - a) * w for a, b in zip(edges[:-1], edges[1:])])
    tau, taup = np.meshgrid(nodes, nodes, indexing="ij")
    vals = np.cos((2 * n - 1) * tau) * np.cos((2 * m - 1) * taup) * np.sin(j * (taup - tau))
    return float(weights @ vals @ weights)


def phase_f_quadrature(mu: float, gamma_l: float, gammas: dict, q: float, t0: float, t: float) -> float:
    """f from the un-expanded integrands.

    The secular and even-Bessel terms come from cos(x cos tau) - 1; the odd
    double sum collapses to sin(x cos tau) sin(x cos tau') / 4.
    """
    x = gamma_l * q
    opts = dict(epsabs=1e-14, epsrel=1e-13, limit=2000)
    single, _ = integrate.quad(lambda tau: math.cos(x * math.cos(tau)) - 1.0, t0, t, **opts)
    value = mu * single
    for j, g in gammas.items():
        def f(arr, j=j):
            tau, taup = arr[:, 0], arr[:, 1]
            return np.sin(x * np.cos(tau)) * np.sin(x * np.cos(taup)) * np.sin(j * (taup - tau))
        res = integrate.cubature(f, [t0, t0], [t, t], rule="gk21", rtol=1e-10, atol=1e-14)
        value += 2.0 * mu**2 * g**2 * res.estimate / 4.0
    return value


def alpha_quadrature(mu: float, gamma_j: float, gamma_l: float, j: float, q: float,
                     t0: float, t: float) -> complex:
    """alpha_j from sum_n (-1)^n J_{2n-1}(x) cos((2n-1) tau) = -sin(x cos tau) / 2."""
    x = gamma_l * q
    g = lambda tau: math.sin(x * math.cos(tau))  # noqa: E731
    opts = dict(epsabs=1e-15, epsrel=1e-13, limit=2000)
    re, _ = integrate.quad(g, t0, t, weight="cos", wvar=j, **opts)
    im, _ = integrate.quad(g, t0, t, weight="sin", wvar=j, **opts)
    return -1j * mu * gamma_j / SQRT2 * complex(re, im)


def amplitude_fraction_form(mu: float, b: float, omega: float, t: float, mmax: int = 61) -> float:
    """Harmonic amplitude with the explicit fraction and its resonance limit, scipy Bessel."""
    total = 0.0
    for m in range(3, mmax + 1, 2):
        den = omega**2 - m**2
        if abs(omega - m) < 1e-12:
            frac = (math.sin(2 * m * t) / 2 + m * t) / (2 * m)
        else:
            frac = (omega * math.sin(omega * t) * math.cos(m * t)
                    - m * math.cos(omega * t) * math.sin(m * t)) / den
        total += jv(m, b) * frac
    return mu * omega * total


def jacobi_anger_sin_cos(x: float, tau: np.ndarray, nmax: int = 80) -> np.ndarray:
    """sin(x cos tau) as -2 sum_n (-1)^n J_{2n-1}(x) cos((2n-1) tau), scipy Bessel."""
    out = np.zeros_like(tau)
    for n in range(1, nmax + 1):
        out += -2.0 * (-1) ** n * jv(2 * n - 1, x) * np.cos((2 * n - 1) * tau)
    return out


def coherent_wavefunction(alpha: np.ndarray, q: np.ndarray) -> np.ndarray:
    """<q|alpha> = pi^{-1/4} exp(-(alpha^2 + |alpha|^2)/2 + sqrt(2) alpha q - q^2/2).

    ``alpha`` broadcasts against ``q``.
    """
    return np.pi ** -0.25 * np.exp(-0.5 * (alpha**2 + np.abs(alpha) ** 2) + SQRT2 * alpha * q - 0.5 * q**2)


class DenseTwoMode:
    """Full (Q_L, Q_2) wavefunction on a tensor grid and its explicit partial trace."""

    def __init__(self, q_l: np.ndarray, psi0: np.ndarray, f: np.ndarray, alpha2: np.ndarray,
                 q2: np.ndarray):
        self.q_l = q_l
        self.q2 = q2
        self.w_l = q_l[1] - q_l[0]
        self.w_2 = q2[1] - q2[0]
        amp = np.exp(1j * f) * psi0
        self.psi = amp[:, None] * coherent_wavefunction(alpha2[:, None], q2[None, :])
        self.psi_g0 = psi0[:, None] * coherent_wavefunction(np.zeros(1)[:, None], q2[None, :])

    def overlap_g0(self) -> complex:
        return complex(np.sum(self.psi_g0.conj() * self.psi) * self.w_l * self.w_2)

    def conditioned(self) -> "np.ndarray":
        return self.psi - self.overlap_g0() * self.psi_g0

    def rho_laser(self, psi: np.ndarray | None = None) -> np.ndarray:
        psi = self.psi if psi is None else psi
        return (psi * self.w_2) @ psi.conj().T

    def weighted(self, kernel: np.ndarray) -> np.ndarray:
        return kernel * self.w_l

    def trace(self, kernel: np.ndarray) -> float:
        return float(np.real(np.trace(kernel)) * self.w_l)

    def purity(self, kernel: np.ndarray) -> float:
        m = self.weighted(kernel)
        return float(np.sum(np.abs(m) ** 2)) / self.trace(kernel) ** 2

    def entropy(self, kernel: np.ndarray) -> float:
        lam = np.linalg.eigvalsh(self.weighted(kernel)) / self.trace(kernel)
        lam = lam[lam > 1e-14]
        return float(-np.sum(lam * np.log(lam)))

    def mean_photons(self) -> float:
        """<a^dag a> = || (q + d/dq) psi ||^2 / 2 with a spectral derivative along Q_2."""
        k = 2 * np.pi * np.fft.fftfreq(self.q2.size, d=self.w_2)
        dpsi = np.fft.ifft(1j * k[None, :] * np.fft.fft(self.psi, axis=1), axis=1)
        a_psi = (self.q2[None, :] * self.psi + dpsi) / SQRT2
        return float(np.sum(np.abs(a_psi) ** 2) * self.w_l * self.w_2)
