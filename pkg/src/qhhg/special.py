"""Bessel functions and closed-form oscillatory time integrals.

All frequencies are in units of omega_L. The integrals are written through

    int_{t0}^{t} exp(i d tau) dtau = exp(i d (t + t0)/2) (t - t0) sinc(d (t - t0)/2),

which has no cancellation as the detuning ``d`` approaches zero, so the
resonant branch only differs from the generic one by a flag and a Taylor form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_ORDER = 200
MAX_ARG = 500.0
RESONANCE_THRESHOLD = 1e-8
TAIL_TOLERANCE = 1e-16

_RESCALE_AT = 1e200
# below this the two-term power series is exact in double precision
_SERIES_BELOW = 1e-20


class BesselDomainError(ValueError):
    pass


def _miller_start(nmax: int, xmax: float) -> int:
    # Start well above both the requested order and the turning point n ~ x.
    top = max(nmax, xmax)
    start = int(top + 30 + 4.0 * math.sqrt(top + 1.0) + 2.0 * xmax ** (1.0 / 3.0))
    return start + (start % 2)


def bessel_j_table(nmax: int, x) -> np.ndarray:
    """J_0 .. J_nmax at every point of ``x``; shape ``(nmax + 1,) + x.shape``.

    Miller's backward recurrence, normalized by J_0 + 2 sum_k J_2k = 1, with
    rescaling against overflow. Stable for every (order, x) in range.
    """
    if nmax < 0:
        raise BesselDomainError("order must be non-negative")
    x = np.asarray(x, dtype=float)
    if nmax > MAX_ORDER:
        raise BesselDomainError(f"order {nmax} exceeds {MAX_ORDER}")
    if x.size and np.max(np.abs(x)) > MAX_ARG:
        raise BesselDomainError(f"|x| exceeds {MAX_ARG}")

    shape = x.shape
    ax = np.abs(x).ravel()
    out = np.zeros((nmax + 1, ax.size))
    zero = ax == 0.0
    out[0, zero] = 1.0
    tiny = ~zero & (ax < _SERIES_BELOW)
    if np.any(tiny):
        h = 0.5 * ax[tiny]
        for k in range(nmax + 1):
            out[k, tiny] = h**k / math.factorial(k) * (1.0 - h * h / (k + 1))
    live = ~zero & ~tiny
    if np.any(live):
        xs = ax[live]
        start = _miller_start(nmax, float(xs.max()))
        two_over_x = 2.0 / xs
        vals = np.zeros((nmax + 1, xs.size))
        j_next = np.zeros_like(xs)
        j_cur = np.ones_like(xs)
        norm = np.zeros_like(xs)
        for k in range(start, 0, -1):
            # j_cur holds J_k, j_next holds J_{k+1}
            if k <= nmax:
                vals[k] = j_cur
            if k % 2 == 0:
                norm += 2.0 * j_cur
            j_prev = k * two_over_x * j_cur - j_next
            j_next, j_cur = j_cur, j_prev
            big = np.abs(j_cur) > _RESCALE_AT
            if np.any(big):
                s = np.where(big, 1.0 / _RESCALE_AT, 1.0)
                j_cur *= s
                j_next *= s
                norm *= s
                vals *= s
        vals[0] = j_cur
        norm += j_cur
        out[:, live] = vals / norm

    neg = (x.ravel() < 0)
    if np.any(neg):
        odd = np.arange(nmax + 1) % 2 == 1
        out[np.ix_(odd, neg)] *= -1.0
    return out.reshape((nmax + 1,) + shape)


def bessel_j(order: int, x):
    """Bessel function of the first kind J_order(x) for integer order >= 0."""
    if order < 0 or int(order) != order:
        raise BesselDomainError("order must be a non-negative integer")
    vals = bessel_j_table(int(order), x)[int(order)]
    return float(vals) if np.ndim(vals) == 0 else vals


def bessel_j_derivative_table(nmax: int, x) -> np.ndarray:
    """J'_0 .. J'_nmax via J'_k = (J_{k-1} - J_{k+1}) / 2 and J'_0 = -J_1."""
    table = bessel_j_table(nmax + 1, x)
    d = np.empty_like(table[:-1])
    d[0] = -table[1]
    d[1:] = 0.5 * (table[:-2] - table[2:])
    return d


def truncation_order(x: float) -> int:
    """Highest Bessel order worth keeping in a Jacobi-Anger sum at argument x.

    Every order above the returned value satisfies |J_n(x)| < 1e-16 max_k |J_k(x)|.
    """
    x = abs(float(x))
    if x > MAX_ARG:
        raise BesselDomainError(f"|x| exceeds {MAX_ARG}")
    floor = math.ceil(x) + 30
    probe = min(MAX_ORDER, floor + 40)
    table = np.abs(bessel_j_table(probe, x))
    significant = np.nonzero(table >= TAIL_TOLERANCE * table.max())[0]
    return int(min(MAX_ORDER - 1, max(floor, significant[-1])))


@dataclass(frozen=True)
class ResonantIntegral:
    value: complex
    is_resonant: bool
    detuning: float


def exp_integral(d, t0: float, t: float):
    """int_{t0}^{t} exp(i d tau) dtau, vectorized over the detuning ``d``."""
    d = np.asarray(d, dtype=float)
    length = t - t0
    mid = 0.5 * (t + t0)
    half = 0.5 * d * length
    # np.sinc is sin(pi x)/(pi x)
    generic = np.exp(1j * d * mid) * length * np.sinc(half / np.pi)
    taylor = length * (1.0 + 1j * d * mid)
    return np.where(np.abs(d) < RESONANCE_THRESHOLD, taylor, generic)


def cos_exp_array(m, omega, t0: float, t: float):
    """int_{t0}^{t} cos(m tau) exp(i omega tau) dtau, broadcasting over m and omega."""
    m = np.asarray(m, dtype=float)
    omega = np.asarray(omega, dtype=float)
    return 0.5 * (exp_integral(omega + m, t0, t) + exp_integral(omega - m, t0, t))


def cos_exp_integral(m: float, j: float, t0: float, t: float) -> ResonantIntegral:
    """Drive harmonic ``m`` integrated against mode ``j``'s carrier exp(i j tau).

    ``j`` may be any real frequency; ``detuning`` is j - m.
    """
    if t < t0:
        raise ValueError("t must be >= t0")
    detuning = float(j) - float(m)
    value = complex(cos_exp_array(m, j, t0, t))
    return ResonantIntegral(value, abs(detuning) < RESONANCE_THRESHOLD, detuning)


def double_time_integral(n: int, m: int, j: float, t0: float, t: float) -> float:
    """int int cos((2n-1) tau) cos((2m-1) tau') sin(j (tau' - tau)) over [t0, t]^2.

    The kernel factorizes as sin(j tau') cos(j tau) - cos(j tau') sin(j tau), so
    with E_k = int cos(k tau) exp(i j tau) the value is Im(conj(E_a) E_b).
    """
    a = cos_exp_array(2 * n - 1, j, t0, t)
    b = cos_exp_array(2 * m - 1, j, t0, t)
    return float(np.imag(np.conj(a) * b))


def double_time_matrix(nterms: int, j: float, t0: float, t: float) -> np.ndarray:
    """All ``double_time_integral(n, m, j, t0, t)`` for n, m = 1..nterms."""
    e = cos_exp_array(2 * np.arange(1, nterms + 1) - 1, j, t0, t)
    return np.imag(np.conj(e)[:, None] * e[None, :])


def cos_integral(k, t0: float, t: float):
    """int_{t0}^{t} cos(k tau) dtau for integer k (k = 0 allowed)."""
    return np.real(exp_integral(k, t0, t))
