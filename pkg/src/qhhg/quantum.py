"""Post-interaction multimode field on a pump-quadrature grid.

Given the pump position quadrature Q_L, every harmonic mode is in a coherent
state |alpha_j(Q_L)> and the pump carries the phase exp(i f(Q_L)). Reduced
quantities are therefore one-dimensional integrals over Q_L (or kernels over
Q_L x Q_L'); the full M-mode wavefunction is never built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .analytic import displacement_alpha, phase_f
from .params import ParameterError, RegimeError, SystemParams

SIGMA = 1.0 / math.sqrt(2.0)
MIN_HALFWIDTH_SIGMAS = 5.0
EIG_CUTOFF = 1e-14
DRIFT_REGIME_LIMIT = 0.01


class EigensolverError(RuntimeError):
    pass


class NoGenerationError(RegimeError):
    """The state has (numerically) no component outside |G0>."""


@dataclass(frozen=True)
class QuadratureGrid:
    center: float
    halfwidth_sigmas: float = 8.0
    points: int = 2048

    def __post_init__(self):
        if self.points < 3:
            raise ParameterError("grid needs at least 3 points")
        if not self.halfwidth_sigmas > 0:
            raise ParameterError("grid halfwidth must be positive")

    @classmethod
    def for_params(cls, params: SystemParams, halfwidth_sigmas: float = 8.0,
                   points: int = 2048) -> "QuadratureGrid":
        return cls(params.q_center, halfwidth_sigmas, points)

    @property
    def nodes(self) -> np.ndarray:
        h = self.halfwidth_sigmas * SIGMA
        return np.linspace(self.center - h, self.center + h, self.points)

    @property
    def weight(self) -> float:
        return 2.0 * self.halfwidth_sigmas * SIGMA / (self.points - 1)

    def psi0(self) -> np.ndarray:
        """Real coherent-state amplitude pi^{-1/4} exp(-(Q - center)^2 / 2)."""
        return np.pi ** -0.25 * np.exp(-0.5 * (self.nodes - self.center) ** 2)


@dataclass(frozen=True)
class QuadratureState:
    grid: QuadratureGrid
    psi0: np.ndarray
    f: np.ndarray
    alpha: np.ndarray
    harmonics: tuple[int, ...]
    t: float

    def __post_init__(self):
        if not np.all(np.isfinite(self.alpha)):
            raise ValueError("displacements must be finite")
        if self.alpha.shape != (self.grid.points, len(self.harmonics)):
            raise ValueError("alpha must have shape (points, number of harmonics)")

    @property
    def density(self) -> np.ndarray:
        """|psi0(Q)|^2 * weight per node."""
        return self.psi0**2 * self.grid.weight

    def column(self, j: int) -> np.ndarray:
        try:
            return self.alpha[:, self.harmonics.index(j)]
        except ValueError:
            raise ParameterError(f"harmonic {j} not in state (have {self.harmonics})") from None

    def norm(self) -> float:
        return float(np.sum(self.density))


@dataclass(frozen=True)
class ReducedDensityMatrix:
    mode: str
    kernel: np.ndarray
    weights: np.ndarray

    def matrix(self) -> np.ndarray:
        """sqrt(w) K sqrt(w): the operator whose spectrum is that of the kernel."""
        s = np.sqrt(self.weights)
        return s[:, None] * self.kernel * s[None, :]

    def trace(self) -> float:
        return float(np.real(np.sum(np.diag(self.kernel) * self.weights)))

    def purity(self) -> float:
        m = self.matrix()
        return float(np.sum(np.abs(m) ** 2)) / self.trace() ** 2

    def eigenvalues(self) -> np.ndarray:
        try:
            return np.linalg.eigvalsh(self.matrix())
        except np.linalg.LinAlgError as exc:
            raise EigensolverError(f"eigendecomposition of {self.mode} kernel failed") from exc

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.kernel - self.kernel.conj().T)))


def coherent_overlap(alpha, beta):
    """<beta|alpha> for coherent states, broadcasting."""
    return np.exp(-0.5 * np.abs(alpha) ** 2 - 0.5 * np.abs(beta) ** 2 + np.conj(beta) * alpha)


def build_state(params: SystemParams, grid: QuadratureGrid | None = None,
                t: float | None = None) -> QuadratureState:
    grid = grid or QuadratureGrid.for_params(params)
    if grid.halfwidth_sigmas < MIN_HALFWIDTH_SIGMAS:
        raise ParameterError(
            f"grid halfwidth {grid.halfwidth_sigmas} sigma < {MIN_HALFWIDTH_SIGMAS}; "
            "the Gaussian would be truncated"
        )
    t = params.t_end if t is None else t
    q = grid.nodes
    return QuadratureState(
        grid=grid,
        psi0=grid.psi0(),
        f=np.asarray(phase_f(params, q, t)),
        alpha=np.asarray(displacement_alpha(params, q, t)),
        harmonics=tuple(params.harmonics),
        t=t,
    )


def linearized_state(grid: QuadratureGrid, deltas: dict[int, complex], t: float = 0.0) -> QuadratureState:
    """State G0 exp(sum_j delta_j Q_L Q_j), normalized per Q_L: alpha_j = delta_j Q_L / sqrt(2)."""
    harmonics = tuple(sorted(deltas))
    q = grid.nodes
    alpha = np.stack([deltas[j] * q / math.sqrt(2.0) for j in harmonics], axis=1).astype(complex)
    return QuadratureState(grid, grid.psi0(), np.zeros_like(q), alpha, harmonics, t)


def qlaser_marginal(state: QuadratureState) -> np.ndarray:
    """Q_L probability per node of the evolved state, before simplification.

    |exp(i f) psi0|^2 times the norm <alpha_j|alpha_j> of every harmonic factor.
    """
    amp = np.exp(1j * state.f) * state.psi0
    norms = np.prod(np.real(coherent_overlap(state.alpha, state.alpha)), axis=1)
    return np.abs(amp) ** 2 * norms * state.grid.weight


def expectation_qfunc(state: QuadratureState, g: Callable[[np.ndarray], np.ndarray]) -> float:
    """<g(Q_L)> in the evolved state."""
    return float(np.sum(g(state.grid.nodes) * qlaser_marginal(state)))


def expectation_qfunc_initial(state: QuadratureState, g: Callable[[np.ndarray], np.ndarray]) -> float:
    """<g(Q_L)> in the initial coherent state on the same grid."""
    return float(np.sum(g(state.grid.nodes) * state.density))


def momentum_drift_formula(params: SystemParams, t: float) -> float:
    """Lowest-order pump momentum drift -mu (omega_B/omega_L)^2 t / (2 sqrt(2 N0))."""
    return -0.5 * params.coupling_strength * params.bloch_ratio**2 * (t - params.t_start) / params.q_center


def quadratic_band_phase(params: SystemParams, q, t: float):
    """Phase for E_c ~ E_g K^2 / (2 K_c^2): -mu gamma_L^2 Q^2 / 2 * int cos^2."""
    t0 = params.t_start
    cos2 = 0.5 * (t - t0) + 0.25 * (math.sin(2 * t) - math.sin(2 * t0))
    return -0.5 * params.coupling_strength * params.gamma_l**2 * np.asarray(q) ** 2 * cos2


@dataclass(frozen=True)
class MomentumDrift:
    formula: float
    grid: float
    regime_parameter: float


def momentum_drift(params: SystemParams, t: float, grid: QuadratureGrid | None = None) -> MomentumDrift:
    """<P_L> after time t, closed form and on the grid with psi = exp(i f) psi0.

    The grid value applies P = -i d/dQ by second-order finite differences to the
    quadratic-band-limit state. Raises RegimeError outside the weak-drift regime.
    """
    regime = abs(params.coupling_strength) * params.bloch_ratio**2 * (t - params.t_start) / params.q_center
    if regime >= DRIFT_REGIME_LIMIT:
        raise RegimeError(
            f"mu (omega_B/omega_L)^2 t / sqrt(2 N0) = {regime:.3g} >= {DRIFT_REGIME_LIMIT}; "
            "lowest-order drift does not apply"
        )
    grid = grid or QuadratureGrid.for_params(params)
    q = grid.nodes
    psi = np.exp(1j * quadratic_band_phase(params, q, t)) * grid.psi0()
    dpsi = np.gradient(psi, grid.weight, edge_order=2)
    p_mean = float(np.real(np.sum(np.conj(psi) * (-1j) * dpsi) * grid.weight))
    return MomentumDrift(momentum_drift_formula(params, t), p_mean, regime)


def harmonic_mean_photons(state: QuadratureState, j: int) -> float:
    """<N_j> = int |psi0|^2 |alpha_j(Q)|^2 dQ."""
    return float(np.sum(state.density * np.abs(state.column(j)) ** 2))


def _harmonic_overlap_matrix(alpha: np.ndarray) -> np.ndarray:
    """prod_j <alpha_j(Q')|alpha_j(Q)> as a (Q, Q') matrix."""
    sq = np.sum(np.abs(alpha) ** 2, axis=1)
    return np.exp(-0.5 * (sq[:, None] + sq[None, :]) + alpha @ alpha.conj().T)


def _hermitize(k: np.ndarray) -> np.ndarray:
    return 0.5 * (k + k.conj().T)


def reduced_density_laser(state: QuadratureState) -> ReducedDensityMatrix:
    amp = np.exp(1j * state.f) * state.psi0
    kernel = amp[:, None] * amp.conj()[None, :] * _harmonic_overlap_matrix(state.alpha)
    weights = np.full(state.grid.points, state.grid.weight)
    return ReducedDensityMatrix("L", _hermitize(kernel), weights)


def entanglement_entropy(rho: ReducedDensityMatrix) -> float:
    """Von Neumann entropy in nats of the trace-normalized kernel."""
    lam = rho.eigenvalues() / rho.trace()
    lam = lam[lam > EIG_CUTOFF]
    return float(max(0.0, -np.sum(lam * np.log(lam))))


def vacuum_amplitude(state: QuadratureState) -> np.ndarray:
    """prod_j <0|alpha_j(Q)> per node."""
    return np.exp(-0.5 * np.sum(np.abs(state.alpha) ** 2, axis=1))


def conditioned_state_overlap(state: QuadratureState) -> complex:
    """c = <G0|G> = int |psi0|^2 exp(i f) prod_j exp(-|alpha_j|^2 / 2) dQ."""
    return complex(np.sum(state.density * np.exp(1j * state.f) * vacuum_amplitude(state)))


@dataclass(frozen=True)
class ConditionedResult:
    norm_squared: float
    entropy: float
    overlap: complex
    orthogonality_residual: float
    rho: ReducedDensityMatrix


def conditioned_kernel(state: QuadratureState, c: complex | None = None) -> ReducedDensityMatrix:
    """Unnormalized pump kernel of |G> - <G0|G> |G0>."""
    c = conditioned_state_overlap(state) if c is None else c
    phase = np.exp(1j * state.f)
    z = phase * vacuum_amplitude(state)
    full = phase[:, None] * phase.conj()[None, :] * _harmonic_overlap_matrix(state.alpha)
    body = full - np.conj(c) * z[:, None] - c * z.conj()[None, :] + abs(c) ** 2
    kernel = state.psi0[:, None] * state.psi0[None, :] * body
    weights = np.full(state.grid.points, state.grid.weight)
    return ReducedDensityMatrix("L|HHG", _hermitize(kernel), weights)


def conditioned_norm_and_entropy(state: QuadratureState, min_norm: float = 1e-12) -> ConditionedResult:
    """Norm and pump-vs-harmonics entropy of the state conditioned on harmonic emission."""
    c = conditioned_state_overlap(state)
    norm_sq = 1.0 - abs(c) ** 2
    if norm_sq < min_norm:
        raise NoGenerationError(f"|<G0|G>| = {abs(c):.15f}: no harmonic generation to condition on")
    # <G0|G_HHG> = int psi0 [psi0 e^{if} prod<0|alpha> - c psi0] dQ
    residual = abs(np.sum(state.density * (np.exp(1j * state.f) * vacuum_amplitude(state) - c)))
    rho = conditioned_kernel(state, c)
    entropy = entanglement_entropy(rho)
    return ConditionedResult(rho.trace(), entropy, c, float(residual), rho)


def harmonic_mode_wigner(state: QuadratureState, j: int, q_grid: Sequence[float],
                         p_grid: Sequence[float]) -> np.ndarray:
    """Wigner function W[q, p] of harmonic j: a |psi0|^2-weighted mix of displaced vacua."""
    a = state.column(j)
    q = np.asarray(q_grid, dtype=float)
    p = np.asarray(p_grid, dtype=float)
    gq = np.exp(-(q[None, :] - math.sqrt(2.0) * a.real[:, None]) ** 2)
    gp = np.exp(-(p[None, :] - math.sqrt(2.0) * a.imag[:, None]) ** 2)
    return (gq * state.density[:, None]).T @ gp / np.pi
