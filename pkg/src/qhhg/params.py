"""Physical inputs and their reduction to dimensionless groups.

Internal units: hbar = 1, frequencies and energies in units of the laser
frequency omega_L, times in units of 1/omega_L. The quantization volume never
appears; every coupling is expressed through the Bloch ratio omega_B/omega_L
and the photon number N0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants as sc

ENVELOPES = ("flat", "cos2", "gaussian")

# N0 below this breaks the strong-pump assumption.
MIN_PHOTON_NUMBER = 100.0


class ParameterError(ValueError):
    """Invalid physical input (violated type invariant)."""


class RegimeError(ValueError):
    """Inputs are valid but outside the regime where the model applies."""


def photon_energy_ev(wavelength_um: float) -> float:
    """Laser photon energy hbar*omega_L in eV."""
    return sc.h * sc.c / (wavelength_um * 1e-6) / sc.e


@dataclass(frozen=True)
class LaserInput:
    wavelength_um: float
    peak_intensity_w_cm2: float
    mean_photon_number: float = 1e4
    pulse_fwhm_cycles: float = 3.0
    phase_theta0: float = 0.0

    def __post_init__(self):
        if not self.wavelength_um > 0:
            raise ParameterError("laser.wavelength_um must be > 0")
        if not self.peak_intensity_w_cm2 >= 0:
            raise ParameterError("laser.intensity_W_cm2 must be >= 0")
        if not self.mean_photon_number >= 1:
            raise ParameterError("laser.mean_photon_number must be >= 1")
        if not self.pulse_fwhm_cycles > 0:
            raise ParameterError("laser.pulse_fwhm_cycles must be > 0")
        if self.phase_theta0 != 0.0:
            raise ParameterError("laser.phase_theta0 is fixed to 0 by convention")

    @property
    def photon_energy_ev(self) -> float:
        return photon_energy_ev(self.wavelength_um)


@dataclass(frozen=True)
class MaterialInput:
    lattice_constant_angstrom: float
    band_halfwidth_ev: float
    carrier_number: float = 1.0

    def __post_init__(self):
        if not self.lattice_constant_angstrom > 0:
            raise ParameterError("material.lattice_constant_angstrom must be > 0")
        if not self.band_halfwidth_ev > 0:
            raise ParameterError("material.band_halfwidth_eV must be > 0")
        if not self.carrier_number >= 0:
            raise ParameterError("material.carrier_number must be >= 0")


@dataclass(frozen=True)
class SimulationConfig:
    harmonic_cutoff: int = 9
    interaction_cycles: float = 3.0
    t_start: float = 0.0
    envelope: str = "cos2"
    fwhm_cycles: float = 3.0
    n0_override: float | None = None

    def __post_init__(self):
        if self.harmonic_cutoff < 2:
            raise ParameterError("simulation.harmonic_cutoff must be >= 2")
        if not self.interaction_cycles > 0:
            raise ParameterError("simulation.interaction_cycles must be > 0")
        if self.envelope not in ENVELOPES:
            raise ParameterError(f"simulation.envelope must be one of {ENVELOPES}")
        if not self.fwhm_cycles > 0:
            raise ParameterError("simulation.fwhm_cycles must be > 0")


@dataclass(frozen=True)
class SystemParams:
    """Dimensionless configuration consumed by every compute module.

    ``gamma`` maps harmonic order j (2..M) to gamma_j = gamma_L / sqrt(j).
    Construct through :meth:`from_ratio` unless every derived field is known.
    """

    bloch_ratio: float
    n0: float
    coupling_strength: float
    gamma_l: float
    gamma: dict[int, float]
    harmonic_cutoff: int
    t_start: float = 0.0
    t_end: float = 6 * math.pi
    envelope: str = "cos2"
    fwhm_cycles: float = 3.0

    def __post_init__(self):
        if self.harmonic_cutoff < 2:
            raise ParameterError("harmonic_cutoff must be >= 2")
        if not self.t_end > self.t_start:
            raise ParameterError("t_end must exceed t_start")
        if self.n0 < 1:
            raise ParameterError("n0 must be >= 1")
        if sorted(self.gamma) != list(range(2, self.harmonic_cutoff + 1)):
            raise ParameterError("gamma must hold entries for j = 2..M")
        if self.envelope not in ENVELOPES:
            raise ParameterError(f"envelope must be one of {ENVELOPES}")

    @classmethod
    def from_ratio(
        cls,
        bloch_ratio: float,
        n0: float,
        coupling_strength: float,
        harmonic_cutoff: int,
        t_end: float = 6 * math.pi,
        t_start: float = 0.0,
        envelope: str = "cos2",
        fwhm_cycles: float = 3.0,
    ) -> "SystemParams":
        gamma_l = bloch_ratio / math.sqrt(2.0 * n0)
        gamma = {j: gamma_l * math.sqrt(1.0 / j) for j in range(2, harmonic_cutoff + 1)}
        return cls(
            bloch_ratio=bloch_ratio,
            n0=n0,
            coupling_strength=coupling_strength,
            gamma_l=gamma_l,
            gamma=gamma,
            harmonic_cutoff=harmonic_cutoff,
            t_start=t_start,
            t_end=t_end,
            envelope=envelope,
            fwhm_cycles=fwhm_cycles,
        )

    @property
    def harmonics(self) -> list[int]:
        return list(range(2, self.harmonic_cutoff + 1))

    @property
    def q_center(self) -> float:
        """<Q_L> of the initial coherent pump state, sqrt(2 N0)."""
        return math.sqrt(2.0 * self.n0)

    def with_coupling(self, coupling_strength: float) -> "SystemParams":
        return SystemParams.from_ratio(
            self.bloch_ratio, self.n0, coupling_strength, self.harmonic_cutoff,
            t_end=self.t_end, t_start=self.t_start, envelope=self.envelope,
            fwhm_cycles=self.fwhm_cycles,
        )


def peak_field_v_per_m(peak_intensity_w_cm2: float) -> float:
    """Peak electric field of a linearly polarized wave, E0 = sqrt(2 I / (c eps0))."""
    intensity_si = peak_intensity_w_cm2 * 1e4
    return math.sqrt(2.0 * intensity_si / (sc.c * sc.epsilon_0))


def bloch_ratio(laser: LaserInput, material: MaterialInput) -> float:
    """omega_B / omega_L = e A0 / (hbar c K_c) = e E0 a / (hbar omega_L).

    With A0 = c E0 / omega_L and 1/K_c the lattice constant ``a``. No fitted
    constant is involved; this gives ~0.99 at 5e11 W/cm^2, 1.44 um, 4.4 A.
    """
    e0 = peak_field_v_per_m(laser.peak_intensity_w_cm2)
    a = material.lattice_constant_angstrom * 1e-10
    return e0 * a / laser.photon_energy_ev


def intensity_from_bloch_ratio(ratio: float, wavelength_um: float,
                               lattice_constant_angstrom: float) -> float:
    """Inverse of :func:`bloch_ratio`: peak intensity in W/cm^2."""
    e0 = ratio * photon_energy_ev(wavelength_um) / (lattice_constant_angstrom * 1e-10)
    return 0.5 * sc.c * sc.epsilon_0 * e0**2 / 1e4


def coupling_strength(laser: LaserInput, material: MaterialInput) -> float:
    """mu = n_E * E_g / (hbar omega_L)."""
    return material.carrier_number * material.band_halfwidth_ev / laser.photon_energy_ev


def build_params(laser: LaserInput, material: MaterialInput,
                 sim: SimulationConfig | None = None) -> SystemParams:
    sim = sim or SimulationConfig()
    n0 = sim.n0_override if sim.n0_override is not None else laser.mean_photon_number
    if n0 < MIN_PHOTON_NUMBER:
        raise RegimeError(
            f"mean photon number N0={n0:g} < {MIN_PHOTON_NUMBER:g}; the strong-pump "
            "solution requires N0 >> 1"
        )
    return SystemParams.from_ratio(
        bloch_ratio=bloch_ratio(laser, material),
        n0=n0,
        coupling_strength=coupling_strength(laser, material),
        harmonic_cutoff=sim.harmonic_cutoff,
        t_start=sim.t_start,
        t_end=sim.t_start + 2 * math.pi * sim.interaction_cycles,
        envelope=sim.envelope,
        fwhm_cycles=sim.fwhm_cycles,
    )
