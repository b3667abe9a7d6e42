"""Quantum-optical high-harmonic generation from semiconductor intraband currents."""

from .params import (
    LaserInput,
    MaterialInput,
    ParameterError,
    RegimeError,
    SimulationConfig,
    SystemParams,
    bloch_ratio,
    build_params,
)

__version__ = "0.1.0"

__all__ = [
    "LaserInput",
    "MaterialInput",
    "ParameterError",
    "RegimeError",
    "SimulationConfig",
    "SystemParams",
    "bloch_ratio",
    "build_params",
]
