"""Telegraph-heat and relaxation-modified Schrodinger solvers in 1-D.

Modules:

* :mod:`telequant.constants` -- physical constants, Planck scales, and the
  closed-form relaxation/diffusivity relations.
* :mod:`telequant.telegraph` -- memory-kernel flux law, telegraph equation,
  and its diffusion / ballistic-wave limits.
* :mod:`telequant.quantum` -- Schrodinger equation with and without the
  relaxation term, the t <-> it bridge, and the decomposition identity.
* :mod:`telequant.modes` -- modified dispersion relation, string-mode
  frequency roots, and the mass-free pilot-wave advancer.
* :mod:`telequant.cli` -- batch scenario runner (`telequant` entry point).
"""

from .constants import (
    PhysicalConstants,
    PlanckScales,
    RelaxationBudget,
    TransportScales,
    matthiessen_combine,
    planck_scales,
    quantum_diffusivity,
    quantum_relaxation_time,
    transport_scales,
)
from .errors import BlowupError, ConfigError, DomainError, TelequantError, UsageError
from .grid import SpatialGrid
from .modes import DispersionPoint, ModePair, dispersion_omega, pilot_wave_advance, string_modes
from .quantum import QuantumParams, WaveField, evolve_modified_se, evolve_se
from .telegraph import (
    FluxHistory,
    TelegraphParams,
    ThermalField,
    evolve_fourier,
    evolve_memory_integral,
    evolve_telegraph,
    evolve_wave,
)

__version__ = "0.1.0"

__all__ = [
    "BlowupError",
    "ConfigError",
    "DispersionPoint",
    "DomainError",
    "FluxHistory",
    "ModePair",
    "PhysicalConstants",
    "PlanckScales",
    "QuantumParams",
    "RelaxationBudget",
    "SpatialGrid",
    "TelegraphParams",
    "TelequantError",
    "ThermalField",
    "TransportScales",
    "UsageError",
    "WaveField",
    "dispersion_omega",
    "evolve_fourier",
    "evolve_memory_integral",
    "evolve_modified_se",
    "evolve_se",
    "evolve_telegraph",
    "evolve_wave",
    "matthiessen_combine",
    "pilot_wave_advance",
    "planck_scales",
    "quantum_diffusivity",
    "quantum_relaxation_time",
    "string_modes",
    "transport_scales",
    "__version__",
]
