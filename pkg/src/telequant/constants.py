"""Physical constants, Planck scales, and closed-form relaxation relations.

All quantities are plain floats in SI units unless the caller supplies
natural-unit constants (hbar = c = G = 1).  Units are documented
conventions, not checked types.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError, UsageError

# CODATA 2018
HBAR_SI = 1.054571817e-34  # J s
C_SI = 2.99792458e8  # m / s
G_SI = 6.67430e-11  # m^3 / (kg s^2)


@dataclass(frozen=True)
class PhysicalConstants:
    """hbar, c, G.  Defaults are CODATA 2018; pass 1.0 for natural units."""

    hbar: float = HBAR_SI
    c: float = C_SI
    G: float = G_SI

    def __post_init__(self):
        for name in ("hbar", "c", "G"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be strictly positive, got {getattr(self, name)}")

    @classmethod
    def codata2018(cls) -> "PhysicalConstants":
        return cls()

    @classmethod
    def natural(cls) -> "PhysicalConstants":
        return cls(hbar=1.0, c=1.0, G=1.0)


@dataclass(frozen=True)
class PlanckScales:
    """Characteristic mass/length/time plus the relaxation time hbar/(2 M_P c^2)."""

    mass_planck: float  # kg
    length_planck: float  # m
    time_planck: float  # s
    tau_planck: float  # s


class Channel(NamedTuple):
    label: str
    tau: float  # s


@dataclass(frozen=True)
class RelaxationBudget:
    """Independent scattering channels whose inverse relaxation times add."""

    channels: tuple[Channel, ...]

    def __post_init__(self):
        if len(self.channels) == 0:
            raise UsageError("relaxation budget must contain at least one channel")
        for ch in self.channels:
            if not ch.tau > 0:
                raise DomainError(f"channel {ch.label!r} has non-positive tau {ch.tau}")

    @classmethod
    def of(cls, *channels: tuple[str, float]) -> "RelaxationBudget":
        return cls(tuple(Channel(label, float(tau)) for label, tau in channels))


@dataclass(frozen=True)
class TransportScales:
    """Diffusivity, carrier speed and mean free path tied to one relaxation time.

    Invariants: diffusivity = tau * speed^2 and mean_free_path = speed * tau.
    """

    diffusivity: float  # m^2 / s
    speed: float  # m / s
    mean_free_path: float  # m
    tau: float  # s

    def __post_init__(self):
        for name in ("diffusivity", "speed", "mean_free_path", "tau"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be strictly positive")
        if not math.isclose(self.diffusivity, self.tau * self.speed**2, rel_tol=1e-9):
            raise DomainError("diffusivity != tau * speed^2")
        if not math.isclose(self.mean_free_path, self.speed * self.tau, rel_tol=1e-9):
            raise DomainError("mean_free_path != speed * tau")


def planck_scales(constants: PhysicalConstants = PhysicalConstants()) -> PlanckScales:
    """Derive the Planck mass/length/time and the relaxation time
    hbar / (2 M_P c^2), cross-checked against (1/2) sqrt(hbar G / c^5)."""
    hbar, c, G = constants.hbar, constants.c, constants.G
    mass = math.sqrt(hbar * c / G)
    length = math.sqrt(hbar * G / c**3)
    time = math.sqrt(hbar * G / c**5)
    tau = hbar / (2.0 * mass * c**2)
    tau_alt = 0.5 * math.sqrt(hbar * G / c**5)
    if abs(tau - tau_alt) > 1e-12 * abs(tau):
        raise DomainError("tau_planck forms disagree beyond 1e-12; constants are inconsistent")
    return PlanckScales(mass_planck=mass, length_planck=length, time_planck=time, tau_planck=tau)


def quantum_diffusivity(m: float, constants: PhysicalConstants = PhysicalConstants()) -> float:
    """Thermal diffusivity hbar / (2 m) of a quantum particle."""
    if not m > 0:
        raise DomainError(f"mass must be strictly positive, got {m}")
    return constants.hbar / (2.0 * m)


def quantum_relaxation_time(
    m: float, v: float, constants: PhysicalConstants = PhysicalConstants()
) -> float:
    """Relaxation time hbar / (2 m v^2); satisfies tau * v^2 = hbar / (2 m)."""
    if not m > 0:
        raise DomainError(f"mass must be strictly positive, got {m}")
    if not v > 0:
        raise DomainError(f"speed must be strictly positive, got {v}")
    return constants.hbar / (2.0 * m * v**2)


def matthiessen_combine(budget: RelaxationBudget) -> float:
    """Harmonic combination 1/tau = sum_i 1/tau_i over independent channels.

    The result never exceeds the shortest channel time."""
    rates = [1.0 / ch.tau for ch in budget.channels]
    return 1.0 / math.fsum(rates)


def transport_scales(tau: float, v: float) -> TransportScales:
    """Diffusivity tau*v^2 and mean free path v*tau for given relaxation
    time and carrier speed."""
    if not tau > 0:
        raise DomainError(f"tau must be strictly positive, got {tau}")
    if not v > 0:
        raise DomainError(f"speed must be strictly positive, got {v}")
    return TransportScales(diffusivity=tau * v**2, speed=v, mean_free_path=v * tau, tau=tau)
