"""Closed-form mode analytics for the Planck-relaxation dynamics.

Covers the modified dispersion relation E = p^2/2m + E^2/(2 M_P c^2), the
frequency quadratic of the Planck-mass reduced equation

    (hbar^2 / 2 M_P c^2) w^2 + hbar w + V = 0

with its two root branches and regime classification, the ansatz residual
check for exp(i w t) solutions (the ansatz sign follows that convention
exactly), and the mass-free pilot-wave advancer psi_tt = c^2 psi_xx.

Roots are computed with the cancellation-safe quadratic formula: the
larger-magnitude root directly, the other via Vieta, so the physical branch
stays accurate when V (or the kinetic term) is many orders below M_P c^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .constants import PhysicalConstants, planck_scales
from .errors import BlowupError, ConfigError, DomainError
from .grid import PERIODIC, SpatialGrid, to_spectral, from_spectral
from .serialize import write_csv
from .telegraph import _wave_mode_matrix

MINUS = "minus"
PLUS = "plus"

OSCILLATORY = "oscillatory"
CRITICAL = "critical"
DAMPED_COMPLEX = "damped-complex"


@dataclass(frozen=True)
class DispersionPoint:
    """One (k, omega) sample of the modified dispersion relation.

    energy = hbar * omega and momentum = hbar * k.  omega picks up an
    imaginary part when the kinetic term exceeds M_P c^2 / 2 (the relation
    then has no propagating solution).
    """

    k: float
    omega: complex
    energy: complex
    momentum: float
    branch: str

    @property
    def is_complex(self) -> bool:
        return self.omega.imag != 0.0


@dataclass(frozen=True)
class ModePair:
    """The two frequency roots of the reduced-equation quadratic at one
    potential value."""

    omega1: complex
    omega2: complex
    regime: str
    potential: float


def dispersion_omega(
    k: float, m: float, constants: PhysicalConstants = PhysicalConstants.natural()
) -> tuple[DispersionPoint, DispersionPoint]:
    """Both omega roots of E = p^2/2m + E^2/(2 M_P c^2) at wavenumber k.

    The minus branch reduces to the first-order Schrodinger value
    hbar k^2 / 2m when the quadratic correction vanishes; the plus branch
    starts at 2 M_P c^2 / hbar.
    """
    if not m > 0:
        raise DomainError(f"mass must be strictly positive, got {m}")
    hbar, c = constants.hbar, constants.c
    mp = planck_scales(constants).mass_planck
    rest = mp * c**2
    kinetic = (hbar * k) ** 2 / (2.0 * m)
    disc = 1.0 - 2.0 * kinetic / rest
    if disc >= 0:
        s = math.sqrt(disc)
        e_plus = complex(rest * (1.0 + s))
        e_minus = complex(2.0 * kinetic / (1.0 + s))
    else:
        s = 1j * math.sqrt(-disc)
        e_plus = rest * (1.0 + s)
        e_minus = rest * (1.0 - s)
    p = hbar * k
    minus = DispersionPoint(k=k, omega=e_minus / hbar, energy=e_minus, momentum=p, branch=MINUS)
    plus = DispersionPoint(k=k, omega=e_plus / hbar, energy=e_plus, momentum=p, branch=PLUS)
    return minus, plus


def string_modes(
    V: float, constants: PhysicalConstants = PhysicalConstants.natural()
) -> ModePair:
    """Frequency roots of (hbar^2/2 M_P c^2) w^2 + hbar w + V = 0.

    Real pair below V = M_P c^2 / 2 (oscillatory), double root at equality
    (critical), complex-conjugate pair above (damped-complex).  Negative V
    is accepted as an extrapolation of the same formulas.  Vieta:
    w1 + w2 = -2 M_P c^2 / hbar and w1 * w2 = 2 V M_P c^2 / hbar^2.
    """
    hbar, c = constants.hbar, constants.c
    rest = planck_scales(constants).mass_planck * c**2
    ratio = 2.0 * V / rest
    disc = 1.0 - ratio
    if disc > 0:
        s = math.sqrt(disc)
        omega2 = complex(-(rest / hbar) * (1.0 + s))
        omega1 = complex(-2.0 * V / (hbar * (1.0 + s)))
        regime = OSCILLATORY
    elif disc == 0:
        omega1 = omega2 = complex(-rest / hbar)
        regime = CRITICAL
    else:
        s = math.sqrt(-disc)
        omega1 = (-rest + 1j * rest * s) / hbar
        omega2 = (-rest - 1j * rest * s) / hbar
        regime = DAMPED_COMPLEX
    return ModePair(omega1=omega1, omega2=omega2, regime=regime, potential=float(V))


def reduced_equation_check(
    V: float,
    u_amplitude: complex,
    t_samples: Sequence[float],
    constants: PhysicalConstants = PhysicalConstants.natural(),
) -> float:
    """Largest relative residual of psi = exp(i w t) u in the reduced
    equation, over both roots and all sample times.

    The time derivatives are substituted in closed form, so a true root
    leaves only roundoff.
    """
    hbar, c = constants.hbar, constants.c
    rest = planck_scales(constants).mass_planck * c**2
    a = hbar**2 / (2.0 * rest)
    pair = string_modes(V, constants)
    worst = 0.0
    for omega in (pair.omega1, pair.omega2):
        for t in t_samples:
            psi = np.exp(1j * omega * t) * u_amplitude
            psi_t = 1j * omega * psi
            psi_tt = -(omega**2) * psi
            r = a * psi_tt + 1j * hbar * psi_t - V * psi
            scale = max(abs(a * psi_tt), abs(hbar * omega * psi), abs(V * psi))
            if scale == 0.0:
                worst = max(worst, abs(r))
            else:
                worst = max(worst, abs(r) / scale)
    return worst


def pilot_wave_advance(
    psi: np.ndarray,
    dpsi_dt: np.ndarray,
    grid: SpatialGrid,
    dt: float,
    n_steps: int,
    constants: PhysicalConstants = PhysicalConstants.natural(),
) -> tuple[np.ndarray, np.ndarray]:
    """Advance the mass-free wave constraint psi_tt = c^2 psi_xx by exact
    spectral mode rotation (time symmetric; no mass enters anywhere).

    Periodic grids only.  Returns the advanced (psi, dpsi_dt) pair.
    """
    if grid.boundary != PERIODIC:
        raise ConfigError("pilot-wave advancer requires a periodic grid")
    if dt == 0:
        raise DomainError("dt must be nonzero")
    if n_steps < 0:
        raise DomainError(f"n_steps must be >= 0, got {n_steps}")
    psi = np.asarray(psi, dtype=complex)
    dpsi_dt = np.asarray(dpsi_dt, dtype=complex)
    if psi.shape != (grid.n_points,) or dpsi_dt.shape != (grid.n_points,):
        raise DomainError("psi and dpsi_dt must be grid-sized arrays")
    a = to_spectral(psi, grid)
    b = to_spectral(dpsi_dt, grid)
    m11, m12, m21, m22 = _wave_mode_matrix(grid.wavenumbers**2, constants.c**2, dt)
    for step in range(1, n_steps + 1):
        a, b = m11 * a + m12 * b, m21 * a + m22 * b
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise BlowupError("non-finite pilot-wave values detected", step=step)
    return from_spectral(a, grid), from_spectral(b, grid)


def mode_records(pairs: Iterable[ModePair]) -> list[dict]:
    """JSON-ready records mirroring the CSV columns."""
    return [
        {
            "V": pair.potential,
            "re_omega1": pair.omega1.real,
            "im_omega1": pair.omega1.imag,
            "re_omega2": pair.omega2.real,
            "im_omega2": pair.omega2.imag,
            "regime": pair.regime,
        }
        for pair in pairs
    ]


def write_mode_table_csv(out: TextIO, pairs: Sequence[ModePair], meta: dict | None = None) -> None:
    rows = (
        (p.potential, p.omega1.real, p.omega1.imag, p.omega2.real, p.omega2.imag, p.regime)
        for p in pairs
    )
    write_csv(
        out,
        ("V", "re_omega1", "im_omega1", "re_omega2", "im_omega2", "regime"),
        rows,
        meta=meta,
    )
