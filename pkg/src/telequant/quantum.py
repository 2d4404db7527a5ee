"""1-D Schrodinger dynamics, with and without the space-time relaxation term.

The baseline equation is

    i hbar psi_t = -(hbar^2 / 2m) psi_xx + V psi

and the relaxation-modified form adds ``- tau hbar psi_tt`` to the right
side, turning it second order in time.  The modified system is integrated
as a first-order pair (psi, psi_t); its fast branch oscillates at roughly
1/tau, so steps must resolve that scale (dt <= tau/10 is a good rule; the
hard RK4 stability bound is checked and enforced).

Also here: the formal map between diffusion fields and wavefunctions
(t <-> it), the diffusion-with-potential equation it produces, and the
algebraic split of the modified equation into a mass-dependent part plus a
mass-free wave constraint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from typing import Sequence, TextIO

from .constants import PhysicalConstants, planck_scales
from .errors import BlowupError, ConfigError, DomainError, UsageError
from .grid import (
    PERIODIC,
    SpatialGrid,
    from_spectral,
    second_derivative,
    to_spectral,
    validate_field_values,
)
from .serialize import write_csv
from .telegraph import ThermalField

THERMAL_TO_QUANTUM = "thermal-to-quantum"
QUANTUM_TO_THERMAL = "quantum-to-thermal"

RK4_IMAG_AXIS_LIMIT = 2.6  # enforced |omega_max| * dt bound (2*sqrt(2) is marginal)


@dataclass(frozen=True)
class QuantumParams:
    """Particle mass, sampled potential, relaxation time and unit system.

    ``tau=None`` resolves to the Planck relaxation time hbar/(2 M_P c^2)
    for the given constants.  ``potential=None`` means V = 0.  Constants
    default to natural units (hbar = c = G = 1); pass
    ``PhysicalConstants.codata2018()`` for SI runs.
    """

    mass: float
    potential: np.ndarray | None = None
    tau: float | None = None
    constants: PhysicalConstants = PhysicalConstants.natural()

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError(f"mass must be strictly positive, got {self.mass}")
        if self.tau is not None and self.tau < 0:
            raise DomainError(f"tau must be >= 0, got {self.tau}")
        if self.potential is not None:
            pot = np.asarray(self.potential, dtype=float)
            if not np.all(np.isfinite(pot)):
                raise DomainError("potential contains non-finite entries")
            object.__setattr__(self, "potential", pot)

    @property
    def effective_tau(self) -> float:
        if self.tau is None:
            return planck_scales(self.constants).tau_planck
        return self.tau

    def potential_on(self, grid: SpatialGrid) -> np.ndarray:
        if self.potential is None:
            return np.zeros(grid.n_points)
        if self.potential.shape != (grid.n_points,):
            raise DomainError(
                f"potential has shape {self.potential.shape}, expected ({grid.n_points},)"
            )
        return self.potential


@dataclass
class WaveField:
    """Complex wavefunction on a grid; carries psi_t (and optionally a
    psi_tt estimate) when the second-order dynamics needs them."""

    grid: SpatialGrid
    psi: np.ndarray
    dpsi_dt: np.ndarray | None = None
    time: float = 0.0
    d2psi_dt2: np.ndarray | None = None

    def __post_init__(self):
        self.psi = np.asarray(self.psi, dtype=complex)
        validate_field_values(self.psi, self.grid, name="psi")
        if norm(self) <= 0:
            raise DomainError("wavefunction norm must be positive")
        for name in ("dpsi_dt", "d2psi_dt2"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.asarray(arr, dtype=complex)
                validate_field_values(arr, self.grid, name=name)
                setattr(self, name, arr)


def norm(field: WaveField) -> float:
    """sqrt of int |psi|^2 dx."""
    return float(np.sqrt(np.sum(np.abs(field.psi) ** 2) * field.grid.dx))


def gaussian_packet(
    grid: SpatialGrid, center: float, sigma: float, k0: float = 0.0
) -> np.ndarray:
    """Normalized Gaussian wave packet with carrier wavenumber k0."""
    if not sigma > 0:
        raise DomainError(f"sigma must be strictly positive, got {sigma}")
    amp = (2.0 * np.pi * sigma**2) ** -0.25
    psi = amp * np.exp(-((grid.x - center) ** 2) / (4.0 * sigma**2) + 1j * k0 * grid.x)
    if grid.boundary != PERIODIC:
        psi[0] = 0.0
    return psi


def plane_wave(grid: SpatialGrid, mode: int = 1, amplitude: float = 1.0) -> np.ndarray:
    """exp(i k x) with k = 2 pi mode / L; periodic grids."""
    k = 2.0 * np.pi * mode / grid.length
    return amplitude * np.exp(1j * k * (grid.x - grid.x_min))


def _apply_hamiltonian(psi: np.ndarray, grid: SpatialGrid, params: QuantumParams) -> np.ndarray:
    hbar = params.constants.hbar
    V = params.potential_on(grid)
    return -(hbar**2 / (2.0 * params.mass)) * second_derivative(psi, grid) + V * psi


def initial_time_derivative(field: WaveField, params: QuantumParams) -> np.ndarray:
    """The tau = 0 (first-order) time derivative (1/i hbar) H psi, used as
    the second initial condition for the modified equation."""
    hpsi = _apply_hamiltonian(field.psi, field.grid, params)
    return hpsi / (1j * params.constants.hbar)


def _check_finite(arrays, step: int) -> None:
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise BlowupError("non-finite wavefunction values detected", step=step)


def evolve_se(
    field: WaveField,
    params: QuantumParams,
    dt: float,
    n_steps: int,
    method: str = "splitstep",
) -> WaveField:
    """Advance the first-order Schrodinger equation.

    ``splitstep`` is Strang-split spectral stepping (unitary, second order
    in dt, exact for uniform V); ``cn`` is Crank-Nicolson (unitary Cayley
    form, unconditionally stable).
    """
    if not dt > 0:
        raise DomainError(f"dt must be strictly positive, got {dt}")
    if n_steps < 0:
        raise DomainError(f"n_steps must be >= 0, got {n_steps}")
    grid = field.grid
    hbar = params.constants.hbar
    V = params.potential_on(grid)

    if method == "splitstep":
        half_v = np.exp(-0.5j * V * dt / hbar)
        kin = np.exp(-0.5j * (hbar / params.mass) * grid.wavenumbers**2 * dt)
        psi = field.psi.copy()
        for step in range(1, n_steps + 1):
            psi = half_v * from_spectral(kin * to_spectral(half_v * psi, grid), grid)
            _check_finite((psi,), step)
        return WaveField(grid, psi, time=field.time + n_steps * dt)

    if method == "cn":
        n = grid.n_points
        dx2 = grid.dx**2
        if grid.boundary == PERIODIC:
            lap = sp.diags([1.0, -2.0, 1.0], [-1, 0, 1], shape=(n, n), format="lil")
            lap[0, n - 1] = 1.0
            lap[n - 1, 0] = 1.0
            v_diag = V
        else:
            m = n - 1
            lap = sp.diags([1.0, -2.0, 1.0], [-1, 0, 1], shape=(m, m), format="lil")
            v_diag = V[1:]
        ham = (-(hbar**2) / (2.0 * params.mass * dx2)) * lap.tocsc() + sp.diags(v_diag).tocsc()
        eye = sp.identity(ham.shape[0], format="csc", dtype=complex)
        z = 0.5j * dt / hbar
        lu = spla.splu((eye + z * ham).tocsc())
        rhs_mat = (eye - z * ham).tocsc()
        psi = field.psi.copy()
        view = psi if grid.boundary == PERIODIC else psi[1:]
        for step in range(1, n_steps + 1):
            view[:] = lu.solve(rhs_mat @ view)
            _check_finite((view,), step)
        return WaveField(grid, psi, time=field.time + n_steps * dt)

    raise UsageError(f"unknown method {method!r}")


def _modified_stability_check(
    grid: SpatialGrid, params: QuantumParams, tau: float, dt: float
) -> None:
    """Enforce the documented bounds of the modified-equation integrator.

    Mode frequencies solve tau*w^2 - w + (K(k) + V)/hbar = 0.  When the
    parenthesis exceeds 1/(4 tau) the roots turn complex and one branch
    grows exponentially -- a property of the equation itself, not of the
    scheme -- so grids carrying such modes are refused.  On the stable side
    the fastest branch is below 1/tau and RK4 needs |w|*dt inside its
    imaginary-axis interval.
    """
    hbar = params.constants.hbar
    ksq_max = float(np.max(grid.wavenumbers**2))
    q_max = (
        hbar**2 * ksq_max / (2.0 * params.mass)
        + float(np.max(np.abs(params.potential_on(grid))))
    ) / hbar
    disc = 1.0 - 4.0 * tau * q_max
    if disc < 0:
        raise ConfigError(
            "grid carries modes beyond the propagation cutoff "
            f"(kinetic+potential scale {q_max:.4g} > 1/(4 tau) = {1.0 / (4.0 * tau):.4g}); "
            "the modified equation grows exponentially there -- reduce tau, "
            "coarsen the grid, or enlarge the box"
        )
    omega_max = (1.0 + math.sqrt(disc)) / (2.0 * tau)
    if omega_max * dt > RK4_IMAG_AXIS_LIMIT:
        raise ConfigError(
            f"RK4 stability requires |omega_max|*dt <= {RK4_IMAG_AXIS_LIMIT}, got "
            f"{omega_max * dt:.4g}; reduce dt below {RK4_IMAG_AXIS_LIMIT / omega_max:.4g}"
        )


def evolve_modified_se(
    field: WaveField, params: QuantumParams, dt: float, n_steps: int
) -> WaveField:
    """Advance the relaxation-modified Schrodinger equation (second order in
    time) by classical RK4 on the pair (psi, psi_t).

    tau = 0 routes to :func:`evolve_se` unchanged.  The solution norm is not
    conserved by the modified dynamics and is reported, not asserted.
    """
    tau = params.effective_tau
    if tau == 0:
        return evolve_se(field, params, dt, n_steps)
    if field.dpsi_dt is None:
        raise UsageError(
            "modified equation is second order in time: field.dpsi_dt is required "
            "(see initial_time_derivative)"
        )
    if not dt > 0:
        raise DomainError(f"dt must be strictly positive, got {dt}")
    if n_steps < 0:
        raise DomainError(f"n_steps must be >= 0, got {n_steps}")
    grid = field.grid
    hbar = params.constants.hbar
    omega_max = _modified_omega_max(grid, params, tau)
    if omega_max * dt > RK4_IMAG_AXIS_LIMIT:
        raise ConfigError(
            f"RK4 stability requires |omega_max|*dt <= {RK4_IMAG_AXIS_LIMIT}, got "
            f"{omega_max * dt:.4g}; reduce dt below {RK4_IMAG_AXIS_LIMIT / omega_max:.4g}"
        )
    V = params.potential_on(grid)
    coef = hbar**2 / (2.0 * params.mass)

    def rhs(psi, phi):
        lap = second_derivative(psi, grid)
        return phi, (V * psi - coef * lap - 1j * hbar * phi) / (tau * hbar)

    psi = field.psi.copy()
    phi = field.dpsi_dt.copy()
    for step in range(1, n_steps + 1):
        k1p, k1f = rhs(psi, phi)
        k2p, k2f = rhs(psi + 0.5 * dt * k1p, phi + 0.5 * dt * k1f)
        k3p, k3f = rhs(psi + 0.5 * dt * k2p, phi + 0.5 * dt * k2f)
        k4p, k4f = rhs(psi + dt * k3p, phi + dt * k3f)
        psi = psi + (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        phi = phi + (dt / 6.0) * (k1f + 2.0 * k2f + 2.0 * k3f + k4f)
        _check_finite((psi, phi), step)
    return WaveField(grid, psi, dpsi_dt=phi, time=field.time + n_steps * dt)


def evolve_imaginary_time(
    field: ThermalField, params: QuantumParams, dt: float, n_steps: int
) -> ThermalField:
    """Advance the diffusion-with-potential equation
    T_t = (hbar/2m) T_xx - (V/hbar) T, the t <-> it image of the
    Schrodinger equation (Strang-split spectral stepping)."""
    if not dt > 0:
        raise DomainError(f"dt must be strictly positive, got {dt}")
    grid = field.grid
    hbar = params.constants.hbar
    V = params.potential_on(grid)
    half_v = np.exp(-0.5 * V * dt / hbar)
    kin = np.exp(-0.5 * (hbar / params.mass) * grid.wavenumbers**2 * dt)
    u = field.values.copy()
    for step in range(1, n_steps + 1):
        u = half_v * from_spectral(kin * to_spectral(half_v * u, grid), grid).real
        _check_finite((u,), step)
    return ThermalField(grid, u, field.time + n_steps * dt)


def wick_bridge(field: ThermalField | WaveField, direction: str) -> WaveField | ThermalField:
    """Formal field identification T <-> psi between the diffusion and
    Schrodinger pictures (the t <-> it substitution acts on the closed-form
    solutions, not on the stored arrays)."""
    if direction == THERMAL_TO_QUANTUM:
        if not isinstance(field, ThermalField):
            raise UsageError("thermal-to-quantum bridge expects a ThermalField")
        return WaveField(field.grid, field.values.astype(complex), time=field.time)
    if direction == QUANTUM_TO_THERMAL:
        if not isinstance(field, WaveField):
            raise UsageError("quantum-to-thermal bridge expects a WaveField")
        return ThermalField(field.grid, field.psi.real.copy(), time=field.time)
    raise UsageError(
        f"direction must be {THERMAL_TO_QUANTUM!r} or {QUANTUM_TO_THERMAL!r}, got {direction!r}"
    )


def pilot_wave_residual(field: WaveField, constants: PhysicalConstants) -> float:
    """L2 norm of psi_xx - psi_tt / c^2 (the mass-free wave constraint)."""
    if field.d2psi_dt2 is None:
        raise UsageError("pilot-wave residual needs a psi_tt estimate (field.d2psi_dt2)")
    r = second_derivative(field.psi, field.grid) - field.d2psi_dt2 / constants.c**2
    return float(np.sqrt(np.sum(np.abs(r) ** 2) * field.grid.dx))


def decomposition_residual(
    field: WaveField,
    params: QuantumParams,
    constants: PhysicalConstants | None = None,
) -> float:
    """L2 norm of the algebraic identity splitting the Planck-relaxation
    equation into its mass-dependent part and the mass-free wave constraint.

    Zero up to roundoff for any field, since the split only adds and
    subtracts the same Laplacian term.  Requires psi_t and a psi_tt
    estimate from stored steps.
    """
    if constants is None:
        constants = params.constants
    if field.dpsi_dt is None or field.d2psi_dt2 is None:
        raise UsageError(
            "decomposition residual needs psi_t and a psi_tt estimate from two stored steps"
        )
    hbar, c = constants.hbar, constants.c
    mp = planck_scales(constants).mass_planck
    grid = field.grid
    V = params.potential_on(grid)
    lap = second_derivative(field.psi, grid)
    psi, phi, ptt = field.psi, field.dpsi_dt, field.d2psi_dt2

    full = (
        1j * hbar * phi
        - V * psi
        + (hbar**2 / (2.0 * params.mass)) * lap
        + (hbar**2 / (2.0 * mp * c**2)) * ptt
    )
    massive = (
        1j * hbar * phi
        + (hbar**2 / (2.0 * params.mass)) * lap
        - V * psi
        + (hbar**2 / (2.0 * mp)) * lap
    )
    wave_constraint = lap - ptt / c**2
    resid = full - massive + (hbar**2 / (2.0 * mp)) * wave_constraint
    return float(np.sqrt(np.sum(np.abs(resid) ** 2) * grid.dx))


def write_snapshots_csv(out: TextIO, snapshots: Sequence[WaveField], meta: dict | None = None) -> None:
    """Rows (t, x, re_psi, im_psi, abs2_psi)."""
    def rows():
        for snap in snapshots:
            for x, p in zip(snap.grid.x, snap.psi):
                yield (snap.time, float(x), float(p.real), float(p.imag), float(abs(p) ** 2))

    write_csv(out, ("t", "x", "re_psi", "im_psi", "abs2_psi"), rows(), meta=meta)


def write_norm_log(out: TextIO, snapshots: Sequence[WaveField], meta: dict | None = None) -> None:
    """Rows (t, norm); the modified dynamics' norm is reported, never asserted."""
    write_csv(out, ("t", "norm"), ((s.time, norm(s)) for s in snapshots), meta=meta)
