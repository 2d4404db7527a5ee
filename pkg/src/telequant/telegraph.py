"""1-D heat transport with thermal memory.

Solvers for the damped-wave (telegraph) equation

    tau * T_tt + T_t = D * T_xx

its diffusion limit ``T_t = D T_xx`` (tau -> 0), its undamped wave limit
``T_tt = (D/tau) T_xx``, and the underlying memory-flux formulation, where
the energy flux is the temperature gradient convolved with an exponential
kernel of strength K and decay time tau.

Flux sign convention: the flux law is used in the form q = -int K(t-t')
grad T dt' together with T_t = -dq/dx (unit volumetric heat capacity), the
unique sign pairing under which the convolution law reduces to the
telegraph equation above with K = D.

The reference discretization is spectral in space with exact per-mode
stepping (periodic via FFT, zero-wall dirichlet via DST-I); ``method="fd"``
selects finite-difference fallbacks (explicit central differences for the
hyperbolic equations, Crank-Nicolson for diffusion).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from typing import Iterable, Sequence, TextIO

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import BlowupError, ConfigError, DomainError, UsageError
from .grid import (
    DIRICHLET,
    PERIODIC,
    SpatialGrid,
    first_derivative,
    from_spectral,
    gradient_sq_integral,
    integrate,
    to_spectral,
    validate_field_values,
)
from .serialize import write_csv

DIFFUSION = "diffusion"
WAVE = "wave"
DAMPED_WAVE = "damped-wave"

MIN_WINDOW_TAUS = 10.0  # shortest admissible history window, in units of tau
DEFAULT_WINDOW_TAUS = 15.0  # exp(-15) ~ 3e-7 of the kernel mass lies beyond


@dataclass(frozen=True)
class TelegraphParams:
    """Relaxation time, diffusivity and memory-kernel strength.

    ``kernel_strength`` defaults to the diffusivity (the unit-heat-capacity
    closure).  ``ballistic=True`` marks the constant-kernel (tau -> inf)
    regime; it routes to the wave solver and is never represented by a
    floating-point infinity.
    """

    tau: float
    diffusivity: float
    kernel_strength: float | None = None
    ballistic: bool = False

    def __post_init__(self):
        if self.tau < 0:
            raise DomainError(f"tau must be >= 0, got {self.tau}")
        if not self.diffusivity > 0:
            raise DomainError(f"diffusivity must be strictly positive, got {self.diffusivity}")
        if self.kernel_strength is None:
            object.__setattr__(self, "kernel_strength", self.diffusivity)
        elif not self.kernel_strength > 0:
            raise DomainError(f"kernel_strength must be strictly positive, got {self.kernel_strength}")

    @property
    def speed(self) -> float:
        """Wave propagation speed sqrt(D/tau)."""
        if self.tau == 0:
            raise DomainError("speed is undefined at tau = 0 (diffusion limit)")
        return math.sqrt(self.diffusivity / self.tau)

    @property
    def mean_free_path(self) -> float:
        return self.speed * self.tau


@dataclass
class ThermalField:
    """Real temperature field on a grid at one instant."""

    grid: SpatialGrid
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        validate_field_values(self.values, self.grid)


@dataclass
class FluxHistory:
    """Time-ordered gradient samples retained over a finite window.

    The convolution quadrature reads the samples newest-to-oldest; the
    kernel mass older than the oldest sample is folded in analytically by
    treating the gradient as frozen at its oldest retained value.
    """

    window: float
    samples: list[tuple[float, np.ndarray]] = dataclass_field(default_factory=list)

    def __post_init__(self):
        if not self.window > 0:
            raise DomainError(f"window must be strictly positive, got {self.window}")
        times = [t for t, _ in self.samples]
        if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
            raise DomainError("history sample times must be strictly increasing")

    def append(self, t: float, gradient: np.ndarray) -> None:
        if self.samples and t <= self.samples[-1][0]:
            raise DomainError(f"sample time {t} does not advance the history")
        self.samples.append((t, gradient))

    def drop_older_than(self, cutoff: float) -> None:
        """Drop samples strictly older than cutoff, always keeping one at or
        before it so the quadrature covers the full window."""
        while len(self.samples) >= 2 and self.samples[1][0] <= cutoff:
            self.samples.pop(0)

    def __len__(self) -> int:
        return len(self.samples)


# ---------------------------------------------------------------------------
# kernel


def kernel_eval(t_minus_tprime: float, params: TelegraphParams) -> float:
    """Memory kernel (K/tau) exp(-lag/tau) at the given lag.

    Ballistic params give the constant kernel K; the tau = 0 delta limit is
    not pointwise evaluable.
    """
    if t_minus_tprime < 0:
        raise DomainError(f"kernel lag must be >= 0, got {t_minus_tprime}")
    if params.ballistic:
        return params.kernel_strength
    if params.tau == 0:
        raise DomainError("tau = 0 kernel is a delta function; not pointwise evaluable")
    return (params.kernel_strength / params.tau) * math.exp(-t_minus_tprime / params.tau)


def classify_kernel(params: TelegraphParams) -> str:
    """Transport regime implied by the kernel: delta -> diffusion, constant
    -> wave, exponential -> damped-wave."""
    if params.ballistic:
        return WAVE
    if params.tau == 0:
        return DIFFUSION
    return DAMPED_WAVE


# ---------------------------------------------------------------------------
# exact mode propagators


def _cos_sinc_sq(z2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """cosh(sqrt(z2)) and sinh(sqrt(z2))/sqrt(z2) for z2 of either sign.

    Negative z2 gives the trigonometric branch; |z2| < 1e-8 uses the series
    to avoid 0/0.
    """
    z2 = np.asarray(z2, dtype=float)
    ch = np.empty_like(z2)
    shc = np.empty_like(z2)
    pos = z2 > 1e-8
    neg = z2 < -1e-8
    mid = ~(pos | neg)
    rp = np.sqrt(z2[pos])
    ch[pos] = np.cosh(rp)
    shc[pos] = np.sinh(rp) / rp
    rn = np.sqrt(-z2[neg])
    ch[neg] = np.cos(rn)
    shc[neg] = np.sin(rn) / rn
    zm = z2[mid]
    ch[mid] = 1.0 + zm / 2.0 + zm**2 / 24.0
    shc[mid] = 1.0 + zm / 6.0 + zm**2 / 120.0
    return ch, shc


def _telegraph_mode_matrix(ksq: np.ndarray, tau: float, diffusivity: float, dt: float):
    """Exact one-step update for the mode ODE tau*a'' + a' + D*k^2*a = 0.

    Returns (m11, m12, m21, m22) acting on the (amplitude, rate) pair.
    """
    rbar = -1.0 / (2.0 * tau)
    d2 = (1.0 - 4.0 * tau * diffusivity * ksq) / (4.0 * tau**2)
    ch, shc = _cos_sinc_sq(d2 * dt**2)
    e = math.exp(rbar * dt)
    dtshc = dt * shc
    m11 = e * (ch - rbar * dtshc)
    m12 = e * dtshc
    m21 = rbar * m11 + e * (d2 * dtshc - rbar * ch)
    m22 = rbar * m12 + e * ch
    return m11, m12, m21, m22


def _wave_mode_matrix(ksq: np.ndarray, speed_sq: float, dt: float):
    """Exact one-step update for a'' = -v^2 k^2 a (rotation; time symmetric)."""
    w2 = speed_sq * ksq
    z2 = -w2 * dt**2
    c, s = _cos_sinc_sq(z2)
    return c, dt * s, -w2 * dt * s, c


def _check_finite(arrays: Iterable[np.ndarray], step: int) -> None:
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise BlowupError("non-finite field values detected", step=step)


# ---------------------------------------------------------------------------
# evolvers


def _validate_common(field: ThermalField, dt: float, n_steps: int) -> None:
    if not dt > 0:
        raise DomainError(f"dt must be strictly positive, got {dt}")
    if n_steps < 0:
        raise DomainError(f"n_steps must be >= 0, got {n_steps}")


def _laplacian_fd(u: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    dx2 = grid.dx**2
    if grid.boundary == PERIODIC:
        return (np.roll(u, 1) - 2.0 * u + np.roll(u, -1)) / dx2
    lap = np.zeros_like(u)
    right = np.append(u[2:], 0.0)
    lap[1:] = (u[:-1] - 2.0 * u[1:] + right) / dx2
    return lap


def evolve_telegraph(
    field: ThermalField,
    dfield_dt: np.ndarray,
    params: TelegraphParams,
    dt: float,
    n_steps: int,
    method: str = "spectral",
) -> tuple[ThermalField, np.ndarray]:
    """Advance the telegraph equation; returns the field and its time
    derivative after n_steps of size dt.

    The spectral method steps every mode by the closed-form ODE solution and
    has no step-size bound; the explicit fd method requires v*dt/dx <= 1.
    """
    if params.ballistic:
        raise UsageError("ballistic params describe the undamped wave; use evolve_wave")
    if params.tau == 0:
        raise UsageError("tau = 0 is the diffusion limit; use evolve_fourier")
    _validate_common(field, dt, n_steps)
    dfield_dt = np.asarray(dfield_dt, dtype=float)
    validate_field_values(dfield_dt, field.grid, name="dfield_dt")
    grid = field.grid

    if method == "spectral":
        a = to_spectral(field.values, grid)
        b = to_spectral(dfield_dt, grid)
        ksq = grid.wavenumbers**2
        m11, m12, m21, m22 = _telegraph_mode_matrix(ksq, params.tau, params.diffusivity, dt)
        for step in range(1, n_steps + 1):
            a, b = m11 * a + m12 * b, m21 * a + m22 * b
            _check_finite((a, b), step)
        values = from_spectral(a, grid).real
        rate = from_spectral(b, grid).real
        return ThermalField(grid, values, field.time + n_steps * dt), rate

    if method == "fd":
        cfl = params.speed * dt / grid.dx
        if cfl > 1.0 + 1e-12:
            raise ConfigError(
                f"explicit telegraph scheme needs v*dt/dx <= 1, got {cfl:.4g}"
            )
        tau, D = params.tau, params.diffusivity
        if n_steps == 0:
            return ThermalField(grid, field.values.copy(), field.time), dfield_dt.copy()
        u_prev = field.values.copy()
        acc0 = (D * _laplacian_fd(u_prev, grid) - dfield_dt) / tau
        u = u_prev + dt * dfield_dt + 0.5 * dt**2 * acc0
        _check_finite((u,), 1)
        A = 1.0 / dt**2
        B = 1.0 / (2.0 * tau * dt)
        for step in range(2, n_steps + 1):
            u_next = ((D / tau) * _laplacian_fd(u, grid) + 2.0 * A * u - (A - B) * u_prev) / (A + B)
            u_prev, u = u, u_next
            _check_finite((u,), step)
        lap = _laplacian_fd(u, grid)
        rate = ((u - u_prev) / dt + 0.5 * dt * (D / tau) * lap) / (1.0 + dt / (2.0 * tau))
        return ThermalField(grid, u, field.time + n_steps * dt), rate

    raise UsageError(f"unknown method {method!r}")


def evolve_fourier(
    field: ThermalField,
    params: TelegraphParams,
    dt: float,
    n_steps: int,
    method: str = "spectral",
) -> ThermalField:
    """Advance the diffusion equation T_t = D T_xx.

    Spectral stepping is exact per mode; ``method="fd"`` is Crank-Nicolson,
    unconditionally stable.
    """
    _validate_common(field, dt, n_steps)
    grid = field.grid
    D = params.diffusivity

    if method == "spectral":
        a = to_spectral(field.values, grid)
        decay = np.exp(-D * grid.wavenumbers**2 * dt)
        for step in range(1, n_steps + 1):
            a = decay * a
            _check_finite((a,), step)
        return ThermalField(grid, from_spectral(a, grid).real, field.time + n_steps * dt)

    if method == "fd":
        n = grid.n_points
        mu = D * dt / (2.0 * grid.dx**2)
        if grid.boundary == PERIODIC:
            lap = sp.diags([1.0, -2.0, 1.0], [-1, 0, 1], shape=(n, n), format="lil")
            lap[0, n - 1] = 1.0
            lap[n - 1, 0] = 1.0
        else:
            m = n - 1
            lap = sp.diags([1.0, -2.0, 1.0], [-1, 0, 1], shape=(m, m), format="lil")
        lap = lap.tocsc()
        eye = sp.identity(lap.shape[0], format="csc")
        lu = spla.splu((eye - mu * lap).tocsc())
        rhs_mat = (eye + mu * lap).tocsc()
        u = field.values.copy()
        view = u if grid.boundary == PERIODIC else u[1:]
        for step in range(1, n_steps + 1):
            view[:] = lu.solve(rhs_mat @ view)
            _check_finite((view,), step)
        return ThermalField(grid, u, field.time + n_steps * dt)

    raise UsageError(f"unknown method {method!r}")


def evolve_wave(
    field: ThermalField,
    dfield_dt: np.ndarray,
    params: TelegraphParams,
    dt: float,
    n_steps: int,
    method: str = "spectral",
) -> tuple[ThermalField, np.ndarray]:
    """Advance the undamped wave equation T_tt = (D/tau) T_xx.

    Both schemes are time symmetric: stepping dt then -dt recovers the
    input to roundoff.  The explicit fd scheme (velocity Verlet) requires
    v*dt/dx <= 1.
    """
    if params.tau == 0:
        raise UsageError("wave speed sqrt(D/tau) is undefined at tau = 0")
    _validate_common(field, abs(dt), n_steps)
    dfield_dt = np.asarray(dfield_dt, dtype=float)
    validate_field_values(dfield_dt, field.grid, name="dfield_dt")
    grid = field.grid
    v2 = params.diffusivity / params.tau

    if method == "spectral":
        a = to_spectral(field.values, grid)
        b = to_spectral(dfield_dt, grid)
        m11, m12, m21, m22 = _wave_mode_matrix(grid.wavenumbers**2, v2, dt)
        for step in range(1, n_steps + 1):
            a, b = m11 * a + m12 * b, m21 * a + m22 * b
            _check_finite((a, b), step)
        values = from_spectral(a, grid).real
        rate = from_spectral(b, grid).real
        return ThermalField(grid, values, field.time + n_steps * dt), rate

    if method == "fd":
        cfl = math.sqrt(v2) * abs(dt) / grid.dx
        if cfl > 1.0 + 1e-12:
            raise ConfigError(f"explicit wave scheme needs v*dt/dx <= 1, got {cfl:.4g}")
        u = field.values.copy()
        s = dfield_dt.copy()
        for step in range(1, n_steps + 1):
            s += 0.5 * dt * v2 * _laplacian_fd(u, grid)
            u += dt * s
            s += 0.5 * dt * v2 * _laplacian_fd(u, grid)
            _check_finite((u, s), step)
        return ThermalField(grid, u, field.time + n_steps * dt), s

    raise UsageError(f"unknown method {method!r}")


def wave_energy(field: ThermalField, dfield_dt: np.ndarray, params: TelegraphParams) -> float:
    """Energy functional int (T_t^2 + v^2 T_x^2) dx of the wave solver."""
    v2 = params.diffusivity / params.tau
    kinetic = integrate(np.asarray(dfield_dt) ** 2, field.grid)
    return float(kinetic + v2 * gradient_sq_integral(field.values, field.grid))


# ---------------------------------------------------------------------------
# memory-flux solver


def _flux_integral(
    history: FluxHistory, now: float, tau: float, strength: float
) -> np.ndarray:
    """Convolve the stored gradient samples with the exponential kernel.

    Product-trapezoid rule: the gradient is taken piecewise linear between
    samples and integrated against the kernel exactly, which stays accurate
    for any tau/dt ratio; the pre-window mass is added analytically with the
    gradient frozen at the oldest sample.
    """
    times = np.array([t for t, _ in history.samples])
    grads = np.vstack([g for _, g in history.samples])
    decay = np.exp(-(now - times) / tau)  # P_j, in (0, 1]
    weights = np.zeros(len(times))
    h = np.diff(times)
    dp = decay[1:] - decay[:-1]
    slope = tau / h * dp
    weights[:-1] += -decay[:-1] + slope
    weights[1:] += decay[1:] - slope
    weights[0] += decay[0]  # analytic tail: gradient held before the oldest sample
    return strength * (weights @ grads)


def evolve_memory_integral(
    field: ThermalField,
    history: FluxHistory,
    params: TelegraphParams,
    dt: float,
    n_steps: int,
) -> ThermalField:
    """Advance the memory-flux formulation: T_t = -dq/dx with
    q = -int K(t-t') T_x(t') dt'.

    Periodic grids only.  An empty history is seeded with the initial
    gradient; the pre-history gradient is treated as frozen at the initial
    profile, so the starting flux equals the Fourier value -K T_x(0).
    The matching telegraph start is dfield_dt = D T_xx(0).
    """
    if params.ballistic:
        raise UsageError("ballistic params describe the undamped wave; use evolve_wave")
    if params.tau == 0:
        raise UsageError("tau = 0 is the diffusion limit; use evolve_fourier")
    if field.grid.boundary != PERIODIC:
        raise ConfigError("memory-flux solver supports periodic grids only")
    _validate_common(field, dt, n_steps)
    if history.window < MIN_WINDOW_TAUS * params.tau:
        raise ConfigError(
            f"history window {history.window:.4g} is shorter than "
            f"{MIN_WINDOW_TAUS:g} relaxation times ({MIN_WINDOW_TAUS * params.tau:.4g})"
        )
    grid = field.grid
    tau, K = params.tau, params.kernel_strength

    u = field.values.copy()
    t = field.time
    if len(history) == 0:
        history.append(t, first_derivative(u, grid))
    elif abs(history.samples[-1][0] - t) > 1e-12 * max(abs(t), dt):
        raise UsageError("history's newest sample must coincide with the field time")

    for step in range(1, n_steps + 1):
        rhs_now = first_derivative(_flux_integral(history, t, tau, K), grid)
        u_pred = u + dt * rhs_now
        history.append(t + dt, first_derivative(u_pred, grid))
        rhs_pred = first_derivative(_flux_integral(history, t + dt, tau, K), grid)
        history.samples.pop()
        u = u + 0.5 * dt * (rhs_now + rhs_pred)
        t += dt
        history.append(t, first_derivative(u, grid))
        history.drop_older_than(t - history.window)
        _check_finite((u,), step)
    return ThermalField(grid, u, t)


# ---------------------------------------------------------------------------
# initial profiles and export


def gaussian_profile(
    grid: SpatialGrid, center: float, sigma: float, amplitude: float = 1.0
) -> np.ndarray:
    if not sigma > 0:
        raise DomainError(f"sigma must be strictly positive, got {sigma}")
    values = amplitude * np.exp(-((grid.x - center) ** 2) / (2.0 * sigma**2))
    if grid.boundary == DIRICHLET:
        values[0] = 0.0
    return values


def cosine_mode(grid: SpatialGrid, mode: int = 1, amplitude: float = 1.0) -> np.ndarray:
    """cos(2 pi mode (x - x_min)/L); a periodic eigenmode."""
    k = 2.0 * np.pi * mode / grid.length
    return amplitude * np.cos(k * (grid.x - grid.x_min))


def sine_mode(grid: SpatialGrid, mode: int = 1, amplitude: float = 1.0) -> np.ndarray:
    """sin(pi mode (x - x_min)/L); a zero-wall dirichlet eigenmode."""
    k = np.pi * mode / grid.length
    return amplitude * np.sin(k * (grid.x - grid.x_min))


def write_snapshots_csv(out: TextIO, snapshots: Sequence[ThermalField], meta: dict | None = None) -> None:
    """Rows (t, x, T), one per node per snapshot."""
    def rows():
        for snap in snapshots:
            for x, v in zip(snap.grid.x, snap.values):
                yield (snap.time, float(x), float(v))

    write_csv(out, ("t", "x", "T"), rows(), meta=meta)
