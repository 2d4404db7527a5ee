"""Uniform 1-D grids and spectral derivative helpers.

Two boundary conventions are supported:

* ``periodic`` -- nodes ``x_i = x_min + i*dx``, ``i = 0..n-1``; the point
  ``x_max`` is identified with ``x_min``.  Transforms use the FFT.
* ``dirichlet`` -- field pinned to zero on the walls.  Same node layout as
  periodic, with ``values[0]`` (the wall at ``x_min``) held at zero and a
  virtual zero node at ``x_max``; the ``n-1`` interior values form a
  type-I sine series with wavenumbers ``k_m = m*pi/L``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import fft as sfft

from .errors import DomainError

PERIODIC = "periodic"
DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform grid on [x_min, x_max) with n_points nodes."""

    x_min: float
    x_max: float
    n_points: int
    boundary: str = PERIODIC

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise DomainError(f"x_max must exceed x_min, got [{self.x_min}, {self.x_max}]")
        if self.n_points < 8:
            raise DomainError(f"n_points must be >= 8, got {self.n_points}")
        if self.boundary not in (PERIODIC, DIRICHLET):
            raise DomainError(f"unknown boundary {self.boundary!r}")

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return self.length / self.n_points

    @cached_property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Wavenumbers of the transform basis (rad/m)."""
        if self.boundary == PERIODIC:
            return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)
        m = np.arange(1, self.n_points)
        return m * np.pi / self.length


def validate_field_values(values: np.ndarray, grid: SpatialGrid, name: str = "values") -> None:
    if values.shape != (grid.n_points,):
        raise DomainError(f"{name} has shape {values.shape}, expected ({grid.n_points},)")
    if not np.all(np.isfinite(values)):
        raise DomainError(f"{name} contains non-finite entries")
    if grid.boundary == DIRICHLET and values[0] != 0:
        raise DomainError(f"{name}[0] must be 0 on a dirichlet grid (wall node)")


def to_spectral(values: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    """Forward transform (FFT for periodic, DST-I on interior for dirichlet)."""
    if grid.boundary == PERIODIC:
        return np.fft.fft(values)
    interior = values[1:]
    if np.iscomplexobj(interior):
        return sfft.dst(interior.real, type=1, norm="ortho") + 1j * sfft.dst(
            interior.imag, type=1, norm="ortho"
        )
    return sfft.dst(interior, type=1, norm="ortho")


def from_spectral(coeffs: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    if grid.boundary == PERIODIC:
        return np.fft.ifft(coeffs)
    out = np.zeros(grid.n_points, dtype=coeffs.dtype)
    if np.iscomplexobj(coeffs):
        out[1:] = sfft.idst(coeffs.real, type=1, norm="ortho") + 1j * sfft.idst(
            coeffs.imag, type=1, norm="ortho"
        )
    else:
        out[1:] = sfft.idst(coeffs, type=1, norm="ortho")
    return out


def second_derivative(values: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    """Spectral d^2/dx^2; real input gives real output."""
    k = grid.wavenumbers
    out = from_spectral(-(k**2) * to_spectral(values, grid), grid)
    if not np.iscomplexobj(values):
        out = out.real
    return out


def first_derivative(values: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    """Spectral d/dx.  Periodic grids only (the sine basis is not closed
    under d/dx)."""
    if grid.boundary != PERIODIC:
        raise DomainError("spectral first derivative requires a periodic grid")
    k = grid.wavenumbers
    out = np.fft.ifft(1j * k * np.fft.fft(values))
    if not np.iscomplexobj(values):
        out = out.real
    return out


def integrate(values: np.ndarray, grid: SpatialGrid) -> float | complex:
    """Integral of a grid function over the box (rectangle rule; exact for
    band-limited periodic data)."""
    total = values.sum() * grid.dx
    if not np.iscomplexobj(values):
        return float(total)
    return complex(total)


def gradient_sq_integral(values: np.ndarray, grid: SpatialGrid) -> float:
    """Integral of |df/dx|^2 via Parseval, valid for both boundaries."""
    k = grid.wavenumbers
    coeffs = to_spectral(values, grid)
    if grid.boundary == PERIODIC:
        # ortho factor: sum|fhat|^2 = n * sum|f|^2 for np.fft convention
        return float(np.sum(k**2 * np.abs(coeffs) ** 2) * grid.dx / grid.n_points)
    return float(np.sum(k**2 * np.abs(coeffs) ** 2) * grid.dx)
