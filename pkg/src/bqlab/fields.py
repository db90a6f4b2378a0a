"""Field containers and the norms measured on them.

All norms integrate spectral density coefficients (see ``grids`` for the
transform convention) with plain Riemann weights: ``dxi`` for spatial
spectra, ``dtau * dxi`` for space-time spectra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import (
    FrequencyGrid,
    SpaceTimeGrid,
    _forward_along,
    _inverse_along,
    bracket,
    dft2_forward,
    dft2_inverse,
    dft_forward,
    dft_inverse,
    gamma,
)

__all__ = [
    "SpectralField",
    "SpaceTimeField",
    "SobolevIndex",
    "hs_norm",
    "xsb_norm",
    "xsb_norm_schrodinger",
    "embedding_ratio",
]


def _require_finite(arr: np.ndarray, name: str) -> None:
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise ValueError(f"{name} contains non-finite values")


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Complex coefficients uhat(xi_k) of a spatial function on a grid."""

    grid: FrequencyGrid
    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=complex)
        if coeffs.shape != (self.grid.n_modes,):
            raise ValueError(
                f"expected {self.grid.n_modes} coefficients, got shape {coeffs.shape}"
            )
        _require_finite(coeffs, "coefficients")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def zeros(cls, grid: FrequencyGrid) -> "SpectralField":
        return cls(grid, np.zeros(grid.n_modes, dtype=complex))

    @classmethod
    def from_samples(cls, grid: FrequencyGrid, samples) -> "SpectralField":
        return cls(grid, dft_forward(samples, grid))

    def to_samples(self) -> np.ndarray:
        return dft_inverse(self.coefficients, self.grid)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        c = self.coefficients
        scale = max(float(np.max(np.abs(c))), 1.0)
        return bool(np.max(np.abs(c - np.conj(c[::-1]))) <= tol * scale)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._check_same_grid(other)
        return SpectralField(self.grid, self.coefficients + other.coefficients)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._check_same_grid(other)
        return SpectralField(self.grid, self.coefficients - other.coefficients)

    def __mul__(self, scalar) -> "SpectralField":
        return SpectralField(self.grid, self.coefficients * scalar)

    __rmul__ = __mul__

    def _check_same_grid(self, other: "SpectralField") -> None:
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")


@dataclass(frozen=True, eq=False)
class SpaceTimeField:
    """Complex coefficients F(tau_j, xi_k) of a space-time function."""

    grid: SpaceTimeGrid
    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=complex)
        if coeffs.shape != self.grid.shape:
            raise ValueError(
                f"expected coefficient shape {self.grid.shape}, got {coeffs.shape}"
            )
        _require_finite(coeffs, "coefficients")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def zeros(cls, grid: SpaceTimeGrid) -> "SpaceTimeField":
        return cls(grid, np.zeros(grid.shape, dtype=complex))

    @classmethod
    def from_samples(cls, grid: SpaceTimeGrid, samples) -> "SpaceTimeField":
        return cls(grid, dft2_forward(samples, grid))

    @classmethod
    def from_mode_history(cls, grid: SpaceTimeGrid, states) -> "SpaceTimeField":
        """Transform uhat(t_j, xi_k) (spectral in x, sampled in t) along time."""
        states = np.asarray(states, dtype=complex)
        if states.shape != grid.shape:
            raise ValueError(f"expected state shape {grid.shape}, got {states.shape}")
        return cls(grid, _forward_along(states, 0, grid.dt, grid.tau_spacing,
                                        grid.t_nodes[0]))

    def to_samples(self) -> np.ndarray:
        return dft2_inverse(self.coefficients, self.grid)

    def time_slices(self) -> np.ndarray:
        """uhat(t_j, xi_k): inverse transform along the time axis only."""
        return _inverse_along(self.coefficients, 0, self.grid.tau_spacing,
                              self.grid.t_nodes[0])


@dataclass(frozen=True)
class SobolevIndex:
    """Regularity triple: spatial s, modulation b, dual modulation a."""

    s: float
    b: float
    a: float

    def __post_init__(self):
        for name in ("s", "b", "a"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


def _hs_weights(grid: FrequencyGrid, s: float) -> np.ndarray:
    return bracket(grid.nodes) ** (2.0 * s)


def _hs_norm_rows(states: np.ndarray, grid: FrequencyGrid, s: float) -> np.ndarray:
    """H^s norm of each row of a (n_rows, n_modes) coefficient matrix."""
    w = _hs_weights(grid, s)
    return np.sqrt(np.sum(w[None, :] * np.abs(states) ** 2, axis=1) * grid.spacing)


def hs_norm(field: SpectralField, s: float) -> float:
    """Sobolev norm: sqrt(sum <xi>^{2s} |uhat|^2 dxi)."""
    return float(np.sqrt(np.sum(_hs_weights(field.grid, s)
                                * np.abs(field.coefficients) ** 2)
                         * field.grid.spacing))


def _xsb_weight(grid: SpaceTimeGrid, s: float, b: float, surface: np.ndarray) -> np.ndarray:
    tau = np.abs(grid.tau_nodes)
    mod = bracket(tau[:, None] - surface[None, :]) ** (2.0 * b)
    return mod * (bracket(grid.frequency.nodes) ** (2.0 * s))[None, :]


def xsb_norm(field: SpaceTimeField, s: float, b: float) -> float:
    """Dispersive space-time norm with the modulation weight <|tau| - gamma(xi)>^b."""
    g = field.grid
    w = _xsb_weight(g, s, b, gamma(g.frequency.nodes))
    total = np.sum(w * np.abs(field.coefficients) ** 2)
    return float(np.sqrt(total * g.tau_spacing * g.frequency.spacing))


def xsb_norm_schrodinger(field: SpaceTimeField, s: float, b: float) -> float:
    """Equivalent norm with the parabolic weight <|tau| - xi^2>^b."""
    g = field.grid
    w = _xsb_weight(g, s, b, g.frequency.nodes ** 2)
    total = np.sum(w * np.abs(field.coefficients) ** 2)
    return float(np.sqrt(total * g.tau_spacing * g.frequency.spacing))


def embedding_ratio(field: SpaceTimeField, s: float, b: float) -> float:
    """sup over grid times of H^s(u(t)) divided by the X_{s,b} norm.

    Defined as 0 for the zero field.  Requires b > 1/2, where the continuous
    embedding into C(R : H^s) holds.
    """
    if not b > 0.5:
        raise ValueError(f"embedding diagnostic requires b > 1/2, got b={b}")
    denom = xsb_norm(field, s, b)
    if denom == 0.0:
        return 0.0
    slices = field.time_slices()
    sup = float(np.max(_hs_norm_rows(slices, field.grid.frequency, s)))
    return sup / denom
