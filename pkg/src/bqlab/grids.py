"""Grids, discrete Fourier transforms, the dispersion symbol, and smooth cutoffs.

Transform convention (documented once here, used everywhere else):

* ``FrequencyGrid`` discretizes a periodic box ``[-L, L]`` with an odd number
  ``n`` of modes.  Frequency nodes ``xi_k = k * dxi`` with ``dxi = pi / L``
  and ``k = -(n-1)/2 .. (n-1)/2``, stored ascending.  Spatial nodes
  ``x_j = -L + j * dx`` with ``dx = 2L / n`` (right endpoint excluded, it is
  periodically identified with ``-L``).
* ``dft_forward`` approximates the line transform ``fhat(xi) = I f(x) e^{-i xi x} dx``,
  so coefficients are densities in ``dxi``::

      fhat_k = dx * sum_j f_j exp(-i xi_k x_j)

* ``dft_inverse`` carries the dual density factor::

      f_j = (dxi / 2 pi) * sum_k fhat_k exp(+i xi_k x_j)

* Discrete Parseval holds exactly:
  ``sum_j |f_j|^2 dx = (1/2 pi) sum_k |fhat_k|^2 dxi``.
* The space-time transform applies the same convention along each axis of a
  ``(n_times, n_modes)`` sample array, time axis first:
  ``F(tau, xi) = II u(t, x) exp(-i (tau t + xi x)) dt dx``.

Norms elsewhere integrate these density coefficients with plain Riemann
weights ``dxi`` and ``dtau * dxi``; on band-limited data that quadrature is
exact under this convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

TWO_PI = 2.0 * math.pi

__all__ = [
    "FrequencyGrid",
    "SpaceTimeGrid",
    "CutoffSpec",
    "bracket",
    "gamma",
    "theta",
    "theta_T",
    "dft_forward",
    "dft_inverse",
    "dft2_forward",
    "dft2_inverse",
]


def bracket(x):
    """Smooth magnitude weight ``1 + |x|``; accepts scalars or arrays."""
    return 1.0 + np.abs(x)


def gamma(xi):
    """Dispersion symbol ``sqrt(xi^2 + xi^4)`` of the linearized equation."""
    xi = np.asarray(xi, dtype=float)
    out = np.sqrt(xi * xi + xi ** 4)
    return float(out) if out.ndim == 0 else out


def _smooth_step(x: np.ndarray) -> np.ndarray:
    # C-infinity step: 0 for x <= 0, 1 for x >= 1, strictly monotone between,
    # built from the flat exponential bump exp(-1/x).
    out = np.zeros_like(x)
    hi = x >= 1.0
    mid = (x > 0.0) & ~hi
    xm = x[mid]
    a = np.exp(-1.0 / xm)
    b = np.exp(-1.0 / (1.0 - xm))
    out[mid] = a / (a + b)
    out[hi] = 1.0
    return out


def theta(t):
    """Smooth time cutoff: 1 on [-1, 1], 0 outside (-2, 2), smooth ramp between."""
    t_arr = np.asarray(t, dtype=float)
    out = _smooth_step(2.0 - np.abs(np.atleast_1d(t_arr)))
    return out.reshape(t_arr.shape) if t_arr.ndim else float(out[0])


def theta_T(t, T: float):
    """Rescaled cutoff ``theta(t / T)``: 1 on [-T, T], 0 outside (-2T, 2T)."""
    if not T > 0.0:
        raise ValueError(f"cutoff scale T must be positive, got {T}")
    return theta(np.asarray(t, dtype=float) / T)


@dataclass(frozen=True)
class CutoffSpec:
    """The smooth cutoff as an object; thin wrapper over :func:`theta`.

    ``ramp_sharpness`` is kept for future alternative mollifiers; the default
    construction is the canonical exp(-1/x) partition ramping on [1, 2].
    """

    ramp_sharpness: float = 1.0

    def value(self, t):
        return theta(t)

    def scaled(self, t, T: float):
        return theta_T(t, T)


def _symmetric_indices(n: int) -> np.ndarray:
    return np.arange(n) - (n - 1) // 2


@dataclass(frozen=True)
class FrequencyGrid:
    """Symmetric frequency grid dual to a periodic box [-L, L].

    ``n_modes`` must be odd so the node set is symmetric about 0 with the
    zero mode present exactly once.
    """

    half_width: float
    n_modes: int

    def __post_init__(self):
        if not self.half_width > 0.0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        if self.n_modes < 3 or self.n_modes % 2 == 0:
            raise ValueError(f"n_modes must be odd and >= 3, got {self.n_modes}")

    @property
    def spacing(self) -> float:
        return math.pi / self.half_width

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.n_modes

    @property
    def center_index(self) -> int:
        return (self.n_modes - 1) // 2

    @cached_property
    def nodes(self) -> np.ndarray:
        return _symmetric_indices(self.n_modes) * self.spacing

    @cached_property
    def x_nodes(self) -> np.ndarray:
        return -self.half_width + self.dx * np.arange(self.n_modes)


@dataclass(frozen=True)
class SpaceTimeGrid:
    """Tensor grid in (t, x) with the dual (tau, xi) grid it induces.

    The time window [t_min, t_max] is one period; nodes sit symmetrically
    about the window centre with both endpoints excluded, so for a window
    centred at 0 the node t = 0 is present.  ``n_times`` must be odd (and at
    least 5) so the tau nodes are symmetric about 0.
    """

    frequency: FrequencyGrid
    t_min: float
    t_max: float
    n_times: int

    def __post_init__(self):
        if not self.t_min < self.t_max:
            raise ValueError(f"need t_min < t_max, got [{self.t_min}, {self.t_max}]")
        if self.n_times < 5 or self.n_times % 2 == 0:
            raise ValueError(
                f"n_times must be odd and >= 5 (symmetric tau nodes), got {self.n_times}"
            )

    @property
    def period(self) -> float:
        return self.t_max - self.t_min

    @property
    def dt(self) -> float:
        return self.period / self.n_times

    @property
    def tau_spacing(self) -> float:
        return TWO_PI / self.period

    @cached_property
    def t_nodes(self) -> np.ndarray:
        centre = 0.5 * (self.t_min + self.t_max)
        return centre + _symmetric_indices(self.n_times) * self.dt

    @cached_property
    def tau_nodes(self) -> np.ndarray:
        return _symmetric_indices(self.n_times) * self.tau_spacing

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_times, self.frequency.n_modes)


def _reshape_along(vec: np.ndarray, ndim: int, axis: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = vec.shape[0]
    return vec.reshape(shape)


def _forward_along(values, axis, spacing, dual_spacing, offset):
    # fhat_k = spacing * sum_j f_j exp(-i om_k y_j) with y_j = offset + j*spacing
    # and om_k = k*dual_spacing, k symmetric; uses dual_spacing*spacing = 2pi/n.
    values = np.asarray(values, dtype=complex)
    n = values.shape[axis]
    spec = np.fft.fftshift(np.fft.fft(values, axis=axis), axes=axis)
    phase = np.exp(-1j * dual_spacing * offset * _symmetric_indices(n))
    return spacing * spec * _reshape_along(phase, values.ndim, axis)


def _inverse_along(coeffs, axis, dual_spacing, offset):
    # f_j = (dual_spacing / 2pi) * sum_k c_k exp(+i om_k y_j)
    coeffs = np.asarray(coeffs, dtype=complex)
    n = coeffs.shape[axis]
    phase = np.exp(1j * dual_spacing * offset * _symmetric_indices(n))
    g = np.fft.ifftshift(coeffs * _reshape_along(phase, coeffs.ndim, axis), axes=axis)
    return (dual_spacing * n / TWO_PI) * np.fft.ifft(g, axis=axis)


def dft_forward(samples, grid: FrequencyGrid) -> np.ndarray:
    """Spectral coefficients of spatial samples, module convention above."""
    samples = np.asarray(samples)
    if samples.shape[-1] != grid.n_modes:
        raise ValueError(
            f"sample count {samples.shape[-1]} does not match grid size {grid.n_modes}"
        )
    return _forward_along(samples, -1, grid.dx, grid.spacing, grid.x_nodes[0])


def dft_inverse(coefficients, grid: FrequencyGrid) -> np.ndarray:
    """Spatial samples from spectral coefficients; exact round trip."""
    coefficients = np.asarray(coefficients)
    if coefficients.shape[-1] != grid.n_modes:
        raise ValueError(
            f"coefficient count {coefficients.shape[-1]} does not match grid size {grid.n_modes}"
        )
    return _inverse_along(coefficients, -1, grid.spacing, grid.x_nodes[0])


def dft2_forward(samples, grid: SpaceTimeGrid) -> np.ndarray:
    """Space-time transform of (n_times, n_modes) samples u(t_j, x_k)."""
    samples = np.asarray(samples)
    if samples.shape != grid.shape:
        raise ValueError(f"sample shape {samples.shape} does not match grid {grid.shape}")
    out = _forward_along(samples, 1, grid.frequency.dx, grid.frequency.spacing,
                         grid.frequency.x_nodes[0])
    return _forward_along(out, 0, grid.dt, grid.tau_spacing, grid.t_nodes[0])


def dft2_inverse(coefficients, grid: SpaceTimeGrid) -> np.ndarray:
    """Inverse space-time transform back to samples on (t, x) nodes."""
    coefficients = np.asarray(coefficients)
    if coefficients.shape != grid.shape:
        raise ValueError(
            f"coefficient shape {coefficients.shape} does not match grid {grid.shape}"
        )
    out = _inverse_along(coefficients, 0, grid.tau_spacing, grid.t_nodes[0])
    return _inverse_along(out, 1, grid.frequency.spacing, grid.frequency.x_nodes[0])
