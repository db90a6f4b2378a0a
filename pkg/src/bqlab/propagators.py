"""Solution group of the linear equation u_tt - u_xx + u_xxxx = 0.

Per Fourier mode the equation is the oscillator uhat_tt + gamma(xi)^2 uhat = 0,
so the group is diagonal with multipliers cos(t gamma) and sin(t gamma)/gamma.
Initial data is (phi, psi) with u(0) = phi and u_t(0) = psi_x, i.e. the
velocity spectrum is i xi psihat(xi).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import SpectralField
from .grids import FrequencyGrid, gamma

__all__ = [
    "InitialData",
    "LinearTrajectory",
    "vc_apply",
    "vs_apply",
    "linear_solve",
    "mode_energy",
]

# Below this, sin(t*gamma)/gamma switches to its Taylor form to avoid cancellation.
_SMALL_GAMMA = 1e-8


@dataclass(frozen=True, eq=False)
class InitialData:
    """Spectra (phihat, psihat) of u(0) = phi and u_t(0) = psi_x."""

    phi_hat: SpectralField
    psi_hat: SpectralField

    def __post_init__(self):
        if self.phi_hat.grid != self.psi_hat.grid:
            raise ValueError("phi and psi must share one grid")

    @property
    def grid(self) -> FrequencyGrid:
        return self.phi_hat.grid

    def velocity_spectrum(self) -> np.ndarray:
        """Spectrum of u_t(0), namely i xi psihat(xi)."""
        return 1j * self.grid.nodes * self.psi_hat.coefficients


@dataclass(frozen=True, eq=False)
class LinearTrajectory:
    """States and velocities of the linear flow on a set of times."""

    grid: FrequencyGrid
    times: np.ndarray
    states: np.ndarray      # uhat(t_m, xi_k)
    velocities: np.ndarray  # d/dt uhat(t_m, xi_k)

    def state_at(self, index: int) -> SpectralField:
        return SpectralField(self.grid, self.states[index])


def _sin_over_gamma(t, g):
    """sin(t g)/g with the removable singularity resolved; broadcasts."""
    t = np.asarray(t, dtype=float)
    g = np.asarray(g, dtype=float)
    tg = t * g
    small = np.abs(g) < _SMALL_GAMMA
    safe = np.where(small, 1.0, g)
    direct = np.sin(tg) / safe
    taylor = t * (1.0 - tg * tg / 6.0)
    return np.where(small, taylor, direct)


def vc_apply(f: SpectralField, t: float) -> SpectralField:
    """Cosine propagator: multiply by cos(t gamma(xi))."""
    g = gamma(f.grid.nodes)
    return SpectralField(f.grid, f.coefficients * np.cos(t * g))


def vs_apply(f: SpectralField, t: float) -> SpectralField:
    """Sine propagator: multiply by sin(t gamma(xi))/gamma(xi).

    Acts on the spectrum it is given; the zero mode uses the limit value t.
    """
    g = gamma(f.grid.nodes)
    return SpectralField(f.grid, f.coefficients * _sin_over_gamma(t, g))


def linear_solve(data: InitialData, times) -> LinearTrajectory:
    """Evolve (phi, psi_x) data through the linear group at the given times."""
    times = np.asarray(times, dtype=float)
    grid = data.grid
    g = gamma(grid.nodes)[None, :]
    tg = times[:, None] * g
    cos_tg = np.cos(tg)
    sin_tg = np.sin(tg)
    sinc = _sin_over_gamma(times[:, None], g)
    phi = data.phi_hat.coefficients[None, :]
    vel0 = data.velocity_spectrum()[None, :]
    states = cos_tg * phi + sinc * vel0
    velocities = -g * sin_tg * phi + cos_tg * vel0
    return LinearTrajectory(grid, times, states, velocities)


def mode_energy(u: complex, ut: complex, xi: float) -> float:
    """Conserved oscillator energy |uhat|^2 + |uhat_t / gamma|^2 of one mode.

    Rejects xi = 0, where gamma vanishes; use |uhat_t| alone there.
    """
    if xi == 0.0:
        raise ValueError("mode_energy is undefined at xi = 0 (gamma vanishes)")
    g = gamma(xi)
    return float(np.abs(u) ** 2 + np.abs(ut / g) ** 2)
