"""Gauss-Legendre rules and local polynomial interpolation helpers."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import comb

__all__ = [
    "gauss_legendre",
    "panel_rule",
    "composite_gauss",
    "stencil_windows",
    "stencil_matrices",
]


@lru_cache(maxsize=64)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the order-point Gauss-Legendre rule on [-1, 1]."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def panel_rule(a: float, b: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [a, b]."""
    x, w = gauss_legendre(order)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * x, half * w


def composite_gauss(f, a: float, b: float, n_panels: int, order: int) -> float:
    """Composite Gauss-Legendre integral of a vectorized callable on [a, b]."""
    edges = np.linspace(a, b, n_panels + 1)
    x, w = gauss_legendre(order)
    half = 0.5 * np.diff(edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    nodes = mids[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return float(np.sum(weights * f(nodes)))


def _uniform_bary_weights(p: int) -> np.ndarray:
    # Barycentric weights of p equispaced nodes: (-1)^j * C(p-1, j).
    j = np.arange(p)
    return (-1.0) ** j * comb(p - 1, j)


def stencil_windows(n_nodes: int, centers: np.ndarray, stencil: int) -> np.ndarray:
    """Start index of the stencil window nearest each (fractional) center."""
    start = np.rint(centers).astype(int) - (stencil - 1) // 2
    return np.clip(start, 0, n_nodes - stencil)


def stencil_matrices(nodes: np.ndarray, targets: np.ndarray, stencil: int
                     ) -> tuple[np.ndarray, np.ndarray]:
    """Local Lagrange interpolation from uniform nodes to arbitrary targets.

    Returns ``(starts, coeffs)`` with ``starts`` of shape ``(n_targets,)`` and
    ``coeffs`` of shape ``(n_targets, stencil)`` such that
    ``value[i] = sum_j coeffs[i, j] * data[starts[i] + j]``.
    Targets coinciding with nodes are handled exactly.
    """
    nodes = np.asarray(nodes, dtype=float)
    targets = np.asarray(targets, dtype=float)
    n = nodes.shape[0]
    if not 2 <= stencil <= n:
        raise ValueError(f"stencil must be in [2, {n}], got {stencil}")
    dt = nodes[1] - nodes[0]
    frac = (targets - nodes[0]) / dt
    starts = stencil_windows(n, frac, stencil)
    # Local coordinates of targets relative to their stencil, in node units.
    local = frac - starts
    jj = np.arange(stencil)[None, :]
    diff = local[:, None] - jj
    wb = _uniform_bary_weights(stencil)[None, :]
    exact = np.abs(diff) < 1e-13
    safe = np.where(exact, 1.0, diff)
    lam = wb / safe
    coeffs = lam / np.sum(lam, axis=1, keepdims=True)
    hit = exact.any(axis=1)
    if np.any(hit):
        coeffs[hit] = np.where(exact[hit], 1.0, 0.0)
    return starts, coeffs
