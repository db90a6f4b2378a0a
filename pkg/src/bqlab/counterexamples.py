"""Growth-rate experiments behind the two negative results.

First experiment: the bilinear form evaluated on indicator data supported on
a thin rectangle hugging the parabola tau = xi^2 near frequency N.  The
weighted output norm grows like N^{-2s-a}, so it blows up whenever
-2s - a > 0, which is what rules the quadratic estimate out at low s.

Second experiment: the flow-map second derivative at the origin, probed with
frequency-localized data at +-N and the short time t = N^{-(2+eps)}.  Its H^s
size grows like N^{-2s-4-2eps}, unbounded for s < -2, so no twice
differentiable data-to-solution map can exist there.

Both experiments report fitted log-log slopes against the predicted exponent;
slope, not level, is the testable content, so pass thresholds carry a fixed
slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import SpectralField
from .grids import bracket, gamma
from .quadrature import gauss_legendre, panel_rule

__all__ = [
    "RotatedRectangle",
    "GrowthReport",
    "BilinearQuadrature",
    "SmallnessError",
    "make_AN",
    "polygon_overlap_area",
    "indicator_convolution",
    "bilinear_BN",
    "bilinear_slope",
    "illposedness_kernel",
    "illposedness_kernel_quadrature",
    "illposedness_norm",
    "illposedness_slope",
    "frechet_second_derivative",
    "support_interval",
    "minimal_smallness_N",
    "fit_loglog",
]

SLOPE_SLACK = 0.2
_COS_LOWER = 0.5  # short-time cosine factors must stay above this


class SmallnessError(RuntimeError):
    """The short-time cosine lower bounds fail at this N; increase N."""


# --------------------------------------------------------------------------
# Geometry
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RotatedRectangle:
    """Rectangle anchor + alpha * long + beta * short in the (tau, xi) plane."""

    anchor: tuple[float, float]
    dir_long: tuple[float, float]
    dir_short: tuple[float, float]
    len_long: float
    len_short: float

    def __post_init__(self):
        e = np.asarray(self.dir_long, dtype=float)
        f = np.asarray(self.dir_short, dtype=float)
        if abs(np.dot(e, e) - 1.0) > 1e-12 or abs(np.dot(f, f) - 1.0) > 1e-12:
            raise ValueError("direction vectors must be unit")
        if abs(np.dot(e, f)) > 1e-12:
            raise ValueError("directions must be orthogonal")
        if not (self.len_long > 0.0 and self.len_short > 0.0):
            raise ValueError("side lengths must be positive")

    @property
    def corners(self) -> np.ndarray:
        a = np.asarray(self.anchor, dtype=float)
        e = self.len_long * np.asarray(self.dir_long)
        f = self.len_short * np.asarray(self.dir_short)
        return np.array([a, a + e, a + e + f, a + f])

    @property
    def area(self) -> float:
        return self.len_long * self.len_short

    def negated(self) -> "RotatedRectangle":
        return RotatedRectangle(
            anchor=(-self.anchor[0], -self.anchor[1]),
            dir_long=(-self.dir_long[0], -self.dir_long[1]),
            dir_short=(-self.dir_short[0], -self.dir_short[1]),
            len_long=self.len_long,
            len_short=self.len_short,
        )

    def frame_coordinates(self, points: np.ndarray) -> np.ndarray:
        """(alpha, beta) coordinates of (tau, xi) points relative to the anchor."""
        rel = np.asarray(points, dtype=float) - np.asarray(self.anchor)
        return np.stack([rel @ np.asarray(self.dir_long),
                         rel @ np.asarray(self.dir_short)], axis=-1)

    def contains(self, points: np.ndarray, tol: float = 1e-12) -> np.ndarray:
        ab = self.frame_coordinates(points)
        return ((ab[..., 0] >= -tol) & (ab[..., 0] <= self.len_long + tol)
                & (ab[..., 1] >= -tol) & (ab[..., 1] <= self.len_short + tol))

    def minkowski_difference(self) -> np.ndarray:
        """Corners of {p - q : p, q in rectangle}: the support of the
        self-convolution of its indicator (a doubled centred copy)."""
        e = self.len_long * np.asarray(self.dir_long)
        f = self.len_short * np.asarray(self.dir_short)
        return np.array([-e - f, e - f, e + f, -e + f])


def make_AN(N: float) -> RotatedRectangle:
    """The thin rectangle along the parabola: anchor (N^2, N), long side N in
    direction (2N, 1)/sqrt(1+4N^2), short side 1/N in the orthogonal direction."""
    if not N >= 4.0:
        raise ValueError(f"N must be >= 4, got {N}")
    norm = math.sqrt(1.0 + 4.0 * N * N)
    return RotatedRectangle(
        anchor=(N * N, N),
        dir_long=(2.0 * N / norm, 1.0 / norm),
        dir_short=(-1.0 / norm, 2.0 * N / norm),
        len_long=N,
        len_short=1.0 / N,
    )


def _polygon_area_signed(poly: np.ndarray) -> float:
    x = poly[:, 0]
    y = poly[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _is_convex(poly: np.ndarray) -> bool:
    n = len(poly)
    sign = 0.0
    for i in range(n):
        a, b, c = poly[i], poly[(i + 1) % n], poly[(i + 2) % n]
        cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if abs(cross) < 1e-14:
            continue
        if sign == 0.0:
            sign = math.copysign(1.0, cross)
        elif math.copysign(1.0, cross) != sign:
            return False
    return True


def polygon_overlap_area(P, Q) -> float:
    """Exact intersection area of two convex polygons (half-plane clipping)."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    for name, poly in (("P", P), ("Q", Q)):
        if poly.ndim != 2 or poly.shape[1] != 2 or not 3 <= poly.shape[0] <= 8:
            raise ValueError(f"{name} must be a polygon with 3..8 vertices")
        if abs(_polygon_area_signed(poly)) < 1e-300:
            raise ValueError(f"{name} is degenerate (zero area)")
        if not _is_convex(poly):
            raise ValueError(f"{name} is not convex")
    if _polygon_area_signed(P) < 0.0:
        P = P[::-1]
    if _polygon_area_signed(Q) < 0.0:
        Q = Q[::-1]

    output = [tuple(v) for v in P]
    for i in range(len(Q)):
        if not output:
            return 0.0
        cp1 = Q[i]
        cp2 = Q[(i + 1) % len(Q)]
        input_list = output
        output = []

        def inside(p):
            return ((cp2[0] - cp1[0]) * (p[1] - cp1[1])
                    - (cp2[1] - cp1[1]) * (p[0] - cp1[0])) >= -1e-14

        def intersection(s, e):
            dc = (cp1[0] - cp2[0], cp1[1] - cp2[1])
            dp = (s[0] - e[0], s[1] - e[1])
            n1 = cp1[0] * cp2[1] - cp1[1] * cp2[0]
            n2 = s[0] * e[1] - s[1] * e[0]
            n3 = 1.0 / (dc[0] * dp[1] - dc[1] * dp[0])
            return ((n1 * dp[0] - n2 * dc[0]) * n3, (n1 * dp[1] - n2 * dc[1]) * n3)

        s = input_list[-1]
        for e in input_list:
            if inside(e):
                if not inside(s):
                    output.append(intersection(s, e))
                output.append(e)
            elif inside(s):
                output.append(intersection(s, e))
            s = e
    if len(output) < 3:
        return 0.0
    return abs(_polygon_area_signed(np.asarray(output)))


# --------------------------------------------------------------------------
# Growth reports
# --------------------------------------------------------------------------


@dataclass
class GrowthReport:
    """Per-N measurements of one experiment with the fitted log-log slope."""

    n_values: np.ndarray
    measured: np.ndarray
    slope: float
    intercept: float
    residual: float
    predicted_slope: float | None
    pass_flag: bool | None
    label: str = ""
    residual_flag: bool = False

    def __post_init__(self):
        n = np.asarray(self.n_values, dtype=float)
        if n.shape[0] < 4:
            raise ValueError("need at least 4 ladder values")
        if n.max() / n.min() < 8.0:
            raise ValueError("ladder must span at least a factor of 8")


def fit_loglog(x, y) -> tuple[float, float, float]:
    """Least-squares slope, intercept and rms residual of log y against log x."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = float(np.sqrt(np.mean((ly - (slope * lx + intercept)) ** 2)))
    return float(slope), float(intercept), resid


def _growth_report(n_list, values, predicted, label, enforce,
                   residual_threshold=0.5) -> GrowthReport:
    slope, intercept, resid = fit_loglog(n_list, values)
    pass_flag = bool(slope >= predicted - SLOPE_SLACK) if enforce else None
    return GrowthReport(
        n_values=np.asarray(n_list, dtype=float),
        measured=np.asarray(values, dtype=float),
        slope=slope,
        intercept=intercept,
        residual=resid,
        predicted_slope=predicted,
        pass_flag=pass_flag,
        label=label,
        residual_flag=bool(resid > residual_threshold),
    )


# --------------------------------------------------------------------------
# Bilinear experiment
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BilinearQuadrature:
    """Node counts of the bilinear experiment: tensor Gauss rule on the
    rectangle (long x short directions) and the output-grid resolution
    (one cell per unit of N along tau, fixed count along xi)."""

    inner_long: int = 64
    inner_short: int = 8
    outer_xi: int = 64
    pad_cells: int = 1

    def __post_init__(self):
        if min(self.inner_long, self.inner_short) < 2 or self.outer_xi < 8:
            raise ValueError("quadrature spec too coarse")


def _output_grid(rect: RotatedRectangle, quad: BilinearQuadrature, N: float):
    support = rect.minkowski_difference()
    tau_lo, xi_lo = support.min(axis=0)
    tau_hi, xi_hi = support.max(axis=0)
    n_tau = max(8, int(round(N)))
    n_xi = quad.outer_xi
    dtau = (tau_hi - tau_lo) / n_tau
    dxi = (xi_hi - xi_lo) / n_xi
    tau_lo -= quad.pad_cells * dtau
    xi_lo -= quad.pad_cells * dxi
    n_tau += 2 * quad.pad_cells
    n_xi += 2 * quad.pad_cells
    tau_c = tau_lo + dtau * (np.arange(n_tau) + 0.5)
    xi_c = xi_lo + dxi * (np.arange(n_xi) + 0.5)
    covers = (tau_c[0] - 0.5 * dtau <= support[:, 0].min()
              and tau_c[-1] + 0.5 * dtau >= support[:, 0].max()
              and xi_c[0] - 0.5 * dxi <= support[:, 1].min()
              and xi_c[-1] + 0.5 * dxi >= support[:, 1].max())
    if not covers:
        raise RuntimeError("output grid fails to cover the convolution support")
    return tau_c, xi_c, dtau, dxi


def _inner_integrals(rect: RotatedRectangle, tau_pts: np.ndarray,
                     xi_pts: np.ndarray, s: float, b: float,
                     quad: BilinearQuadrature, unit_weights: bool) -> np.ndarray:
    """Convolution integral at output points, in rectangle coordinates.

    The integration region for output shift (tau, xi) is the overlap of the
    rectangle with its translate, which in the rectangle's own frame is again
    an axis-aligned box, so the tensor Gauss rule sees a smooth integrand on
    its exact support (no mask).
    """
    e = np.asarray(rect.dir_long)
    f = np.asarray(rect.dir_short)
    anchor = np.asarray(rect.anchor)
    shift_a = tau_pts * e[0] + xi_pts * e[1]
    shift_b = tau_pts * f[0] + xi_pts * f[1]
    a_lo = np.maximum(0.0, shift_a)
    a_hi = np.minimum(rect.len_long, rect.len_long + shift_a)
    b_lo = np.maximum(0.0, shift_b)
    b_hi = np.minimum(rect.len_short, rect.len_short + shift_b)
    out = np.zeros_like(tau_pts)
    live = (a_lo < a_hi) & (b_lo < b_hi)
    if not np.any(live):
        return out
    idx = np.nonzero(live)[0]
    gx_a, gw_a = gauss_legendre(quad.inner_long)
    gx_b, gw_b = gauss_legendre(quad.inner_short)
    ha = 0.5 * (a_hi[idx] - a_lo[idx])
    hb = 0.5 * (b_hi[idx] - b_lo[idx])
    alpha = 0.5 * (a_hi[idx] + a_lo[idx])[:, None] + ha[:, None] * gx_a[None, :]
    beta = 0.5 * (b_hi[idx] + b_lo[idx])[:, None] + hb[:, None] * gx_b[None, :]
    wgt = (ha[:, None, None] * gw_a[None, :, None]
           * hb[:, None, None] * gw_b[None, None, :])
    tau1 = anchor[0] + alpha[:, :, None] * e[0] + beta[:, None, :] * f[0]
    xi1 = anchor[1] + alpha[:, :, None] * e[1] + beta[:, None, :] * f[1]
    if unit_weights:
        integrand = np.ones_like(tau1)
    else:
        tau_pt = tau_pts[idx][:, None, None]
        xi_pt = xi_pts[idx][:, None, None]
        integrand = (bracket(xi1) ** (-s)
                     * bracket(xi_pt - xi1) ** (-s)
                     / (bracket(tau_pt - tau1 + (xi_pt - xi1) ** 2) ** b
                        * bracket(tau1 - xi1 ** 2) ** b))
    out[idx] = np.sum(wgt * integrand, axis=(1, 2))
    return out


def indicator_convolution(N: float, points,
                          quad: BilinearQuadrature = BilinearQuadrature()) -> np.ndarray:
    """Self-convolution of the rectangle indicator at given (tau, xi) points.

    Equals the overlap area of the rectangle with its translate; serves as the
    quadrature-vs-geometry cross-check target.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    rect = make_AN(N)
    return _inner_integrals(rect, pts[:, 0], pts[:, 1], 0.0, 0.0, quad,
                            unit_weights=True)


def bilinear_BN(N: float, s: float, a: float, b: float,
                quad: BilinearQuadrature = BilinearQuadrature()) -> float:
    """Discrete weighted L2 norm of the bilinear output over its support.

    Output weight |xi|^2 <xi>^s / (gamma(xi) <tau - xi^2>^a), inner integral
    over the rectangle pair; requires N >= 4 and a < 1/2 < b.
    """
    if not (a < 0.5 < b):
        raise ValueError(f"need a < 1/2 < b, got a={a}, b={b}")
    rect = make_AN(N)
    tau_c, xi_c, dtau, dxi = _output_grid(rect, quad, N)
    TT, XX = np.meshgrid(tau_c, xi_c, indexing="ij")
    inner = _inner_integrals(rect, TT.ravel(), XX.ravel(), s, b, quad,
                             unit_weights=False).reshape(TT.shape)
    outer = np.zeros_like(inner)
    nz = xi_c != 0.0
    g = gamma(xi_c[nz])
    outer[:, nz] = (xi_c[nz] ** 2 * bracket(xi_c[nz]) ** s
                    / (g * bracket(TT[:, nz] - xi_c[None, nz] ** 2) ** a))
    total = np.sum((outer * inner) ** 2) * dtau * dxi
    return float(np.sqrt(total))


def bilinear_slope(n_list, s: float, a: float, b: float,
                   quad: BilinearQuadrature = BilinearQuadrature()) -> GrowthReport:
    """Fitted growth rate of the bilinear output norm along an N ladder.

    Predicted exponent -2s - a; the pass flag is withheld (report-only) when
    the prediction is within the slope slack of flat.
    """
    values = [bilinear_BN(N, s, a, b, quad) for N in n_list]
    predicted = -2.0 * s - a
    return _growth_report(n_list, values, predicted, "bilinear",
                          enforce=predicted > SLOPE_SLACK)


# --------------------------------------------------------------------------
# Ill-posedness experiment
# --------------------------------------------------------------------------


def _cos_diff_ratio(t, g0, u):
    """[cos(t g0) - cos(t u)] / (u - g0), stable near the removable point."""
    t = np.asarray(t, dtype=float)
    g0 = np.asarray(g0, dtype=float)
    u = np.asarray(u, dtype=float)
    eps = u - g0
    x = t * eps
    small = np.abs(x) < 1e-4
    a = t * g0
    safe_eps = np.where(small, 1.0, eps)
    direct = (np.cos(a) - np.cos(t * u)) / safe_eps
    x2 = x * x
    series = (np.sin(a) * t * (1.0 - x2 / 6.0 + x2 * x2 / 120.0)
              + np.cos(a) * t * (x / 2.0 - x * x2 / 24.0 + x2 * x2 * x / 720.0))
    return np.where(small, series, direct)


def illposedness_kernel(t, xi, xi1):
    """Closed form of I_0^t sin((t-t') g(xi)) cos(t' g(xi-xi1)) cos(t' g(xi1)) dt'.

    Product-to-sum expansion of the cosine pair followed by elementary
    antiderivatives; the equal-frequency branches are handled by series.
    Broadcasts over array arguments.
    """
    t = np.asarray(t, dtype=float)
    xi = np.asarray(xi, dtype=float)
    xi1 = np.asarray(xi1, dtype=float)
    g0 = gamma(xi)
    g1 = gamma(xi - xi1)
    g2 = gamma(xi1)
    plus = g1 + g2
    minus = g1 - g2
    out = 0.25 * (_cos_diff_ratio(t, g0, minus) + _cos_diff_ratio(t, g0, -minus)
                  + _cos_diff_ratio(t, g0, plus) + _cos_diff_ratio(t, g0, -plus))
    return float(out) if out.ndim == 0 else out


def illposedness_kernel_quadrature(t: float, xi: float, xi1: float,
                                   order: int = 12) -> float:
    """Independent oracle for the kernel: composite Gauss-Legendre in t'."""
    g0 = gamma(xi)
    g1 = gamma(xi - xi1)
    g2 = gamma(xi1)
    if t == 0.0:
        return 0.0
    cycles = abs(t) * (g0 + g1 + g2) / (2.0 * math.pi)
    n_panels = max(8, int(math.ceil(4.0 * cycles)))
    edges = np.linspace(0.0, t, n_panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        x, w = panel_rule(lo, hi, order)
        total += float(np.sum(w * np.sin((t - x) * g0)
                              * np.cos(x * g1) * np.cos(x * g2)))
    return total


def support_interval(N: float, xi: float) -> tuple[float, float]:
    """The xi1 interval pairing the two data bands at output frequency xi:
    [N+1, N+2] intersected with [xi + N - 1, xi + N]."""
    lo = max(N + 1.0, xi + N - 1.0)
    hi = min(N + 2.0, xi + N)
    return lo, hi


def _check_smallness(N: float, t: float) -> None:
    worst = max(gamma(N + 2.0), gamma(N))
    if t * worst > math.acos(_COS_LOWER):
        raise SmallnessError(
            f"cosine lower bound fails at N={N}: t*gamma_max = {t * worst:.3f} "
            f"> {math.acos(_COS_LOWER):.3f}")


def illposedness_norm(N: float, s: float, eps: float, *, n_xi: int = 33,
                      n_xi1: int = 33) -> float:
    """H^s size over xi in [3/2, 5/2] of the second-derivative output.

    Data bands N^{-s} * 1_{[-N, -N+1]} and N^{-s} * 1_{[N+1, N+2]}, probed at
    time t = N^{-(2+eps)}.  The short-time cosine bounds are checked, not
    assumed; violation raises :class:`SmallnessError`.
    """
    t = N ** -(2.0 + eps)
    _check_smallness(N, t)
    xi_nodes, xi_w = panel_rule(1.5, 2.5, n_xi)
    vals = np.zeros(n_xi)
    for i, xi in enumerate(xi_nodes):
        lo, hi = support_interval(N, xi)
        if hi <= lo:
            continue
        x1, w1 = panel_rule(lo, hi, n_xi1)
        kern = illposedness_kernel(t, xi, x1)
        inner = float(np.sum(w1 * kern))
        vals[i] = (xi ** 2 / (8.0 * gamma(xi))) * N ** (-2.0 * s) * abs(inner)
    total = float(np.sum(xi_w * bracket(xi_nodes) ** (2.0 * s) * vals ** 2))
    return math.sqrt(total)


def minimal_smallness_N(s: float, eps: float, candidates=(8, 16, 32, 64, 128)) -> float:
    """Smallest ladder N where the short-time cosine bounds hold."""
    for N in candidates:
        try:
            _check_smallness(float(N), float(N) ** -(2.0 + eps))
        except SmallnessError:
            continue
        return float(N)
    raise SmallnessError(f"no admissible N found among {candidates}")


def illposedness_slope(n_list, s: float, eps: float, *, n_xi: int = 33,
                       n_xi1: int = 33) -> GrowthReport:
    """Fitted growth rate of the ill-posedness norm along an N ladder.

    Predicted exponent -2s - 4 - 2eps; enforcement requires s < -2 with the
    prediction safely positive, otherwise the report is informational.
    """
    values = [illposedness_norm(N, s, eps, n_xi=n_xi, n_xi1=n_xi1) for N in n_list]
    predicted = -2.0 * s - 4.0 - 2.0 * eps
    enforce = s < -2.0 and predicted > SLOPE_SLACK
    return _growth_report(n_list, values, predicted, "illposed", enforce=enforce)


def frechet_second_derivative(phi: SpectralField, rho: SpectralField,
                              t: float) -> SpectralField:
    """Spectrum of 2 I_0^t V_s(t-t') (V_c(t') phi * V_c(t') rho)_xx dt'.

    Evaluated through the closed-form kernel: a kernel-weighted discrete
    convolution of the two spectra (density convention, so the product rule
    carries 1/(2 pi)).
    """
    if phi.grid != rho.grid:
        raise ValueError("fields must share one grid")
    grid = phi.grid
    xi = grid.nodes
    n = grid.n_modes
    if t == 0.0:
        return SpectralField.zeros(grid)
    # conv[k] = sum_j phihat(xi_k - xi_j) rhohat(xi_j) K(t, xi_k, xi_j) dxi,
    # with phihat zero off the grid band.
    K = illposedness_kernel(t, xi[:, None], xi[None, :])
    pr = rho.coefficients[None, :] * K
    m = grid.center_index
    kk = np.arange(n)
    idx = kk[:, None] - kk[None, :] + m
    valid = (idx >= 0) & (idx < n)
    phi_at = np.where(valid, phi.coefficients[np.clip(idx, 0, n - 1)], 0.0)
    out = np.sum(phi_at * pr, axis=1) * grid.spacing
    g = gamma(xi)
    factor = np.zeros(n)
    nz = xi != 0.0
    factor[nz] = -(xi[nz] ** 2) / (math.pi * g[nz])
    return SpectralField(grid, factor * out)
