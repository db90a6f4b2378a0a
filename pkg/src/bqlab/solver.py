"""Fixed-point solver for the quadratic Boussinesq integral equation.

The solved equation is u_tt - u_xx + u_xxxx + (u^2)_xx = 0 with data
u(0) = phi, u_t(0) = psi_x.  Per mode the Duhamel representation reads

    uhat(t) = cos(t g) phihat + sin(t g)/g (i xi psihat)
              - I_0^t sin((t-t') g)/g * ((u^2)_xx)^hat(t') dt',   g = gamma(xi),

and the cutoff form iterated here multiplies the free part by theta(t) and
the integral term by theta_T(t), which makes the fixed point global in time
while agreeing with the true solution on [0, T].

The iteration runs on a uniform node set covering the window [-2, 2] (one
admissible global-in-time extension for the space-time norm diagnostic).  The
Duhamel integrals are evaluated by composite Gauss-Legendre panels between
nodes with the nonlinearity history interpolated by local barycentric
stencils, accumulated cumulatively from t = 0 outward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fields import SpaceTimeField, SpectralField, _hs_norm_rows, _xsb_weight, hs_norm
from .grids import (
    FrequencyGrid,
    SpaceTimeGrid,
    _forward_along,
    _inverse_along,
    dft_forward,
    dft_inverse,
    gamma,
    theta,
    theta_T,
)
from .propagators import InitialData, _sin_over_gamma, linear_solve
from .quadrature import _uniform_bary_weights, gauss_legendre, stencil_matrices

__all__ = [
    "SolverConfig",
    "SolutionTrajectory",
    "PicardNonConvergence",
    "ReferenceInstability",
    "nonlinearity_spectrum",
    "duhamel_apply",
    "picard_solve",
    "reference_solve",
    "lipschitz_probe",
    "time_localization_exponent",
]

_SMALL_GAMMA = 1e-8
_WINDOW_FACTOR = 2.0


class PicardNonConvergence(RuntimeError):
    """Iteration failed to contract; the data is too large for this T."""

    def __init__(self, message: str, diffs: list[float]):
        super().__init__(message)
        self.diffs = diffs


class ReferenceInstability(RuntimeError):
    """Reference integrator detected norm explosion."""


@dataclass
class SolverConfig:
    """Parameters of the contraction solve.

    The exponent window is the one under which the quadratic estimate closes:
    1/4 < a < 1/2 < b, with |s| < a/2 when s < 0, and a + b <= 1 so the
    time-localization gain T^delta with delta = 1 - (a + b) is not negative.
    """

    s: float
    a: float
    b: float
    T: float
    n_times: int = 513
    quadrature_order: int = 8
    max_iterations: int = 40
    tolerance: float = 1e-10
    dealias: bool = True

    def __post_init__(self):
        if not (0.25 < self.a < 0.5):
            raise ValueError(f"a must lie in (1/4, 1/2), got {self.a}")
        if not self.b > 0.5:
            raise ValueError(f"b must exceed 1/2, got {self.b}")
        if self.s < 0.0 and not abs(self.s) < self.a / 2.0:
            raise ValueError(f"|s| < a/2 violated: s={self.s}, a={self.a}")
        if 1.0 - (self.a + self.b) < -1e-12:
            raise ValueError(f"a + b must not exceed 1, got {self.a + self.b}")
        if not (0.0 < self.T <= 1.0):
            raise ValueError(f"T must lie in (0, 1], got {self.T}")
        if self.n_times < 5 or self.n_times % 2 == 0:
            raise ValueError(f"n_times must be odd and >= 5, got {self.n_times}")
        if self.quadrature_order < 2:
            raise ValueError("quadrature_order must be >= 2")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be positive")

    @property
    def delta(self) -> float:
        return max(0.0, 1.0 - (self.a + self.b))


@dataclass
class SolutionTrajectory:
    """Solver output: states on the time nodes plus contraction diagnostics."""

    grid: FrequencyGrid
    times: np.ndarray
    states: np.ndarray
    iteration_xsb_diffs: list[float] = field(default_factory=list)
    iteration_hs_diffs: list[float] = field(default_factory=list)
    contraction_ratios: list[float] = field(default_factory=list)
    contraction_ratio: float | None = None
    contraction_constant: float = 0.0
    radius: float = 0.0
    time_horizon: float = 0.0
    time_condition_ok: bool = True
    fixed_point_residual: float = 0.0
    converged: bool = True

    def state_at(self, index: int) -> SpectralField:
        return SpectralField(self.grid, self.states[index])

    def restricted(self, t_lo: float, t_hi: float) -> tuple[np.ndarray, np.ndarray]:
        mask = (self.times >= t_lo - 1e-12) & (self.times <= t_hi + 1e-12)
        return self.times[mask], self.states[mask]


def _dealias_size(n: int) -> int:
    # Smallest odd size holding the full product band of an n-mode quadratic.
    m = (n - 1) // 2
    fine = 3 * m + 1
    return fine if fine % 2 == 1 else fine + 1


def _nonlinearity_rows(states: np.ndarray, grid: FrequencyGrid, dealias: bool) -> np.ndarray:
    """-xi^2 * (u^2)^hat for each row of uhat coefficients."""
    states = np.atleast_2d(states)
    n = grid.n_modes
    if dealias:
        n_fine = _dealias_size(n)
        fine = FrequencyGrid(grid.half_width, n_fine)
        pad = np.zeros((states.shape[0], n_fine), dtype=complex)
        lo = (n_fine - n) // 2
        pad[:, lo:lo + n] = states
        u = _inverse_along(pad, 1, fine.spacing, fine.x_nodes[0])
        sq = _forward_along(u * u, 1, fine.dx, fine.spacing, fine.x_nodes[0])
        sq = sq[:, lo:lo + n]
    else:
        u = _inverse_along(states, 1, grid.spacing, grid.x_nodes[0])
        sq = _forward_along(u * u, 1, grid.dx, grid.spacing, grid.x_nodes[0])
    return -(grid.nodes ** 2)[None, :] * sq


def nonlinearity_spectrum(f: SpectralField, dealias: bool = True) -> SpectralField:
    """Spectrum of (u^2)_xx, computed pseudospectrally.

    With dealiasing on, the retained band of the product is the exact
    discrete convolution (zero padding past the 2/3 rule).
    """
    rows = _nonlinearity_rows(f.coefficients[None, :], f.grid, dealias)
    return SpectralField(f.grid, rows[0])


def duhamel_apply(history, times, t: float, *, quadrature_order: int = 8,
                  dealias: bool = True) -> SpectralField:
    """I_0^t sin((t-t') gamma)/gamma * F(t') dt' with F the nonlinearity of the history.

    ``history`` is a sequence of SpectralFields on the sorted ``times`` nodes,
    which must cover [min(0, t), max(0, t)].  The zero mode uses the limit
    kernel (t - t').
    """
    times = np.asarray(times, dtype=float)
    if len(history) != times.shape[0]:
        raise ValueError("history length does not match times")
    grid = history[0].grid
    lo, hi = min(0.0, t), max(0.0, t)
    if times[0] > lo + 1e-12 or times[-1] < hi - 1e-12:
        raise ValueError(f"history [{times[0]}, {times[-1]}] does not cover [{lo}, {hi}]")
    if t == 0.0:
        return SpectralField.zeros(grid)

    states = np.stack([h.coefficients for h in history])
    F = _nonlinearity_rows(states, grid, dealias)

    dt_nodes = float(np.median(np.diff(times)))
    n_panels = max(1, int(math.ceil(abs(t) / (2.0 * dt_nodes))))
    edges = np.linspace(0.0, t, n_panels + 1)
    gx, gw = gauss_legendre(quadrature_order)
    half = 0.5 * np.diff(edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    qnodes = (mids[:, None] + half[:, None] * gx[None, :]).ravel()
    qweights = (half[:, None] * gw[None, :]).ravel()

    stencil = min(max(4, quadrature_order), times.shape[0])
    starts, coeffs = stencil_matrices(times, qnodes, stencil)
    idx = starts[:, None] + np.arange(stencil)[None, :]
    Fq = np.einsum("qp,qpk->qk", coeffs, F[idx])

    g = gamma(grid.nodes)
    kern = _sin_over_gamma((t - qnodes)[:, None], g[None, :])
    out = np.sum(qweights[:, None] * kern * Fq, axis=0)
    return SpectralField(grid, out)


@dataclass
class _DuhamelPlan:
    """Precomputed interpolation and kernel tensors on a fixed node set."""

    st_grid: SpaceTimeGrid
    centre: int
    idx: np.ndarray       # (n_int, stencil) gather indices into node history
    interp: np.ndarray    # (n_int, q, stencil) interpolation matrices
    kc: np.ndarray        # (n_int, q, n_modes) weights * cos(tq * gamma)
    ks: np.ndarray        # (n_int, q, n_modes) weights * sin(tq * gamma)
    w_plain: np.ndarray   # (n_int, q) quadrature weights
    w_tq: np.ndarray      # (n_int, q) weights * t_q
    sin_tg: np.ndarray    # (n_times, n_modes)
    cos_tg: np.ndarray
    small: np.ndarray     # modes with gamma below the cancellation cutoff
    inv_g: np.ndarray     # 1/gamma with small modes masked to 0


def _build_plan(grid: FrequencyGrid, config: SolverConfig) -> _DuhamelPlan:
    half = _WINDOW_FACTOR * max(config.T, 1.0)
    st_grid = SpaceTimeGrid(grid, -half, half, config.n_times)
    t = st_grid.t_nodes
    centre = (config.n_times - 1) // 2

    q = config.quadrature_order
    gx, gw = gauss_legendre(q)
    lo = t[:-1]
    hi = t[1:]
    mids = 0.5 * (lo + hi)
    halves = 0.5 * (hi - lo)
    qnodes = mids[:, None] + halves[:, None] * gx[None, :]   # (n_int, q)
    w = halves[:, None] * gw[None, :]

    # One stencil window per interval, centred on it; Lagrange coefficients of
    # the interval's quadrature nodes on that window.
    stencil = min(max(4, q), config.n_times)
    n_int = config.n_times - 1
    starts = np.clip(np.arange(n_int) - (stencil - 2) // 2, 0, config.n_times - stencil)
    local = (qnodes - t[starts][:, None]) / st_grid.dt       # (n_int, q)
    jj = np.arange(stencil)[None, None, :]
    diff = local[:, :, None] - jj
    wb = _uniform_bary_weights(stencil)[None, None, :]
    exact = np.abs(diff) < 1e-13
    lam = wb / np.where(exact, 1.0, diff)
    interp = lam / np.sum(lam, axis=2, keepdims=True)
    hit = exact.any(axis=2)
    if np.any(hit):
        interp[hit] = np.where(exact[hit], 1.0, 0.0)
    gather = starts[:, None] + np.arange(stencil)[None, :]

    g = gamma(grid.nodes)
    tg = qnodes[:, :, None] * g[None, None, :]
    kc = w[:, :, None] * np.cos(tg)
    ks = w[:, :, None] * np.sin(tg)
    node_tg = t[:, None] * g[None, :]
    small = g < _SMALL_GAMMA
    inv_g = np.where(small, 0.0, 1.0 / np.where(small, 1.0, g))
    return _DuhamelPlan(
        st_grid=st_grid,
        centre=centre,
        idx=gather,
        interp=interp,
        kc=kc,
        ks=ks,
        w_plain=w,
        w_tq=w * qnodes,
        sin_tg=np.sin(node_tg),
        cos_tg=np.cos(node_tg),
        small=small,
        inv_g=inv_g,
    )


def _cumulative(deltas: np.ndarray, centre: int) -> np.ndarray:
    """Signed cumulative integral from the centre node given interval increments."""
    n_int, n_modes = deltas.shape
    out = np.zeros((n_int + 1, n_modes), dtype=deltas.dtype)
    out[centre + 1:] = np.cumsum(deltas[centre:], axis=0)
    out[:centre] = -np.cumsum(deltas[:centre][::-1], axis=0)[::-1]
    return out


def _duhamel_all_nodes(F: np.ndarray, plan: _DuhamelPlan) -> np.ndarray:
    """Duhamel integral at every node for a nonlinearity history F."""
    Fq = np.einsum("iqp,ipk->iqk", plan.interp, F[plan.idx])
    dC = np.einsum("iqk,iqk->ik", plan.kc, Fq)
    dS = np.einsum("iqk,iqk->ik", plan.ks, Fq)
    C = _cumulative(dC, plan.centre)
    S = _cumulative(dS, plan.centre)
    out = (plan.sin_tg * C - plan.cos_tg * S) * plan.inv_g[None, :]
    if np.any(plan.small):
        cols = np.where(plan.small)[0]
        dC0 = np.einsum("iq,iqk->ik", plan.w_plain, Fq[:, :, cols])
        dS0 = np.einsum("iq,iqk->ik", plan.w_tq, Fq[:, :, cols])
        C0 = _cumulative(dC0, plan.centre)
        S0 = _cumulative(dS0, plan.centre)
        out[:, cols] = plan.st_grid.t_nodes[:, None] * C0 - S0
    return out


def _window_xsb_norm(states: np.ndarray, plan: _DuhamelPlan, s: float, b: float) -> float:
    g = plan.st_grid
    spec = _forward_along(states, 0, g.dt, g.tau_spacing, g.t_nodes[0])
    w = _xsb_weight(g, s, b, gamma(g.frequency.nodes))
    return float(np.sqrt(np.sum(w * np.abs(spec) ** 2) * g.tau_spacing
                         * g.frequency.spacing))


def picard_solve(data: InitialData, config: SolverConfig) -> SolutionTrajectory:
    """Iterate the cutoff integral map to its fixed point.

    Raises :class:`PicardNonConvergence` when the iterate differences fail to
    fall below tolerance within ``max_iterations``, or grow outright.
    """
    grid = data.grid
    plan = _build_plan(grid, config)
    t = plan.st_grid.t_nodes

    lin = linear_solve(data, t).states
    theta_lin = theta(t)[:, None] * lin
    cut_T = theta_T(t, config.T)[:, None]

    u = np.zeros_like(theta_lin)
    xsb_diffs: list[float] = []
    hs_diffs: list[float] = []
    ratios: list[float] = []
    converged = False
    for _ in range(config.max_iterations):
        F = _nonlinearity_rows(u, grid, config.dealias)
        u_new = theta_lin - cut_T * _duhamel_all_nodes(F, plan)
        diff = u_new - u
        xsb_diffs.append(_window_xsb_norm(diff, plan, config.s, config.b))
        hs_diffs.append(float(np.max(_hs_norm_rows(diff, grid, config.s))))
        u = u_new
        if len(xsb_diffs) >= 2 and xsb_diffs[-2] > 0.0:
            ratios.append(xsb_diffs[-1] / xsb_diffs[-2])
        if xsb_diffs[-1] < config.tolerance and hs_diffs[-1] < config.tolerance:
            converged = True
            break
        if len(xsb_diffs) >= 3 and xsb_diffs[-1] > 5.0 * xsb_diffs[0]:
            raise PicardNonConvergence(
                "iterate differences are growing; shrink T or the data", xsb_diffs)
    if not converged:
        raise PicardNonConvergence(
            f"no convergence within {config.max_iterations} iterations "
            f"(last difference {xsb_diffs[-1]:.3e})", xsb_diffs)

    # One more application of the map measures the fixed-point residual.
    F = _nonlinearity_rows(u, grid, config.dealias)
    residual_states = theta_lin - cut_T * _duhamel_all_nodes(F, plan) - u
    residual = _window_xsb_norm(residual_states, plan, config.s, config.b)

    first = xsb_diffs[0]
    data_size = hs_norm(data.phi_hat, config.s) + hs_norm(data.psi_hat, config.s - 1.0)
    c_est = first / data_size if data_size > 0.0 else 0.0
    radius = 2.0 * first
    tail = ratios[-5:]
    ratio = float(np.exp(np.mean(np.log(tail)))) if tail else None
    cond_ok = 4.0 * c_est * radius * config.T ** config.delta < 1.0 if radius > 0.0 else True

    return SolutionTrajectory(
        grid=grid,
        times=t,
        states=u,
        iteration_xsb_diffs=xsb_diffs,
        iteration_hs_diffs=hs_diffs,
        contraction_ratios=ratios,
        contraction_ratio=ratio,
        contraction_constant=c_est,
        radius=radius,
        time_horizon=config.T,
        time_condition_ok=cond_ok,
        fixed_point_residual=residual,
        converged=True,
    )


def reference_solve(data: InitialData, T: float, n_steps: int, *,
                    include_nonlinearity: bool = True, dealias: bool = True,
                    explosion_bound: float = 1e8) -> SolutionTrajectory:
    """Independent oracle: classical RK4 on the first-order mode system.

    uhat' = vhat,  vhat' = -gamma^2 uhat + xi^2 (u^2)^hat.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    grid = data.grid
    g2 = gamma(grid.nodes) ** 2

    def rhs(u, v):
        dv = -g2 * u
        if include_nonlinearity:
            dv = dv - _nonlinearity_rows(u[None, :], grid, dealias)[0]
        return v, dv

    h = T / n_steps
    u = data.phi_hat.coefficients.copy()
    v = data.velocity_spectrum()
    times = np.linspace(0.0, T, n_steps + 1)
    states = np.empty((n_steps + 1, grid.n_modes), dtype=complex)
    states[0] = u
    for m in range(n_steps):
        k1u, k1v = rhs(u, v)
        k2u, k2v = rhs(u + 0.5 * h * k1u, v + 0.5 * h * k1v)
        k3u, k3v = rhs(u + 0.5 * h * k2u, v + 0.5 * h * k2v)
        k4u, k4v = rhs(u + h * k3u, v + h * k3v)
        u = u + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if not np.all(np.isfinite(u.real)) or np.max(np.abs(u)) > explosion_bound:
            raise ReferenceInstability(f"norm explosion at step {m + 1} (t={times[m + 1]:.4g})")
        states[m + 1] = u
    return SolutionTrajectory(grid=grid, times=times, states=states)


def lipschitz_probe(data1: InitialData, data2: InitialData, config: SolverConfig) -> float:
    """Difference quotient of the data-to-solution map on [0, T].

    sup_t H^s(u1 - u2) over (H^s(phi1-phi2)^2 + H^{s-1}(psi1-psi2)^2)^{1/2};
    identical data returns 0 by convention.
    """
    dphi = data1.phi_hat - data2.phi_hat
    dpsi = data1.psi_hat - data2.psi_hat
    denom = math.sqrt(hs_norm(dphi, config.s) ** 2 + hs_norm(dpsi, config.s - 1.0) ** 2)
    if denom == 0.0:
        return 0.0
    u1 = picard_solve(data1, config)
    u2 = picard_solve(data2, config)
    _, s1 = u1.restricted(0.0, config.T)
    _, s2 = u2.restricted(0.0, config.T)
    num = float(np.max(_hs_norm_rows(s1 - s2, data1.grid, config.s)))
    return num / denom


def _h_t_norm(values: np.ndarray, tau: np.ndarray, dt: float, dtau: float,
              t0: float, b: float) -> float:
    spec = _forward_along(values, -1, dt, dtau, t0)
    w = (1.0 + np.abs(tau)) ** (2.0 * b)
    return float(np.sqrt(np.sum(w * np.abs(spec) ** 2) * dtau))


def time_localization_exponent(b: float, b_prime: float, sample_count: int, *,
                               seed: int = 0, n_time: int = 2049,
                               window: float = 4.0,
                               T_ladder=(1.0, 0.5, 0.25, 0.125)) -> float:
    """Fitted T-exponent of the cutoff time-integration operator quotient.

    For random signals g measures || theta_T(t) I_0^t g ||_{H^b} / ||g||_{H^{b'}}
    on a ladder of T values and fits the log-log slope; the smoothing gain
    predicts an exponent of 1 - (b - b').
    """
    if not (-0.5 < b_prime <= 0.0 <= b <= b_prime + 1.0):
        raise ValueError(
            f"need -1/2 < b' <= 0 <= b <= b' + 1, got b={b}, b'={b_prime}")
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    if n_time % 2 == 0:
        n_time += 1
    rng = np.random.default_rng(seed)
    m = (n_time - 1) // 2
    dt = 2.0 * window / n_time
    t = (np.arange(n_time) - m) * dt
    dtau = 2.0 * math.pi / (2.0 * window)
    tau = (np.arange(n_time) - m) * dtau

    quotients = np.zeros(len(T_ladder))
    for _ in range(sample_count):
        ghat = rng.standard_normal(n_time) + 1j * rng.standard_normal(n_time)
        ghat *= (1.0 + np.abs(tau)) ** (-0.55)
        den = float(np.sqrt(np.sum((1.0 + np.abs(tau)) ** (2.0 * b_prime)
                                   * np.abs(ghat) ** 2) * dtau))
        if den == 0.0:
            continue
        # Antiderivative of the trigonometric interpolant, exactly per mode.
        h = np.where(tau == 0.0, 0.0, ghat / np.where(tau == 0.0, 1.0, 1j * tau))
        osc = _inverse_along(h, -1, dtau, t[0])
        const = (dtau / (2.0 * math.pi)) * np.sum(h)
        linear = (dtau / (2.0 * math.pi)) * ghat[m] * t
        integral = osc - const + linear
        for i, T in enumerate(T_ladder):
            y = theta_T(t, T) * integral
            num = _h_t_norm(y, tau, dt, dtau, t[0], b)
            quotients[i] = max(quotients[i], num / den)
    logT = np.log(np.asarray(T_ladder))
    slope = float(np.polyfit(logT, np.log(quotients), 1)[0])
    return slope
