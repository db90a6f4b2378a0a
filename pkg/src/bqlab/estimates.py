"""Numerical oracles for the bilinear-estimate machinery.

Covers the two convolution calculus inequalities, the equivalence of the
dispersive and parabolic modulation weights, the frequency weight bound, the
interaction-region suprema, and the norm-splitting inequality used for
persistence of regularity.

The region suprema are the computable core: for an interaction case (the two
inequivalent sign patterns of the parabolic phases) and a named subregion,
the quantity is a weighted double integral over the inner (frequency, time)
pair with the region predicate applied as an integrand mask, maximized over
sampled outer points.  Uniform boundedness over the plane cannot be certified
numerically; its falsifiable surrogate is stability of the sample supremum
under doubling of the outer sampling range, which the audit tests enforce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate

from .quadrature import gauss_legendre

__all__ = [
    "RegionTag",
    "EstimateParams",
    "RegionSupremumResult",
    "EmptyRegionSample",
    "REGION_NAMES",
    "weight_exponent",
    "weight_ratio",
    "ci1_value",
    "ci2_value",
    "symbol_equiv_sup",
    "corollary_split_check",
    "region_supremum",
    "sample_region_supremum",
    "region_stability",
    "algebraic_residuals",
]

REGION_NAMES = {
    "I": ("A1", "A2", "A31", "A32"),
    "III": ("B1", "B2", "B3", "B41", "B42", "B43"),
}


class EmptyRegionSample(RuntimeError):
    """Every sampled outer point produced an empty masked region."""


def weight_exponent(s: float) -> float:
    """Exponent of <xi1> bounding the triple frequency-weight ratio: 0 for
    s >= 0 and 4|s| for s < 0."""
    return 0.0 if s >= 0.0 else 4.0 * abs(s)


def weight_ratio(s: float, xi, xi1):
    """<xi>^{2s} / (<xi1>^{2s} <xi - xi1>^{2s}); bounded by <xi1>^{weight_exponent(s)}."""
    xi = np.asarray(xi, dtype=float)
    xi1 = np.asarray(xi1, dtype=float)
    br = lambda z: 1.0 + np.abs(z)
    out = br(xi) ** (2.0 * s) / (br(xi1) ** (2.0 * s) * br(xi - xi1) ** (2.0 * s))
    return float(out) if out.ndim == 0 else out


def ci1_value(alpha: float, beta: float, p: float, q: float) -> float:
    """I dx / (<x - alpha>^p <x - beta>^q) by adaptive quadrature.

    Requires p, q > 0 and p + q > 1 for convergence; decays like
    <alpha - beta>^{-min(p, q, p+q-1)} in the separation.
    """
    if p <= 0.0 or q <= 0.0:
        raise ValueError(f"p and q must be positive, got p={p}, q={q}")
    if p + q <= 1.0:
        raise ValueError(f"divergent tail: p + q must exceed 1, got {p + q}")

    def f(x):
        return (1.0 + np.abs(x - alpha)) ** (-p) * (1.0 + np.abs(x - beta)) ** (-q)

    lo, hi = min(alpha, beta), max(alpha, beta)
    mid, err = integrate.quad(f, lo - 1.0, hi + 1.0,
                              points=[lo, hi], limit=400)
    left, el = integrate.quad(f, -np.inf, lo - 1.0, limit=400)
    right, er = integrate.quad(f, hi + 1.0, np.inf, limit=400)
    return mid + left + right


def ci2_value(a0: float, a1: float, a2: float, q: float) -> float:
    """I dx / <a0 + a1 x + a2 x^2>^q by adaptive quadrature; requires q > 1/2."""
    if q <= 0.5:
        raise ValueError(f"divergent tail: q must exceed 1/2, got {q}")
    if a2 == 0.0:
        raise ValueError("a2 must be nonzero")

    def f(x):
        return (1.0 + np.abs(a0 + a1 * x + a2 * x * x)) ** (-q)

    vertex = -a1 / (2.0 * a2)
    crit = [vertex]
    disc = a1 * a1 - 4.0 * a2 * a0
    if disc >= 0.0:
        r = math.sqrt(disc) / (2.0 * abs(a2))
        crit += [vertex - r, vertex + r]
    crit = sorted(crit)
    lo, hi = crit[0] - 1.0, crit[-1] + 1.0
    mid, _ = integrate.quad(f, lo, hi, points=crit, limit=400)
    left, _ = integrate.quad(f, -np.inf, lo, limit=400)
    right, _ = integrate.quad(f, hi, np.inf, limit=400)
    return mid + left + right


def symbol_equiv_sup(x_max: float, y_max: float, n: int) -> tuple[float, float]:
    """Grid extrema of (1 + |x - y|) / (1 + |x - sqrt(y^2 + y)|) over x, y >= 0.

    Since |sqrt(y^2 + y) - y| <= 1/2, the ratio stays inside [2/3, 3/2].
    """
    if x_max <= 0.0 or y_max <= 0.0 or n < 2:
        raise ValueError("need positive bounds and n >= 2")
    x = np.linspace(0.0, x_max, n)
    y = np.linspace(0.0, y_max, n)
    root = np.sqrt(y * y + y)
    ratio = (1.0 + np.abs(x[:, None] - y[None, :])) / (
        1.0 + np.abs(x[:, None] - root[None, :]))
    return float(ratio.min()), float(ratio.max())


def corollary_split_check(s: float, s_prime: float, xi: float, xi1: float) -> bool:
    """<xi>^{s'} <= <xi>^s <xi1>^{s'-s} + <xi>^s <xi-xi1>^{s'-s} at one point."""
    if not s_prime > s:
        raise ValueError(f"need s' > s, got s'={s_prime}, s={s}")
    br = lambda z: 1.0 + abs(z)
    lhs = br(xi) ** s_prime
    rhs = br(xi) ** s * (br(xi1) ** (s_prime - s) + br(xi - xi1) ** (s_prime - s))
    return bool(lhs <= rhs * (1.0 + 1e-12))


def algebraic_residuals(xi, tau, xi1, tau1) -> tuple[np.ndarray, np.ndarray]:
    """Residuals of the two phase identities used to cancel the symbols.

    First: -(tau+xi^2) + (tau1+xi1^2) + ((tau-tau1)+(xi-xi1)^2) - 2 xi1 (xi1 - xi).
    Second: -(tau+xi^2) + (tau1-xi1^2) + ((tau-tau1)+(xi-xi1)^2) + 2 xi1 xi.
    Both vanish identically.
    """
    xi = np.asarray(xi, float); tau = np.asarray(tau, float)
    xi1 = np.asarray(xi1, float); tau1 = np.asarray(tau1, float)
    sigma = tau + xi ** 2
    sigma2 = (tau - tau1) + (xi - xi1) ** 2
    r1 = -sigma + (tau1 + xi1 ** 2) + sigma2 - 2.0 * xi1 * (xi1 - xi)
    r2 = -sigma + (tau1 - xi1 ** 2) + sigma2 + 2.0 * xi1 * xi
    return r1, r2


# --------------------------------------------------------------------------
# Region predicates and suprema
# --------------------------------------------------------------------------


def _sigmas(case: str, xi, tau, xi1, tau1):
    s1 = 1.0 if case == "I" else -1.0
    sigma = tau + xi ** 2
    sigma1 = tau1 + s1 * xi1 ** 2
    sigma2 = (tau - tau1) + (xi - xi1) ** 2
    return sigma, sigma1, sigma2


@dataclass(frozen=True)
class RegionTag:
    """One interaction case plus one named subregion, as a point predicate."""

    case: str
    region: str

    def __post_init__(self):
        if self.case not in REGION_NAMES:
            raise ValueError(f"case must be 'I' or 'III', got {self.case!r}")
        if self.region not in REGION_NAMES[self.case]:
            raise ValueError(
                f"region {self.region!r} does not belong to case {self.case}")

    def predicate(self, xi, tau, xi1, tau1):
        xi = np.asarray(xi, float); tau = np.asarray(tau, float)
        xi1 = np.asarray(xi1, float); tau1 = np.asarray(tau1, float)
        sg, sg1, sg2 = _sigmas(self.case, xi, tau, xi1, tau1)
        a_sg, a_sg1, a_sg2 = np.abs(sg), np.abs(sg1), np.abs(sg2)
        ax1 = np.abs(xi1)
        if self.case == "I":
            base = a_sg2 <= a_sg1
            if self.region == "A1":
                return base & (ax1 <= 10.0)
            if self.region == "A2":
                return base & (ax1 >= 10.0) & (np.abs(2.0 * xi1 - xi) >= ax1 / 2.0)
            third = base & (ax1 >= 10.0) & (np.abs(xi1 - xi) >= ax1 / 2.0)
            if self.region == "A31":
                return third & (a_sg1 <= a_sg)
            return third & (a_sg <= a_sg1)          # A32
        if self.region == "B1":
            return ax1 <= 10.0
        big = ax1 >= 10.0
        ax = np.abs(xi)
        if self.region == "B2":
            return big & (ax <= 1.0)
        if self.region == "B3":
            return big & (ax >= 1.0) & (ax >= ax1 / 2.0)
        b4 = big & (ax >= 1.0) & (ax <= ax1 / 2.0)
        if self.region == "B41":
            return b4 & (a_sg1 <= a_sg) & (a_sg2 <= a_sg)
        if self.region == "B42":
            return b4 & (a_sg <= a_sg1) & (a_sg2 <= a_sg1)
        return b4 & (a_sg1 <= a_sg2) & (a_sg <= a_sg2)  # B43


# Which of the three dual pairings hosts each region: the pairing fixes the
# outer pair, the inner pair, and where the exponents a, b and the frequency
# weight sit.
_PAIRING = {
    ("I", "A1"): "inner_first", ("I", "A2"): "inner_first",
    ("I", "A31"): "inner_first", ("I", "A32"): "outer_first",
    ("III", "B1"): "inner_first", ("III", "B3"): "inner_first",
    ("III", "B41"): "inner_first",
    ("III", "B2"): "outer_first", ("III", "B42"): "outer_first",
    ("III", "B43"): "outer_second",
}


@dataclass(frozen=True)
class EstimateParams:
    """Exponents plus the sampling and quadrature layout of the audit."""

    s: float
    a: float
    b: float
    outer_range: float = 1e2
    n_random: int = 12          # random outer points per magnitude level
    seed: int = 0
    w_base: float = 0.25        # innermost panel width around weight kinks
    gl_order: int = 4
    v_grading: int = 5          # dyadic grading depth between breakpoints

    def __post_init__(self):
        if not self.s > -0.25:
            raise ValueError(f"s must exceed -1/4, got {self.s}")
        if not (0.25 < self.a < 0.5):
            raise ValueError(f"a must lie in (1/4, 1/2), got {self.a}")
        if not self.b > 0.5:
            raise ValueError(f"b must exceed 1/2, got {self.b}")
        if self.s < 0.0 and not abs(self.s) < self.a / 2.0:
            raise ValueError(f"|s| < a/2 violated: s={self.s}, a={self.a}")
        if self.outer_range < 10.0:
            raise ValueError("outer_range must be >= 10")


@dataclass
class RegionSupremumResult:
    tag: RegionTag
    params: EstimateParams
    points: np.ndarray        # (n, 2) outer (frequency, time) samples
    values: np.ndarray        # (n,)
    supremum: float
    n_nonzero: int


def _pairing_setup(tag: RegionTag, params: EstimateParams, fo: float, to: float):
    """Centers, exponents, prefactor and predicate coordinates of one pairing.

    Returns (cA_fn, cB_fn, eA, eB, const_sigma, prefactor, v_weighted, coords)
    where coords maps (v, w) arrays to the (xi, tau, xi1, tau1) tuple.
    """
    s1 = 1.0 if tag.case == "I" else -1.0
    gs = weight_exponent(params.s)
    pairing = _PAIRING[(tag.case, tag.region)]
    if pairing == "inner_first":
        # outer (xi, tau); inner (xi1, tau1); weight on sigma1, sigma2.
        sigma_out = to + fo ** 2
        cA = lambda v: -s1 * v ** 2                      # sigma1 peak
        cB = lambda v: to + (fo - v) ** 2                # sigma2 peak
        eA, eB = 2.0 * params.b, 2.0 * params.b
        pref = (1.0 + abs(sigma_out)) ** (-2.0 * params.a)
        coords = lambda v, w: (np.broadcast_to(fo, v.shape), np.broadcast_to(to, v.shape), v, w)
        return cA, cB, eA, eB, abs(sigma_out), pref, True, coords
    if pairing == "outer_first":
        # outer (xi1, tau1); inner (xi, tau); weight on sigma (exp a), sigma2.
        sigma1_out = to + s1 * fo ** 2
        cA = lambda v: -v ** 2                           # sigma peak
        cB = lambda v: to - (v - fo) ** 2                # sigma2 peak
        eA, eB = 2.0 * params.a, 2.0 * params.b
        pref = ((1.0 + abs(fo)) ** gs
                * (1.0 + abs(sigma1_out)) ** (-2.0 * params.b))
        coords = lambda v, w: (v, w, np.broadcast_to(fo, v.shape), np.broadcast_to(to, v.shape))
        return cA, cB, eA, eB, abs(sigma1_out), pref, False, coords
    # outer_second: outer (xi2, tau2); inner (xi1, tau1); weight on sigma1
    # (exp a) and sigma (exp b).
    sigma2_out = to + fo ** 2
    cA = lambda v: -s1 * v ** 2                          # sigma1 peak
    cB = lambda v: -to - (v + fo) ** 2                   # sigma peak
    eA, eB = 2.0 * params.a, 2.0 * params.b
    pref = (1.0 + abs(sigma2_out)) ** (-2.0 * params.b)
    coords = lambda v, w: (v + fo, w + to, v, w)
    return cA, cB, eA, eB, abs(sigma2_out), pref, True, coords


def _quad_roots(f) -> list[float]:
    """Real roots of the quadratic v -> f(v), coefficients read off numerically."""
    p0 = f(0.0)
    pp = f(1.0)
    pm = f(-1.0)
    a = 0.5 * (pp + pm) - p0
    b = 0.5 * (pp - pm)
    c = p0
    if abs(a) < 1e-300:
        if abs(b) < 1e-300:
            return []
        return [-c / b]
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return []
    r = math.sqrt(disc)
    return [(-b - r) / (2.0 * a), (-b + r) / (2.0 * a)]


def _graded_edges(breaks: np.ndarray, depth: int) -> np.ndarray:
    """Dyadically graded panel edges between consecutive breakpoints."""
    pieces = [breaks[:1]]
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        span = hi - lo
        if span <= 0.0:
            continue
        fracs = 0.5 ** np.arange(depth, 0, -1)
        left = lo + span * fracs
        right = hi - span * fracs[::-1][1:]
        pieces.append(np.concatenate([left, right, [hi]]))
    return np.unique(np.concatenate(pieces))


def _ladder_offsets(span: float, base: float) -> np.ndarray:
    k = int(np.clip(math.ceil(math.log2(max(8.0 * span + 64.0, 64.0) / base)), 8, 46))
    return base * 2.0 ** np.arange(k + 1)


def _evaluate_point(tag: RegionTag, params: EstimateParams, fo: float, to: float) -> float:
    cA, cB, eA, eB, const_abs, pref, v_weighted, coords = _pairing_setup(
        tag, params, fo, to)
    if pref == 0.0:
        return 0.0
    gs = weight_exponent(params.s)
    glx, glw = gauss_legendre(params.gl_order)

    # Outer-direction (v) panel layout: region thresholds, peak collisions,
    # then dyadic grading between breakpoints.
    cand = [0.0, 1.0, -1.0, 10.0, -10.0,
            fo, -fo, fo / 2.0, -fo / 2.0, 2.0 * fo, -2.0 * fo,
            2.0 * fo / 3.0, -2.0 * fo / 3.0, 2.0 * fo / 5.0,
            1.5 * fo, 2.5 * fo, -fo - 1.0, -fo + 1.0]
    roots = _quad_roots(lambda v: cA(v) - cB(v))
    cand += roots
    vmax = 4.0 * max(10.0, 2.0 * abs(fo), math.sqrt(abs(to)) + 1.0,
                     *(1.5 * abs(r) for r in roots) if roots else (0.0,))
    breaks = np.unique(np.clip(np.asarray(cand + [-vmax, vmax]), -vmax, vmax))
    v_edges = _graded_edges(breaks, params.v_grading)
    v_lo, v_hi = v_edges[:-1], v_edges[1:]
    v_nodes = (0.5 * (v_lo + v_hi)[:, None]
               + 0.5 * (v_hi - v_lo)[:, None] * glx[None, :]).ravel()
    v_wts = (0.5 * (v_hi - v_lo)[:, None] * glw[None, :]).ravel()

    total = 0.0
    chunk = 256
    ladder = None
    for start in range(0, v_nodes.shape[0], chunk):
        v = v_nodes[start:start + chunk]
        vw = v_wts[start:start + chunk]
        ca = cA(v)
        cb = cB(v)
        if ladder is None:
            span = float(np.max(np.abs(cA(v_nodes) - cB(v_nodes))))
            ladder = _ladder_offsets(max(span, const_abs), params.w_base)
        # Exact mask breakpoints in w plus dyadic ladders around both peaks.
        mask_pts = np.stack([
            0.5 * (ca + cb),
            ca + const_abs, ca - const_abs,
            cb + const_abs, cb - const_abs,
        ], axis=1)
        lad = np.concatenate([ladder, -ladder, [0.0]])
        edges = np.concatenate([
            ca[:, None] + lad[None, :],
            cb[:, None] + lad[None, :],
            mask_pts,
        ], axis=1)
        edges.sort(axis=1)
        w_lo, w_hi = edges[:, :-1], edges[:, 1:]
        width = w_hi - w_lo
        w_nodes = (0.5 * (w_lo + w_hi)[:, :, None]
                   + 0.5 * width[:, :, None] * glx[None, None, :])
        w_wts = 0.5 * width[:, :, None] * glw[None, None, :]

        fac = ((1.0 + np.abs(w_nodes - ca[:, None, None])) ** (-eA)
               * (1.0 + np.abs(w_nodes - cb[:, None, None])) ** (-eB))
        mids = 0.5 * (w_lo + w_hi)
        vv = np.broadcast_to(v[:, None], mids.shape)
        mask = tag.predicate(*coords(vv, mids))
        inner = np.sum(np.sum(fac * w_wts, axis=2) * mask, axis=1)
        vfac = (1.0 + np.abs(v)) ** gs if v_weighted else 1.0
        total += float(np.sum(vw * vfac * inner))
    return pref * max(total, 0.0)


def _resonant_time(tag: RegionTag, fo: float) -> float:
    """Outer time putting the outer modulation weight on its characteristic."""
    pairing = _PAIRING[(tag.case, tag.region)]
    s1 = 1.0 if tag.case == "I" else -1.0
    if pairing == "outer_first":
        return -s1 * fo ** 2
    return -fo ** 2


def _outer_levels(outer_range: float) -> list[float]:
    levels = []
    lv = 10.0
    while lv <= outer_range * (1.0 + 1e-9):
        levels.append(lv)
        lv *= math.sqrt(10.0)
    return levels


def _outer_points(tag: RegionTag, params: EstimateParams) -> np.ndarray:
    """Deterministic extremes plus seeded random points, nested across ranges."""
    pts = []
    for f in (0.5, 1.0, 2.0, 5.0):
        for sign in (1.0, -1.0):
            fo = sign * f
            pts += [(fo, _resonant_time(tag, fo)), (fo, 0.0)]
    for li, lv in enumerate(_outer_levels(params.outer_range)):
        for sign in (1.0, -1.0):
            fo = sign * lv
            res = _resonant_time(tag, fo)
            pts += [(fo, res), (fo, res + 1.0), (fo, res - 1.0),
                    (fo, 0.0), (fo, lv ** 2)]
        rng = np.random.default_rng([params.seed, li, 17])
        prev = lv / math.sqrt(10.0)
        for _ in range(params.n_random):
            mag = prev * (lv / prev) ** rng.random()
            fo = mag if rng.random() < 0.5 else -mag
            if rng.random() < 0.5:
                to = _resonant_time(tag, fo) + rng.uniform(-5.0, 5.0)
            else:
                to = rng.uniform(-lv ** 2, lv ** 2)
            pts.append((fo, to))
    return np.asarray(pts)


def sample_region_supremum(tag: RegionTag, params: EstimateParams) -> RegionSupremumResult:
    """Evaluate the region quantity on the outer sample; raise on empty regions."""
    pts = _outer_points(tag, params)
    values = np.array([_evaluate_point(tag, params, fo, to) for fo, to in pts])
    n_nonzero = int(np.count_nonzero(values))
    if n_nonzero == 0:
        raise EmptyRegionSample(
            f"region {tag.case}/{tag.region}: all {len(pts)} outer samples empty")
    return RegionSupremumResult(tag, params, pts, values,
                                float(values.max()), n_nonzero)


def region_supremum(tag: RegionTag, params: EstimateParams) -> float:
    """Sample supremum of the masked inner integral for one region."""
    return sample_region_supremum(tag, params).supremum


def region_stability(tag: RegionTag, params: EstimateParams,
                     ranges=(1e2, 1e3, 1e4)) -> dict:
    """Supremum per outer range plus its overall growth factor.

    Samples are nested across ranges, so the suprema are monotone and the
    growth factor is the boundedness surrogate: it should stay below 2.
    """
    sups = []
    for r in ranges:
        res = sample_region_supremum(tag, replace(params, outer_range=r))
        sups.append(res.supremum)
    growth = sups[-1] / sups[0] if sups[0] > 0.0 else math.inf
    return {"ranges": list(ranges), "suprema": sups, "growth": growth,
            "stable": growth < 2.0}
