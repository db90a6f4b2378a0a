"""Configuration-driven command line front end.

Usage::

    bqlab <kind> [--config FILE] [--out DIR] [--seed INT] [--workers INT] [key=value ...]

Kinds: ``solve``, ``bilinear-sweep``, ``illposed-sweep``, ``estimate-audit``,
``linear-demo``.  Config files are flat ``key = value`` text (``#`` comments);
any key can be overridden on the command line, command line wins.  The default
output directory comes from ``$BQLAB_OUT``, falling back to ``./bqlab_out``.

Each run writes ``report.csv`` (deterministic; schema in ``reporting``),
``timings.csv`` (measured wall-clock), and static SVG figures.  Exit status is
0 exactly when every pass flag is true and no error occurred.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import counterexamples as cx
from . import estimates as est
from . import plots
from .fields import SpectralField, _hs_norm_rows, hs_norm
from .grids import FrequencyGrid, gamma
from .propagators import InitialData, linear_solve, mode_energy
from .quadrature import stencil_matrices
from .reporting import ReportRow, write_report_csv, write_timings_csv
from .solver import SolverConfig, picard_solve, reference_solve

__all__ = ["ExperimentConfig", "validate", "run", "main", "KINDS"]

KINDS = ("solve", "bilinear-sweep", "illposed-sweep", "estimate-audit",
         "linear-demo")

_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


@dataclass(frozen=True)
class _Field:
    name: str
    kind: str  # int | float | bool | str | float_list | int_list
    default: object
    help: str = ""


_COMMON = (
    _Field("seed", "int", 0, "random seed; fixed seed means deterministic run"),
    _Field("workers", "int", 1, "worker processes for ladder points"),
)

_SCHEMAS: dict[str, tuple[_Field, ...]] = {
    "solve": (
        _Field("s", "float", 0.0, "spatial regularity"),
        _Field("a", "float", 0.45, "dual modulation exponent, in (1/4, 1/2)"),
        _Field("b", "float", 0.55, "modulation exponent, > 1/2"),
        _Field("T", "float", 0.5, "time horizon, in (0, 1]"),
        _Field("amplitude", "float", 1e-2, "Gaussian bump amplitude"),
        _Field("bump_width", "float", 1.0, "Gaussian bump width"),
        _Field("half_width", "float", 12.0, "spatial box half width"),
        _Field("n_modes", "int", 193, "odd mode count"),
        _Field("n_times", "int", 513, "odd node count on the solver window"),
        _Field("quadrature_order", "int", 8, "Gauss order per panel"),
        _Field("max_iterations", "int", 40, ""),
        _Field("tolerance", "float", 1e-10, ""),
        _Field("dealias", "bool", True, "2/3-rule padding for the square"),
        _Field("reference_steps", "int", 1500, "RK4 steps of the oracle"),
        _Field("ratio_bound", "float", 0.9, "pass bound on the contraction ratio"),
        _Field("discrepancy_bound", "float", 1e-6, "pass bound vs the oracle"),
    ) + _COMMON,
    "bilinear-sweep": (
        _Field("s", "float", -0.5, ""),
        _Field("a", "float", 0.45, ""),
        _Field("b", "float", 0.55, ""),
        _Field("n_list", "float_list", [16.0, 32.0, 64.0, 128.0], "N ladder"),
        _Field("inner_long", "int", 64, "Gauss nodes, long rectangle side"),
        _Field("inner_short", "int", 8, "Gauss nodes, short side"),
        _Field("outer_xi", "int", 64, "output cells across xi"),
    ) + _COMMON,
    "illposed-sweep": (
        _Field("s", "float", -3.0, "must be < -2 for an enforced slope"),
        _Field("eps", "float", 0.1, "short-time exponent"),
        _Field("n_list", "float_list", [32.0, 64.0, 128.0, 256.0], "N ladder"),
        _Field("n_xi", "int", 33, "Gauss nodes across the output band"),
        _Field("n_xi1", "int", 33, "Gauss nodes across the data band"),
    ) + _COMMON,
    "estimate-audit": (
        _Field("s", "float", -0.2, ""),
        _Field("a", "float", 0.45, ""),
        _Field("b", "float", 0.55, ""),
        _Field("ranges", "float_list", [1e2, 1e3, 1e4], "outer range ladder"),
        _Field("n_random", "int", 12, "random outer points per level"),
        _Field("growth_bound", "float", 2.0, "stability bound on suprema"),
    ) + _COMMON,
    "linear-demo": (
        _Field("amplitude", "float", 1e-2, "0 gives the zero-data demo"),
        _Field("bump_width", "float", 1.0, ""),
        _Field("half_width", "float", 16.0, ""),
        _Field("n_modes", "int", 1025, ""),
        _Field("t_max", "float", 10.0, ""),
        _Field("n_samples", "int", 201, "trajectory sample count"),
        _Field("drift_bound", "float", 1e-10, "pass bound on energy drift"),
    ) + _COMMON,
}


@dataclass
class ExperimentConfig:
    """One experiment: kind, its parameter values, output dir, seed, workers."""

    kind: str
    values: dict = field(default_factory=dict)
    out_dir: Path = Path("bqlab_out")

    def __getitem__(self, key):
        return self.values[key]

    @property
    def seed(self) -> int:
        return int(self.values.get("seed", 0))

    @property
    def workers(self) -> int:
        return max(1, int(self.values.get("workers", 1)))


def _coerce(f: _Field, raw: str):
    raw = raw.strip()
    try:
        if f.kind == "int":
            return int(raw)
        if f.kind == "float":
            return float(raw)
        if f.kind == "bool":
            low = raw.lower()
            if low in _BOOL_TRUE:
                return True
            if low in _BOOL_FALSE:
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if f.kind == "float_list":
            return [float(p) for p in raw.replace("[", "").replace("]", "").split(",") if p.strip()]
        if f.kind == "int_list":
            return [int(p) for p in raw.replace("[", "").replace("]", "").split(",") if p.strip()]
        return raw
    except ValueError as exc:
        raise ValueError(f"field {f.name}: {exc}") from exc


def parse_config_text(text: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ValueError(f"line {lineno}: expected 'key = value', got {body!r}")
        key, value = body.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def build_config(kind: str, config_path: str | None = None,
                 overrides: list[str] | None = None,
                 out: str | None = None, seed: int | None = None,
                 workers: int | None = None) -> ExperimentConfig:
    """Assemble a config from defaults, file, then command-line overrides."""
    if kind not in _SCHEMAS:
        raise ValueError(f"unknown experiment kind {kind!r}; choose from {KINDS}")
    schema = {f.name: f for f in _SCHEMAS[kind]}
    values = {f.name: f.default for f in _SCHEMAS[kind]}
    if config_path is not None:
        raw = parse_config_text(Path(config_path).read_text())
        for key, sval in raw.items():
            if key == "out":
                out = out if out is not None else sval
                continue
            if key not in schema:
                raise ValueError(f"unknown config key {key!r} for kind {kind}")
            values[key] = _coerce(schema[key], sval)
    for item in overrides or []:
        if "=" not in item:
            raise ValueError(f"override must be key=value, got {item!r}")
        key, sval = item.split("=", 1)
        key = key.strip()
        if key == "out":
            out = sval.strip()
            continue
        if key not in schema:
            raise ValueError(f"unknown override key {key!r} for kind {kind}")
        values[key] = _coerce(schema[key], sval)
    if seed is not None:
        values["seed"] = seed
    if workers is not None:
        values["workers"] = workers
    out_dir = Path(out if out is not None
                   else os.environ.get("BQLAB_OUT", "bqlab_out"))
    return ExperimentConfig(kind=kind, values=values, out_dir=out_dir)


def validate(config: ExperimentConfig) -> list[str]:
    """Diagnostics for an inadmissible config; empty list means admissible."""
    diags: list[str] = []
    v = config.values
    kind = config.kind
    if kind not in _SCHEMAS:
        return [f"unknown kind {kind!r}"]
    if kind in ("solve", "estimate-audit", "bilinear-sweep"):
        a = float(v["a"])
        b = float(v["b"])
        if not (0.25 < a < 0.5):
            diags.append(f"a must lie in (1/4, 1/2), got {a}")
        if not b > 0.5:
            diags.append(f"b must exceed 1/2, got {b}")
    if kind in ("solve", "estimate-audit"):
        s = float(v["s"])
        a = float(v["a"])
        if s < 0.0 and not abs(s) < a / 2.0:
            diags.append(f"|s| < a/2 violated: s={s}, a={a}")
    if kind == "solve":
        if not (0.0 < float(v["T"]) <= 1.0):
            diags.append(f"T must lie in (0, 1], got {v['T']}")
        if float(v["a"]) + float(v["b"]) > 1.0 + 1e-12:
            diags.append(f"a + b must not exceed 1, got {float(v['a']) + float(v['b'])}")
        if int(v["n_times"]) % 2 == 0 or int(v["n_times"]) < 5:
            diags.append(f"n_times must be odd and >= 5, got {v['n_times']}")
        if int(v["n_modes"]) % 2 == 0 or int(v["n_modes"]) < 3:
            diags.append(f"n_modes must be odd and >= 3, got {v['n_modes']}")
    if kind == "linear-demo":
        if int(v["n_modes"]) % 2 == 0 or int(v["n_modes"]) < 3:
            diags.append(f"n_modes must be odd and >= 3, got {v['n_modes']}")
        if not float(v["t_max"]) > 0.0:
            diags.append("t_max must be positive")
    if kind in ("bilinear-sweep", "illposed-sweep"):
        ladder = [float(x) for x in v["n_list"]]
        if len(ladder) < 4:
            diags.append("n_list needs at least 4 values")
        elif max(ladder) / min(ladder) < 8.0:
            diags.append("n_list must span at least a factor of 8")
        if kind == "bilinear-sweep" and min(ladder, default=4.0) < 4.0:
            diags.append("n_list values must be >= 4")
    if kind == "illposed-sweep":
        if not float(v["eps"]) > 0.0:
            diags.append("eps must be positive")
    if kind == "estimate-audit":
        ranges = [float(x) for x in v["ranges"]]
        if len(ranges) < 2 or sorted(ranges) != ranges or min(ranges) < 10.0:
            diags.append("ranges must be an increasing ladder with entries >= 10")
    return diags


# --------------------------------------------------------------------------
# Experiment implementations
# --------------------------------------------------------------------------


def _gaussian_data(grid: FrequencyGrid, amplitude: float, width: float) -> InitialData:
    xi = grid.nodes
    spec = amplitude * width * math.sqrt(math.pi) * np.exp(-(width * xi / 2.0) ** 2)
    phi = SpectralField(grid, spec.astype(complex))
    psi = SpectralField.zeros(grid)
    return InitialData(phi, psi)


def _run_linear_demo(config: ExperimentConfig, out: Path) -> list[ReportRow]:
    v = config.values
    grid = FrequencyGrid(float(v["half_width"]), int(v["n_modes"]))
    data = _gaussian_data(grid, float(v["amplitude"]), float(v["bump_width"]))
    times = np.linspace(0.0, float(v["t_max"]), int(v["n_samples"]))
    t0 = time.perf_counter()
    traj = linear_solve(data, times)

    nz = grid.nodes != 0.0
    g = gamma(grid.nodes[nz])
    energy = (np.abs(traj.states[:, nz]) ** 2
              + np.abs(traj.velocities[:, nz] / g[None, :]) ** 2)
    base = energy[0]
    live = base > 1e-300
    if np.any(live):
        drift = float(np.max(np.abs(energy[:, live] - base[live]) / base[live]))
    else:
        drift = 0.0

    # Group property: evolve to t1, restart from the state pair, compare at t1+t2.
    t1 = 0.4 * float(v["t_max"])
    t2 = 0.35 * float(v["t_max"])
    mid = linear_solve(data, np.array([t1]))
    xi = grid.nodes
    psi2 = np.zeros_like(mid.velocities[0])
    nz_idx = xi != 0.0
    psi2[nz_idx] = mid.velocities[0][nz_idx] / (1j * xi[nz_idx])
    restart = InitialData(SpectralField(grid, mid.states[0]),
                          SpectralField(grid, psi2))
    hop = linear_solve(restart, np.array([t2]))
    direct = linear_solve(data, np.array([t1 + t2]))
    scale = max(float(np.max(np.abs(direct.states[0]))), 1e-300)
    group_err = float(np.max(np.abs(hop.states[0] - direct.states[0]))) / scale
    seconds = time.perf_counter() - t0

    bound = float(v["drift_bound"])
    rows = [
        ReportRow("linear-demo", {"check": "energy_drift", "t_max": v["t_max"],
                                  "n_modes": v["n_modes"]},
                  value=drift, passed=drift < bound, seconds=seconds),
        ReportRow("linear-demo", {"check": "group_property", "t1": t1, "t2": t2},
                  value=group_err, passed=group_err < bound, seconds=0.0),
    ]
    norms = _hs_norm_rows(traj.states, grid, 0.0)
    plots.save_history_plot(out / "linear_demo_h0.svg", times, norms,
                            "H^0 norm", "Linear evolution, H^0 along the flow")
    return rows


def _run_solve(config: ExperimentConfig, out: Path) -> list[ReportRow]:
    v = config.values
    grid = FrequencyGrid(float(v["half_width"]), int(v["n_modes"]))
    data = _gaussian_data(grid, float(v["amplitude"]), float(v["bump_width"]))
    solver_config = SolverConfig(
        s=float(v["s"]), a=float(v["a"]), b=float(v["b"]), T=float(v["T"]),
        n_times=int(v["n_times"]), quadrature_order=int(v["quadrature_order"]),
        max_iterations=int(v["max_iterations"]), tolerance=float(v["tolerance"]),
        dealias=bool(v["dealias"]))
    t0 = time.perf_counter()
    traj = picard_solve(data, solver_config)
    picard_seconds = time.perf_counter() - t0

    t0 = time.perf_counter()
    ref = reference_solve(data, solver_config.T, int(v["reference_steps"]),
                          dealias=bool(v["dealias"]))
    times_win, states_win = traj.restricted(0.0, solver_config.T)
    starts, coeffs = stencil_matrices(ref.times, times_win, min(8, len(ref.times)))
    idx = starts[:, None] + np.arange(coeffs.shape[1])[None, :]
    ref_at = np.einsum("qp,qpk->qk", coeffs, ref.states[idx])
    discrepancy = float(np.max(_hs_norm_rows(states_win - ref_at, grid,
                                             solver_config.s)))
    ref_seconds = time.perf_counter() - t0

    ratio = traj.contraction_ratio if traj.contraction_ratio is not None else 0.0
    ratio_ok = ratio < float(v["ratio_bound"])
    disc_ok = discrepancy < float(v["discrepancy_bound"])
    resid_ok = traj.fixed_point_residual < 10.0 * solver_config.tolerance
    rows = [
        ReportRow("solve", {"check": "contraction_ratio", "s": v["s"],
                            "T": v["T"], "amplitude": v["amplitude"]},
                  value=ratio, passed=ratio_ok, seconds=picard_seconds),
        ReportRow("solve", {"check": "reference_discrepancy",
                            "reference_steps": v["reference_steps"]},
                  value=discrepancy, passed=disc_ok, seconds=ref_seconds),
        ReportRow("solve", {"check": "fixed_point_residual"},
                  value=traj.fixed_point_residual, passed=resid_ok, seconds=0.0),
        ReportRow("solve", {"check": "radius_d"}, value=traj.radius,
                  passed=True, seconds=0.0),
    ]
    plots.save_convergence_plot(out / "solve_convergence.svg",
                                traj.iteration_xsb_diffs,
                                "Fixed-point iterate differences")
    norms = _hs_norm_rows(states_win, grid, solver_config.s)
    plots.save_history_plot(out / "solve_hs_history.svg", times_win, norms,
                            "H^s norm", "Solution H^s norm on [0, T]")
    return rows


def _bilinear_worker(args):
    N, s, a, b, quad = args
    return cx.bilinear_BN(N, s, a, b, quad)


def _illposed_worker(args):
    N, s, eps, n_xi, n_xi1 = args
    return cx.illposedness_norm(N, s, eps, n_xi=n_xi, n_xi1=n_xi1)


def _ladder_values(worker, tasks, workers: int) -> list[float]:
    if workers <= 1:
        return [worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, tasks))


def _run_bilinear(config: ExperimentConfig, out: Path) -> list[ReportRow]:
    v = config.values
    s, a, b = float(v["s"]), float(v["a"]), float(v["b"])
    quad = cx.BilinearQuadrature(inner_long=int(v["inner_long"]),
                                 inner_short=int(v["inner_short"]),
                                 outer_xi=int(v["outer_xi"]))
    n_list = [float(x) for x in v["n_list"]]
    rows = []
    t0 = time.perf_counter()
    values = _ladder_values(_bilinear_worker,
                            [(N, s, a, b, quad) for N in n_list],
                            config.workers)
    seconds = time.perf_counter() - t0
    predicted = -2.0 * s - a
    report = cx._growth_report(n_list, values, predicted, "bilinear",
                               enforce=predicted > cx.SLOPE_SLACK)
    for N, val in zip(n_list, values):
        rows.append(ReportRow("bilinear-sweep", {"N": N, "s": s, "a": a, "b": b},
                              value=val, passed=True, seconds=0.0))
    rows.append(ReportRow(
        "bilinear-sweep", {"check": "slope", "s": s, "a": a, "b": b},
        value=report.residual, slope=report.slope,
        predicted_slope=report.predicted_slope,
        passed=report.pass_flag if report.pass_flag is not None else True,
        seconds=seconds))
    plots.save_growth_plot(out / "bilinear_growth.svg", report,
                           f"Bilinear output growth, s={s}, a={a}")
    return rows


def _run_illposed(config: ExperimentConfig, out: Path) -> list[ReportRow]:
    v = config.values
    s, eps = float(v["s"]), float(v["eps"])
    n_list = [float(x) for x in v["n_list"]]
    rows = []
    t0 = time.perf_counter()
    values = _ladder_values(_illposed_worker,
                            [(N, s, eps, int(v["n_xi"]), int(v["n_xi1"]))
                             for N in n_list],
                            config.workers)
    seconds = time.perf_counter() - t0
    predicted = -2.0 * s - 4.0 - 2.0 * eps
    enforce = s < -2.0 and predicted > cx.SLOPE_SLACK
    report = cx._growth_report(n_list, values, predicted, "illposed",
                               enforce=enforce)
    for N, val in zip(n_list, values):
        rows.append(ReportRow("illposed-sweep", {"N": N, "s": s, "eps": eps},
                              value=val, passed=True, seconds=0.0))
    rows.append(ReportRow(
        "illposed-sweep", {"check": "slope", "s": s, "eps": eps},
        value=report.residual, slope=report.slope,
        predicted_slope=report.predicted_slope,
        passed=report.pass_flag if report.pass_flag is not None else True,
        seconds=seconds))
    plots.save_growth_plot(out / "illposed_growth.svg", report,
                           f"Flow-map derivative growth, s={s}, eps={eps}")
    return rows


def _run_estimate_audit(config: ExperimentConfig, out: Path) -> list[ReportRow]:
    v = config.values
    s, a, b = float(v["s"]), float(v["a"]), float(v["b"])
    ranges = [float(x) for x in v["ranges"]]
    growth_bound = float(v["growth_bound"])
    rows: list[ReportRow] = []

    t0 = time.perf_counter()
    deltas = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0]
    normalized = [est.ci1_value(0.0, d, 2.0, 2.0) * (1.0 + d) ** 2 for d in deltas]
    ci1_const = max(normalized)
    rows.append(ReportRow("estimate-audit", {"check": "ci1_sweep", "p": 2, "q": 2},
                          value=ci1_const, passed=ci1_const < 10.0,
                          seconds=time.perf_counter() - t0))

    t0 = time.perf_counter()
    pi_val = est.ci2_value(0.0, 0.0, 1.0, 1.0)
    rows.append(ReportRow("estimate-audit", {"check": "ci2_pi"},
                          value=abs(pi_val - math.pi),
                          passed=abs(pi_val - math.pi) < 1e-8,
                          seconds=time.perf_counter() - t0))

    t0 = time.perf_counter()
    a0_sweep = [-1e4, -1e3, -1e2, -10.0, 0.0, 10.0, 1e2, 1e3, 1e4]
    ci2_vals = [est.ci2_value(a0, 0.0, 1.0, 0.6) for a0 in a0_sweep]
    ci2_const = max(ci2_vals)
    rows.append(ReportRow("estimate-audit", {"check": "ci2_sweep", "q": 0.6},
                          value=ci2_const, passed=ci2_const < 15.0,
                          seconds=time.perf_counter() - t0))

    t0 = time.perf_counter()
    lo, hi = est.symbol_equiv_sup(1e6, 1e6, 2001)
    sym_ok = (lo >= 2.0 / 3.0 - 1e-9) and (hi <= 1.5 + 1e-9)
    rows.append(ReportRow("estimate-audit", {"check": "symbol_equivalence"},
                          value=hi, passed=sym_ok,
                          seconds=time.perf_counter() - t0))

    t0 = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    xi = rng.uniform(-1e3, 1e3, 20000)
    xi1 = rng.uniform(-1e3, 1e3, 20000)
    ratio = est.weight_ratio(s, xi, xi1)
    bound = (1.0 + np.abs(xi1)) ** est.weight_exponent(s)
    w_ok = bool(np.all(ratio <= bound * (1.0 + 1e-12)))
    rows.append(ReportRow("estimate-audit", {"check": "weight_bound", "s": s},
                          value=float(np.max(ratio / bound)), passed=w_ok,
                          seconds=time.perf_counter() - t0))

    t0 = time.perf_counter()
    r1, r2 = est.algebraic_residuals(xi, rng.uniform(-1e6, 1e6, 20000), xi1,
                                     rng.uniform(-1e6, 1e6, 20000))
    alg = float(max(np.max(np.abs(r1)), np.max(np.abs(r2))))
    rows.append(ReportRow("estimate-audit", {"check": "phase_identities"},
                          value=alg, passed=alg < 1e-6,
                          seconds=time.perf_counter() - t0))

    suprema_by_label = {}
    for case, regions in est.REGION_NAMES.items():
        for region in regions:
            tag = est.RegionTag(case, region)
            params = est.EstimateParams(s=s, a=a, b=b,
                                        n_random=int(v["n_random"]),
                                        seed=config.seed)
            t0 = time.perf_counter()
            result = est.region_stability(tag, params, ranges=tuple(ranges))
            seconds = time.perf_counter() - t0
            label = f"{case}/{region}"
            suprema_by_label[label] = result["suprema"]
            rows.append(ReportRow(
                "estimate-audit",
                {"check": "region_stability", "region": label,
                 "ranges": ranges},
                value=result["suprema"][-1],
                slope=result["growth"],
                passed=result["growth"] < growth_bound,
                seconds=seconds))
    plots.save_stability_plot(out / "region_stability.svg", ranges,
                              suprema_by_label,
                              f"Region suprema vs outer range, s={s}")
    return rows


_RUNNERS = {
    "solve": _run_solve,
    "bilinear-sweep": _run_bilinear,
    "illposed-sweep": _run_illposed,
    "estimate-audit": _run_estimate_audit,
    "linear-demo": _run_linear_demo,
}


def run(config: ExperimentConfig) -> int:
    """Run one experiment: write report.csv, timings.csv and figures.

    Returns the exit status: 0 when every pass flag is true, 1 when some
    check failed, 2 on error.
    """
    diags = validate(config)
    if diags:
        for d in diags:
            print(f"config error: {d}", file=sys.stderr)
        return 2
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        rows = _RUNNERS[config.kind](config, out)
    except Exception as exc:  # propagate with experiment context
        print(f"error in {config.kind}: {exc}", file=sys.stderr)
        return 2
    write_report_csv(out / "report.csv", rows)
    write_timings_csv(out / "timings.csv", rows)
    all_pass = all(row.passed is not False for row in rows)
    for row in rows:
        status = {True: "pass", False: "FAIL", None: "info"}[row.passed]
        print(f"[{status}] {row.kind} {row.param_json} value={row.value}")
    return 0 if all_pass else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bqlab",
        description="Boussinesq laboratory: solves and growth-rate experiments")
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run the {kind} experiment")
        p.add_argument("--config", default=None, help="flat key=value config file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("overrides", nargs="*", metavar="key=value",
                       help="config overrides; command line wins")
    args = parser.parse_args(argv)
    try:
        config = build_config(args.kind, args.config, args.overrides,
                              args.out, args.seed, args.workers)
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
