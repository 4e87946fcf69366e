"""Named experiment runners: one per certified inequality or construction.

Each runner measures its quantities, evaluates the pass flag through the
static threshold table, and returns an ExperimentReport carrying both
the metrics and a small time/parameter series for the CSV writer.  All
randomness is drawn from a caller-seeded splitmix64 stream, so a report
is reproducible bit for bit from its configuration echo.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dalembert import (build_free_profile, eval_linear, exterior_surrogate,
                        profile_mass, surrogate_mass_at)
from .energetics import (exterior_generalized_energy, generalized_energy,
                         hardy_weighted_norm)
from .errors import BlowupEncountered
from .families import SplitMix64, plateau_data, resolve_family
from .grid import RadialGrid, SampledFunction, diff_values, trapz
from .model import Params, make_params
from .nonlinear import BLEWUP, COMPLETED, SolverConfig, evolve
from .odeint import hermite_eval, integrate_adaptive
from .stationary import (partial_critical_mass, scaling_check,
                         singular_exponent_fit, solve_stationary)
from .thresholds import THRESHOLDS, evaluate_pass


@dataclass
class ExperimentReport:
    experiment: str
    params: Params
    config: dict
    passed: bool
    metrics: dict
    thresholds: dict
    series_columns: list[str] = field(default_factory=list)
    series_rows: list[tuple] = field(default_factory=list)
    plot_kind: str | None = None

    def to_json_dict(self, series_ref: str | None = None) -> dict:
        return {
            "schema_version": 1,
            "experiment": self.experiment,
            "params": {"p": self.params.p, "iota": self.params.iota,
                       "m": self.params.m, "s_c": self.params.s_c},
            "config": self.config,
            "pass": self.passed,
            "metrics": self.metrics,
            "thresholds": self.thresholds,
            "series": series_ref,
            "series_columns": self.series_columns,
            "plot_kind": self.plot_kind,
        }


def _report(name: str, params: Params, config: dict, metrics: dict,
            columns, rows, plot_kind) -> ExperimentReport:
    return ExperimentReport(
        experiment=name, params=params, config=config,
        passed=evaluate_pass(name, metrics), metrics=metrics,
        thresholds=THRESHOLDS[name], series_columns=list(columns),
        series_rows=rows, plot_kind=plot_kind)


# ---------------------------------------------------------------------------
# almost-conservation of the generalized energy

def run_conservation(*, p: float = 7.0, iota: int = 1,
                     family: str = "gaussian",
                     family_options: dict | None = None,
                     times=tuple(float(t) for t in range(11)),
                     r_max: float = 16.0, n: int = 2048,
                     seed: int | None = None) -> ExperimentReport:
    params = make_params(p, iota)
    grid = RadialGrid(r_max, n)
    opts = dict(family_options or {"amplitude": 1.0, "width": 1.0})
    rng = SplitMix64(seed) if seed is not None else None
    data = resolve_family(family, params, grid, opts, rng)
    horizon = max(abs(float(t)) for t in times)
    profile = build_free_profile(data, r_max + horizon)
    m = params.m

    e0 = generalized_energy(data)
    s0 = surrogate_mass_at(profile, m, 0.0)
    rows = []
    ratios, drifts = [], []
    for t in times:
        t = float(t)
        state = eval_linear(profile, t)
        em = generalized_energy(state)
        sm = surrogate_mass_at(profile, m, t)
        ratio = em / e0 if e0 > 0.0 else 1.0
        drift = abs(sm - s0) / s0 if s0 > 0.0 else 0.0
        ratios.append(ratio)
        drifts.append(drift)
        rows.append((t, em, ratio, sm))
    metrics = {
        "m": m,
        "e_m_initial": e0,
        "ratio_min": min(ratios),
        "ratio_max": max(ratios),
        "surrogate_drift": max(drifts),
    }
    config = {"p": p, "iota": iota, "family": family,
              "family_options": opts, "times": [float(t) for t in times],
              "r_max": r_max, "n": n, "seed": seed}
    return _report("conservation", params, config, metrics,
                   ("t", "E_m", "ratio", "surrogate_mass"), rows, "energy")


# ---------------------------------------------------------------------------
# exterior-energy channel dichotomy

def run_channel(*, p: float = 7.0, iota: int = 1, R: float = 0.5,
                horizon: float = 10.0, trials: int = 100, seed: int = 42,
                r_max: float = 20.0, n: int = 2048,
                times_per_trial: int = 21) -> ExperimentReport:
    params = make_params(p, iota)
    grid = RadialGrid(r_max, n)
    m = params.m
    t_table = THRESHOLDS["channel"]
    slack = t_table["surrogate_slack"]
    grid_bound = (0.5 - t_table["grid_margin"]) * 2.0 ** (1.0 - m)
    rng = SplitMix64(seed)

    failures = 0
    worst_margin = np.inf
    worst_grid = np.inf
    rows = []
    for trial in range(trials):
        data = resolve_family("bumps", params, grid, {}, rng)
        profile = build_free_profile(data, r_max + horizon)
        left = profile_mass(profile, m, -profile.L, -R)
        right = profile_mass(profile, m, R, profile.L)
        e_surr0 = exterior_surrogate(profile, m, R, 0.0)
        if e_surr0 <= t_table["zero_energy_floor"]:
            continue
        direction = 1.0 if left >= right else -1.0
        e_grid0 = exterior_generalized_energy(eval_linear(profile, 0.0), R)
        for t in np.linspace(0.0, horizon, times_per_trial) * direction:
            e_surr = exterior_surrogate(profile, m, R, float(t))
            ratio = e_surr / e_surr0
            worst_margin = min(worst_margin, ratio)
            if ratio < 0.5 - slack:
                failures += 1
            e_grid = exterior_generalized_energy(eval_linear(profile, float(t)), R)
            grid_ratio = e_grid / e_grid0
            worst_grid = min(worst_grid, grid_ratio)
            if grid_ratio < grid_bound:
                failures += 1
            rows.append((trial, float(t), ratio, grid_ratio, direction))
    metrics = {
        "failures": float(failures),
        "trials": float(trials),
        "worst_margin": float(worst_margin),
        "worst_grid_margin": float(worst_grid),
        "grid_bound": grid_bound,
    }
    config = {"p": p, "iota": iota, "R": R, "horizon": horizon,
              "trials": trials, "seed": seed, "r_max": r_max, "n": n,
              "times_per_trial": times_per_trial}
    return _report("channel", params, config, metrics,
                   ("trial", "t", "surrogate_ratio", "grid_ratio", "direction"),
                   rows, "channel")


# ---------------------------------------------------------------------------
# strong-Huygens localization of the weighted mass

def _weighted_mass_density(state) -> np.ndarray:
    m = state.params.m
    r = state.grid.nodes
    dw = diff_values(state.w.values, state.grid.h)
    return ((r * np.abs(dw)) ** m + (r * np.abs(state.wt.values)) ** m
            + np.abs(state.w.values) ** m)


def run_huygens(*, p: float = 7.0, iota: int = 1, t_eval: float = 20.0,
                lam: float = 1.0, R_list=(2.0, 4.0, 6.0, 9.5),
                support: float = 7.5, r_max: float = 30.0, n: int = 3000,
                seed: int = 7) -> ExperimentReport:
    """Weighted mass outside the ring ||r| - t| <= R*lam after free flow."""
    params = make_params(p, iota)
    grid = RadialGrid(r_max, n)
    rng = SplitMix64(seed)
    data = resolve_family("bumps", params, grid, {}, rng)
    if lam != 1.0:
        amp = lam ** (-2.0 / (params.p - 1.0))
        r = grid.nodes
        w0 = amp * np.interp(r / lam, r, data.w.values)
        w1 = amp / lam * np.interp(r / lam, r, data.wt.values)
        from .grid import state_from_arrays
        data = state_from_arrays(params, grid, w0, w1)
    profile = build_free_profile(data, abs(t_eval) + r_max)
    state = eval_linear(profile, t_eval)
    dens = _weighted_mass_density(state)
    h = grid.h
    r = grid.nodes
    total = float(trapz(dens, dx=h))
    rows = []
    residuals = []
    for R in R_list:
        outside = np.abs(r - abs(t_eval)) > R * lam
        res = float(trapz(np.where(outside, dens, 0.0), dx=h))
        frac = res / total if total > 0.0 else 0.0
        residuals.append(res)
        rows.append((float(R), res, frac))
    monotone = all(residuals[i + 1] <= residuals[i] + 1e-15 * total
                   for i in range(len(residuals) - 1))
    window = np.abs(r - abs(t_eval)) > (support * lam + 2.0)
    compact_res = float(trapz(np.where(window, dens, 0.0), dx=h))
    metrics = {
        "monotone": 1.0 if monotone else 0.0,
        "final_fraction": residuals[-1] / total if total > 0.0 else 0.0,
        "total_mass": total,
        "supp_plus_two_fraction": compact_res / total if total > 0.0 else 0.0,
    }
    config = {"p": p, "iota": iota, "t_eval": t_eval, "lam": lam,
              "R_list": [float(R) for R in R_list], "support": support,
              "r_max": r_max, "n": n, "seed": seed}
    return _report("huygens", params, config, metrics,
                   ("R", "residual", "fraction"), rows, "huygens")


# ---------------------------------------------------------------------------
# decay of the weighted exterior norm for global nonlinear solutions

def run_exterior_decay(*, p: float = 7.0, iota: int = -1,
                       family: str = "gaussian",
                       family_options: dict | None = None,
                       R_list=(1.0, 2.0, 4.0, 6.0), t_end: float = 8.0,
                       r_max: float = 20.0, n: int = 2048,
                       record_stride: int = 32,
                       seed: int | None = None) -> ExperimentReport:
    params = make_params(p, iota)
    grid = RadialGrid(r_max, n)
    opts = dict(family_options or {"amplitude": 0.3, "width": 1.2})
    rng = SplitMix64(seed) if seed is not None else None
    data = resolve_family(family, params, grid, opts, rng)
    cfg = SolverConfig(t_end=t_end, dt_ratio=1.0, record_stride=record_stride)
    traj = evolve(data, cfg)
    if traj.status != COMPLETED:
        raise BlowupEncountered(
            f"trajectory ended with status {traj.status}")
    e0 = generalized_energy(traj.states[0])
    m = params.m
    r = grid.nodes
    h = grid.h
    rows = []
    residuals = []
    for R in R_list:
        sup_tail = 0.0
        for state in traj.states:
            if state.time < 0.5 * t_end:
                continue
            lo = state.time + R
            if lo >= r_max:
                continue
            dw = diff_values(state.w.values, h)
            dens = (r * np.abs(dw)) ** m + (r * np.abs(state.wt.values)) ** m
            sup_tail = max(sup_tail, float(
                trapz(np.where(r >= lo, dens, 0.0), dx=h)))
        residuals.append(sup_tail)
        rows.append((float(R), sup_tail, sup_tail / e0 if e0 > 0 else 0.0))
    monotone = all(residuals[i + 1] <= residuals[i] + 1e-15 * max(e0, 1.0)
                   for i in range(len(residuals) - 1))
    metrics = {
        "monotone": 1.0 if monotone else 0.0,
        "final_fraction": residuals[-1] / e0 if e0 > 0.0 else 0.0,
        "e_m_initial": e0,
    }
    config = {"p": p, "iota": iota, "family": family, "family_options": opts,
              "R_list": [float(R) for R in R_list], "t_end": t_end,
              "r_max": r_max, "n": n, "record_stride": record_stride,
              "seed": seed}
    return _report("exterior_decay", params, config, metrics,
                   ("R", "residual", "fraction"), rows, "huygens")


# ---------------------------------------------------------------------------
# small-data linear approximation rate

def run_smalldata_rate(*, p: float = 7.0, iota: int = 1,
                       epsilons=(0.02, 0.04, 0.08), width: float = 1.5,
                       t_end: float = 10.0, r_max: float = 20.0,
                       n: int = 2560,
                       record_stride: int = 64) -> ExperimentReport:
    params = make_params(p, iota)
    grid = RadialGrid(r_max, n)
    m = params.m
    cfg = SolverConfig(t_end=t_end, dt_ratio=1.0, record_stride=record_stride)
    deltas, diffs = [], []
    for eps in epsilons:
        data = resolve_family("gaussian", params, grid,
                              {"amplitude": float(eps), "width": width})
        delta = (hardy_weighted_norm(data.w, "derivative", m)
                 + hardy_weighted_norm(data.wt, "position", m))
        traj_n = evolve(data, cfg)
        if traj_n.status != COMPLETED:
            raise BlowupEncountered(f"eps={eps} run ended {traj_n.status}")
        traj_l = evolve(data, cfg, linear=True)
        worst = 0.0
        for sn, sl in zip(traj_n.states, traj_l.states):
            dw = SampledFunction(grid, sn.w.values - sl.w.values)
            dwt = SampledFunction(grid, sn.wt.values - sl.wt.values)
            worst = max(worst, hardy_weighted_norm(dw, "derivative", m)
                        + hardy_weighted_norm(dwt, "position", m))
        deltas.append(delta)
        diffs.append(worst)
    slope, intercept = np.polyfit(np.log(deltas), np.log(diffs), 1)
    pair_ratios = [diffs[i + 1] / diffs[i] for i in range(len(diffs) - 1)]
    rows = [(deltas[i], diffs[i],
             float(np.exp(intercept) * deltas[i] ** slope))
            for i in range(len(deltas))]
    metrics = {
        "m": m,
        "fitted_slope": float(slope),
        "min_pair_ratio": float(min(pair_ratios)),
        "required_slope": 0.75 * m - THRESHOLDS["smalldata"]["slope_slack"],
    }
    config = {"p": p, "iota": iota, "epsilons": [float(e) for e in epsilons],
              "width": width, "t_end": t_end, "r_max": r_max, "n": n,
              "record_stride": record_stride}
    return _report("smalldata", params, config, metrics,
                   ("x", "y", "fit"), rows, "blowup")


# ---------------------------------------------------------------------------
# stationary-solution suite

def run_stationary_suite(*, p: float = 7.0, ells=(1.0, 2.0, 4.0),
                         s_cap: float = 1e3) -> ExperimentReport:
    params_def = make_params(p, -1)
    params_foc = make_params(p, +1)

    sol_def = solve_stationary(1.0, params_def, s_cap=s_cap)
    sol_rough = solve_stationary(1.0, params_def, s_cap=s_cap, rtol=1e-8,
                                 atol=1e-10)
    robustness = (abs(sol_rough.R_ell - sol_def.R_ell) / sol_def.R_ell
                  if sol_def.R_ell > 0 else np.inf)
    outer_slope = abs(sol_def.r_outer ** 2
                      * sol_def.eval_Zprime(sol_def.r_outer) + 1.0)

    worst_scaling = 0.0
    worst_pointwise = 0.0
    for ell in ells:
        if ell == 1.0:
            continue
        pw, rd = scaling_check(float(ell), params_def)
        worst_scaling = max(worst_scaling, rd)
        worst_pointwise = max(worst_pointwise, pw)

    sol_foc = solve_stationary(1.0, params_foc, s_cap=s_cap)
    masses = [partial_critical_mass(sol_foc, e) for e in (1e-1, 1e-2, 1e-3)]
    diverging = masses[0] < masses[1] < masses[2]
    exp_fit = singular_exponent_fit(sol_foc, (2e-3, 2e-2))

    sol_neg = solve_stationary(-1.0, params_foc, s_cap=s_cap)
    rs = np.geomspace(max(sol_foc.r_inner, sol_neg.r_inner) * 1.01,
                      min(sol_foc.r_outer, sol_neg.r_outer) * 0.99, 300)
    sign_defect = float(np.max(np.abs(sol_neg.eval_Z(rs) + sol_foc.eval_Z(rs))
                               / np.maximum(np.abs(sol_foc.eval_Z(rs)), 1e-300)))

    origin_floor = THRESHOLDS["stationary"]["origin_floor"]
    metrics = {
        "R_1": sol_def.R_ell,
        "R_1_halfwidth": sol_def.R_ell_halfwidth,
        "defocusing_radius_positive": 1.0 if sol_def.R_ell > 0.0 else 0.0,
        "focusing_reached_origin":
            1.0 if (sol_foc.R_ell == 0.0 and sol_foc.r_inner <= origin_floor)
            else 0.0,
        "outer_slope_defect": float(outer_slope),
        "asymptotic_defect_defocusing": sol_def.asymptotic_defect,
        "asymptotic_defect_focusing": sol_foc.asymptotic_defect,
        "worst_scaling_defect": float(worst_scaling),
        "worst_pointwise_defect": float(worst_pointwise),
        "robustness_defect": float(robustness),
        "sign_symmetry_defect": sign_defect,
        "critical_mass_diverging": 1.0 if diverging else 0.0,
        "singular_exponent_fit": float(exp_fit),
    }
    stride = max(1, len(sol_def.r) // 800)
    rows = [(float(r), float(z), float(zp),
             float(r * r * abs(r * z - 1.0)))
            for r, z, zp in zip(sol_def.r[::stride], sol_def.Z[::stride],
                                sol_def.Zprime[::stride])]
    config = {"p": p, "ells": [float(e) for e in ells], "s_cap": s_cap,
              "series_ell": 1.0, "series_iota": -1}
    report = _report("stationary", params_def, config, metrics,
                     ("r", "Z", "dZ", "r2_defect"), rows, "stationary")
    return report


# ---------------------------------------------------------------------------
# focusing ODE blow-up oracle

def ode_blowup_oracle(params: Params, amplitude: float, t_cap: float):
    """Integrate y'' = |y|^{p-1} y from (amplitude, 0) to divergence."""
    p = params.p

    def rhs(t, y):
        return np.array([y[1], abs(y[0]) ** (p - 1.0) * y[0]])

    return integrate_adaptive(rhs, 0.0, [amplitude, 0.0], t_cap,
                              rtol=1e-10, atol=1e-12, divergence=1e8)


def run_blowup_ode(*, p: float = 7.0, amplitude: float = 1.0,
                   plateau_radius: float = 6.0, r_max: float = 10.0,
                   n: int = 8192, t_end: float = 3.0,
                   blowup_threshold: float = 1e6,
                   record_stride: int = 64) -> ExperimentReport:
    params = make_params(p, +1)
    c_p = (2.0 * (p + 1.0) / (p - 1.0) ** 2) ** (1.0 / (p - 1.0))
    expected = -2.0 / (p - 1.0)
    config = {"p": p, "amplitude": amplitude,
              "plateau_radius": plateau_radius, "r_max": r_max, "n": n,
              "t_end": t_end, "blowup_threshold": blowup_threshold,
              "record_stride": record_stride}

    if amplitude == 0.0:
        metrics = {"vacuous": 1.0, "expected_exponent": expected, "c_p": c_p}
        return _report("blowup_ode", params, config, metrics,
                       ("x", "y", "fit"), [], "blowup")

    grid = RadialGrid(r_max, n)
    data = plateau_data(params, grid, amplitude=amplitude,
                        radius=plateau_radius)
    cfg = SolverConfig(t_end=t_end, dt_ratio=1.0,
                       blowup_threshold=blowup_threshold,
                       record_stride=record_stride)
    traj = evolve(data, cfg)
    oracle = ode_blowup_oracle(params, amplitude, 2.0 * t_end)
    T = oracle.blow_abscissa
    dt = grid.h

    cap = THRESHOLDS["blowup_ode"]["trace_cap"]
    trace_index = int(round(1.0 / grid.h))
    r_trace = grid.nodes[trace_index]
    trace_error = 0.0
    for state in traj.states:
        t = state.time
        if t >= plateau_radius - 1.0 - r_trace:
            continue
        y = float(hermite_eval(oracle.t, oracle.y[:, 0], oracle.y[:, 1],
                               np.array([t]))[0])
        if abs(y) > cap:
            continue
        trace_error = max(trace_error, abs(state.w.values[trace_index] - y)
                          / max(1.0, abs(y)))

    t_star = traj.t_star if traj.status == BLEWUP else np.inf
    t_star_err = abs(t_star - T) / dt if T is not None else np.inf

    mask = (oracle.y[:, 0] > 10.0) & (oracle.y[:, 0] < 1e4)
    slope = float(np.polyfit(np.log(T - oracle.t[mask]),
                             np.log(oracle.y[mask, 0]), 1)[0])

    fit_mask = (oracle.y[:, 0] > 1.0) & (oracle.y[:, 0] < 1e4)
    xs = T - oracle.t[fit_mask]
    rows = [(float(x), float(y), float(c_p * x ** expected))
            for x, y in zip(xs, oracle.y[fit_mask, 0])]
    metrics = {
        "vacuous": 0.0,
        "t_star_pde": float(t_star),
        "T_ode": float(T),
        "t_star_error_steps": float(t_star_err),
        "trace_error": float(trace_error),
        "selfsim_exponent": slope,
        "expected_exponent": expected,
        "c_p": c_p,
    }
    return _report("blowup_ode", params, config, metrics,
                   ("x", "y", "fit"), rows, "blowup")


RUNNERS = {
    "conservation": run_conservation,
    "channel": run_channel,
    "huygens": run_huygens,
    "exterior_decay": run_exterior_decay,
    "smalldata": run_smalldata_rate,
    "stationary": run_stationary_suite,
    "blowup_ode": run_blowup_ode,
}
