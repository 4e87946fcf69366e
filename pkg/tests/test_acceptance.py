"""Acceptance gate: one test per certified criterion, at its stated
tolerance.  Each test prints a single PASS/FAIL line (run with -s to see
them live); the suite is green iff every criterion holds.
"""

import time
from pathlib import Path

import numpy as np
import pytest

from rwl import (RadialGrid, SampledFunction, SolverConfig,
                 build_free_profile, check_finite_speed, eval_linear, evolve,
                 make_params, sobolev_norm_radial, truncate_T, utov_sides)
from rwl.cli import dispatch
from rwl.dalembert import FreeWaveProfile
from rwl.energetics import radial_lm_norm
from rwl.families import SplitMix64, bump, bump_sum, gaussian_data
from rwl.grid import diff_values, state_from_arrays
from rwl.experiments import (run_blowup_ode, run_channel, run_conservation,
                             run_huygens, run_smalldata_rate,
                             run_stationary_suite)


def criterion(name: str, ok: bool, detail: str) -> None:
    print(f"[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


def test_dalembert_exactness():
    """Leapfrog at dt = dr reproduces the profile evaluation to 1e-12."""
    params = make_params(7.0, +1)
    n, r_max, t_end = 4096, 16.0, 10.0
    grid = RadialGrid(r_max, n)
    h = grid.h
    k = int(np.ceil((r_max + t_end) / h - 1e-9))
    s = (np.arange(2 * k + 1) - k) * h
    rng = SplitMix64(12345)
    f = bump_sum(s, rng, center_range=(-4.0, 4.0), width_range=(0.5, 2.0))
    profile = FreeWaveProfile(params=params, grid=grid, k=k,
                              fdot=diff_values(f, h), f=f)
    start = time.perf_counter()
    state0 = eval_linear(profile, 0.0)
    traj = evolve(state0, SolverConfig(t_end=t_end, dt_ratio=1.0,
                                       record_stride=256), linear=True)
    worst = 0.0
    for snap in traj.states:
        ref = eval_linear(profile, snap.time)
        worst = max(worst, float(np.max(np.abs(snap.v - ref.v))))
    elapsed = time.perf_counter() - start
    criterion("dalembert-exactness", worst <= 1e-12 and elapsed <= 2.0,
              f"max |rw| deviation {worst:.2e}, {elapsed:.2f}s")


def test_generalized_energy_conservation():
    """Surrogate mass drift <= 1e-6; grid ratio inside the m-bracket."""
    details = []
    ok = True
    for p, iota in ((7.0, 1), (9.0, -1)):
        rep = run_conservation(p=p, iota=iota)
        m = rep.metrics["m"]
        lo, hi = 2.0 ** (1 - m) / 1.1, 1.1 * 2.0 ** (m - 1)
        ok = ok and rep.metrics["surrogate_drift"] <= 1e-6
        ok = ok and lo <= rep.metrics["ratio_min"]
        ok = ok and rep.metrics["ratio_max"] <= hi
        details.append(f"p={p}: drift {rep.metrics['surrogate_drift']:.1e}, "
                       f"ratios [{rep.metrics['ratio_min']:.3f}, "
                       f"{rep.metrics['ratio_max']:.3f}]")
    criterion("generalized-energy-conservation", ok, "; ".join(details))


def test_channel_dichotomy():
    """100 seeded compact data, p = 7, R = 0.5: zero violations."""
    start = time.perf_counter()
    rep = run_channel(p=7.0, R=0.5, horizon=10.0, trials=100, seed=42)
    elapsed = time.perf_counter() - start
    ok = rep.metrics["failures"] == 0.0 and elapsed <= 30.0
    criterion("channel-dichotomy", ok,
              f"failures {int(rep.metrics['failures'])}, worst margin "
              f"{rep.metrics['worst_margin']:.4f}, {elapsed:.1f}s")


def test_hardy_and_utov():
    """Weighted-norm chain constants finite over 50 bumps; m = 2 sides
    agree to 1e-6."""
    params = make_params(7.0, +1)
    m = params.m
    g = RadialGrid(40.0, 4096)
    rng = SplitMix64(31415)
    c_pos, c_der, c_chain = 0.0, 0.0, 0.0
    for _ in range(50):
        phi = SampledFunction(g, bump_sum(g.nodes, rng))
        der = SampledFunction(g, diff_values(phi.values, g.h))
        weighted_pos = radial_lm_norm(phi, float(m), m)
        weighted_der = radial_lm_norm(der, float(m), m)
        s_pos = sobolev_norm_radial(phi, params.s_c - 1.0)
        s_der = sobolev_norm_radial(phi, params.s_c)
        if s_pos > 1e-12:
            c_pos = max(c_pos, weighted_pos / s_pos)
        if s_der > 1e-12:
            c_der = max(c_der, weighted_der / s_der)
        if weighted_der > 1e-12:
            chain_lhs = (radial_lm_norm(phi, 0.0, m)
                         + radial_lm_norm(phi, 2.0, 3.0 * m))
            c_chain = max(c_chain, chain_lhs / weighted_der)
    finite = all(np.isfinite(c) and c > 0.0
                 for c in (c_pos, c_der, c_chain))

    g2 = RadialGrid(20.0, 131072)
    phi = SampledFunction(g2, np.exp(-g2.nodes))
    worst_rel = 0.0
    for R in (0.0, 0.5, 1.0, 2.5):
        lhs, rhs = utov_sides(phi, R, 2.0)
        worst_rel = max(worst_rel, abs(lhs - rhs) / lhs)
    ok = finite and worst_rel <= 1e-6
    criterion("hardy-utov", ok,
              f"C_pos {c_pos:.3f}, C_der {c_der:.3f}, C_chain {c_chain:.3f}, "
              f"m=2 mismatch {worst_rel:.2e}")


def test_stationary_solutions():
    """Focusing reaches the origin floor, defocusing radius robust,
    scaling law within 1% for ell in {2, 4}."""
    start = time.perf_counter()
    rep = run_stationary_suite(p=7.0, ells=(1.0, 2.0, 4.0))
    elapsed = time.perf_counter() - start
    # focusing branch: r^2 |r Z - 1| bounded on [10, 1000]
    from rwl.stationary import solve_stationary
    foc = solve_stationary(1.0, make_params(7.0, +1))
    rs = np.geomspace(10.0, 1000.0, 400)
    bound = float(np.max(rs ** 2 * np.abs(rs * foc.eval_Z(rs) - 1.0)))
    ok = (rep.passed
          and rep.metrics["focusing_reached_origin"] == 1.0
          and bound < 1.0
          and rep.metrics["robustness_defect"] <= 1e-4
          and rep.metrics["worst_scaling_defect"] <= 1e-2
          and elapsed <= 5.0)
    criterion("stationary-solutions", ok,
              f"R_1 {rep.metrics['R_1']:.6f}, scaling defect "
              f"{rep.metrics['worst_scaling_defect']:.2e}, asymptote bound "
              f"{bound:.2e}, {elapsed:.1f}s")


def test_grid_finite_speed():
    """Interior modifications never reach r >= R + t in nonlinear runs."""
    worst = 0.0
    for iota, seed in ((1, 3), (-1, 4)):
        params = make_params(7.0, iota)
        g = RadialGrid(16.0, 2048)
        base = gaussian_data(params, g, amplitude=0.15, width=1.5)
        rng = SplitMix64(seed)
        r = g.nodes
        mod_vals = base.w.values + bump(r, rng.uniform(0.4, 0.8),
                                        rng.uniform(0.2, 0.35),
                                        rng.uniform(-0.5, 0.5))
        mod = state_from_arrays(params, g, mod_vals, base.wt.values)
        worst = max(worst, check_finite_speed(
            base, mod, 2.0, SolverConfig(t_end=6.0, record_stride=64)))
    criterion("grid-finite-speed", worst <= 1e-10,
              f"max leakage {worst:.2e}")


def test_ode_blowup_oracle():
    """Plateau run vs the y'' = |y|^{p-1} y oracle: trace, time, exponent."""
    rep = run_blowup_ode(p=7.0, amplitude=1.0)
    c_p_ok = abs(rep.metrics["c_p"] - (4.0 / 9.0) ** (1.0 / 6.0)) < 1e-12
    exp_ok = abs(rep.metrics["selfsim_exponent"] + 1.0 / 3.0) <= 0.05 / 3.0
    ok = (rep.metrics["trace_error"] <= 1e-5
          and rep.metrics["t_star_error_steps"] <= 2.0
          and exp_ok and c_p_ok)
    criterion("ode-blowup-oracle", ok,
              f"trace {rep.metrics['trace_error']:.2e}, t* error "
              f"{rep.metrics['t_star_error_steps']:.2f} steps, exponent "
              f"{rep.metrics['selfsim_exponent']:.4f}")


def test_smalldata_rate():
    """Fitted slope of the weighted difference >= 3m/4 - 0.25 (p = 7)."""
    start = time.perf_counter()
    rep = run_smalldata_rate(p=7.0, epsilons=(0.02, 0.04, 0.08))
    elapsed = time.perf_counter() - start
    m = rep.metrics["m"]
    ok = (rep.metrics["fitted_slope"] >= 0.75 * m - 0.25
          and elapsed <= 60.0)
    criterion("smalldata-rate", ok,
              f"slope {rep.metrics['fitted_slope']:.3f} vs floor "
              f"{0.75 * m - 0.25}, {elapsed:.1f}s")


def test_huygens_localization():
    """Compact data at t = 20: weighted mass outside supp + 2 <= 1e-10."""
    rep = run_huygens(t_eval=20.0)
    frac = rep.metrics["supp_plus_two_fraction"]
    criterion("huygens-localization", frac <= 1e-10,
              f"outside-window fraction {frac:.2e}")


def test_operator_bounds():
    """Truncation/indicator ratios stable in R; continuity sequence falls
    below 1e-2 of the norm."""
    params = make_params(7.0, +1)
    g = RadialGrid(40.0, 4096)
    r = g.nodes
    rng = SplitMix64(2024)
    family = []
    for _ in range(30):
        c = rng.uniform(0.7, 1.3)
        wdt = rng.uniform(0.5, 0.9)
        a = rng.uniform(-1.0, 1.0)
        lead = bump(r, c, wdt, a if abs(a) > 0.2 else 0.5)
        family.append(lead + bump_sum(r, rng, count_range=(2, 5),
                                      center_range=(0.5, 3.0),
                                      width_range=(0.3, 1.0)))

    def measure(order, apply):
        consts = []
        for R in (0.5, 1.0, 2.0, 4.0):
            worst = 0.0
            for vals in family:
                phi = SampledFunction(g, np.interp(r / R, r, vals))
                denom = sobolev_norm_radial(phi, order)
                if denom < 1e-12:
                    continue
                worst = max(worst, sobolev_norm_radial(apply(phi, R), order)
                            / denom)
            consts.append(worst)
        consts = np.array(consts)
        return float((consts.max() - consts.min()) / consts.min())

    spread_t = measure(params.s_c, truncate_T)
    spread_i = measure(params.s_c - 1.0, lambda phi, R: SampledFunction(
        g, np.where(r < R, phi.values, 0.0)))

    phi = SampledFunction(g, np.exp(-((r - 2.0) ** 2)))
    sigma = 1.0
    nrm = sobolev_norm_radial(phi, params.s_c)
    frozen = truncate_T(phi, sigma)
    prev = np.inf
    decreasing = True
    val = np.inf
    for k in range(1, 10):
        R = sigma + 4.0 ** -k
        delta = SampledFunction(g, truncate_T(phi, R).values - frozen.values)
        val = sobolev_norm_radial(delta, params.s_c)
        decreasing = decreasing and val < prev
        prev = val
    ok = (spread_t <= 0.20 and spread_i <= 0.20 and decreasing
          and val < 1e-2 * nrm)
    criterion("operator-bounds", ok,
              f"spreads {spread_t:.4f}/{spread_i:.4f}, final continuity "
              f"fraction {val / nrm:.2e}")


def test_determinism(tmp_path):
    """`rwl all --seed 42` twice: byte-identical output directories."""
    out_a, out_b = tmp_path / "A", tmp_path / "B"
    for out in (out_a, out_b):
        code = dispatch(["all", "--seed", "42", "--out", str(out), "--quiet"])
        assert code == 0
    rels = sorted(p.relative_to(out_a) for p in out_a.rglob("*")
                  if p.is_file())
    rels_b = sorted(p.relative_to(out_b) for p in out_b.rglob("*")
                    if p.is_file())
    identical = rels == rels_b and all(
        (out_a / rel).read_bytes() == (out_b / rel).read_bytes()
        for rel in rels)
    criterion("determinism", identical,
              f"{len(rels)} files compared byte-for-byte")
