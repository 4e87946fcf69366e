"""Static threshold table: the single source of pass/fail decisions.

Every report echoes its experiment's row, and the pass flag must be
recomputable from the serialized metrics plus this table alone.  Data
families used by randomized experiments are documented here as well so
a report is interpretable without reading the code.
"""

from __future__ import annotations

THRESHOLDS: dict[str, dict] = {
    "conservation": {
        # grid ratio must stay inside [2^{1-m}/slack, slack*2^{m-1}]
        "bracket_slack": 1.1,
        "surrogate_drift_max": 1e-6,
    },
    "channel": {
        # surrogate lower bound E(t) >= (1/2 - slack) * E(0), exact in theory
        "surrogate_slack": 1e-9,
        # grid-level bound E_grid(t) >= (1/2 - margin) * 2^{1-m} * E_grid(0)
        "grid_margin": 0.05,
        "zero_energy_floor": 1e-14,
    },
    "huygens": {
        "final_fraction_max": 1e-3,
    },
    "exterior_decay": {
        "final_fraction_max": 1e-3,
    },
    "smalldata": {
        # fitted log-log slope must reach 3m/4 minus this slack
        "slope_slack": 0.25,
    },
    "stationary": {
        "asymptote_tol": 1e-4,        # |r^2 Z' + ell| at the outer edge
        "scaling_tol": 1e-2,          # |R_ell * lam / R_1 - 1|
        "pointwise_tol": 1e-6,        # rescaled-branch pointwise defect
        "robustness_tol": 1e-4,       # R_ell shift under rtol 1e-10 -> 1e-8
        "origin_floor": 1.5e-3,       # focusing branch must reach this radius
    },
    "blowup_ode": {
        "trace_error_max": 1e-4,      # causal-core trace, |y| <= trace_cap
        "trace_cap": 2.0,
        "t_star_max_steps": 2.0,      # |t_star - T_ode| in units of dt
        "exponent_rel_tol": 0.05,     # self-similar exponent vs -2/(p-1)
    },
    "families": {
        # seeded sums of bumps: count, center, width, amplitude ranges
        "bumps": {"count": [3, 6], "center": [1.0, 6.0],
                  "width": [0.5, 1.5], "amplitude": [-1.0, 1.0]},
        "prng": "splitmix64",
    },
}


def evaluate_pass(experiment: str, metrics: dict) -> bool:
    """Recompute the pass flag for `experiment` from metrics alone."""
    t = THRESHOLDS[experiment]
    if experiment == "conservation":
        m = metrics["m"]
        slack = t["bracket_slack"]
        lo = 2.0 ** (1.0 - m) / slack
        hi = slack * 2.0 ** (m - 1.0)
        return (lo <= metrics["ratio_min"] and metrics["ratio_max"] <= hi
                and metrics["surrogate_drift"] <= t["surrogate_drift_max"])
    if experiment == "channel":
        return metrics["failures"] == 0
    if experiment in ("huygens", "exterior_decay"):
        return (metrics["monotone"] == 1.0
                and metrics["final_fraction"] <= t["final_fraction_max"])
    if experiment == "smalldata":
        floor = 0.75 * metrics["m"] - t["slope_slack"]
        return metrics["fitted_slope"] >= floor
    if experiment == "stationary":
        return (metrics["defocusing_radius_positive"] == 1.0
                and metrics["focusing_reached_origin"] == 1.0
                and metrics["outer_slope_defect"] <= t["asymptote_tol"]
                and metrics["worst_scaling_defect"] <= t["scaling_tol"]
                and metrics["worst_pointwise_defect"] <= t["pointwise_tol"]
                and metrics["robustness_defect"] <= t["robustness_tol"]
                and metrics["sign_symmetry_defect"] <= t["pointwise_tol"])
    if experiment == "blowup_ode":
        if metrics.get("vacuous", 0.0) == 1.0:
            return True
        expected = metrics["expected_exponent"]
        return (metrics["trace_error"] <= t["trace_error_max"]
                and metrics["t_star_error_steps"] <= t["t_star_max_steps"]
                and abs(metrics["selfsim_exponent"] - expected)
                <= t["exponent_rel_tol"] * abs(expected))
    raise KeyError(f"no threshold row for experiment {experiment!r}")
