"""Singular stationary solutions through the inversion h(s) = Z(1/s).

The stationary radial profile with r Z -> ell at infinity satisfies
h'' = -iota s^{-4} |h|^{p-1} h with h(s)/s -> ell at s = 0.  A two-term
series seeds the integration at a small abscissa; the defocusing branch
must blow up at a finite s_star (inner radius R_ell = 1/s_star), the
focusing branch runs to the configured cap (R_ell = 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SeriesRegionExceeded, ZeroEll
from .grid import trapz
from .model import Params
from .odeint import (DIVERGED, REACHED_END, UNDERFLOW, OdeResult,
                     hermite_eval, integrate_adaptive)

DIVERGENCE_THRESHOLD = 1e8
SERIES_DEFECT_MAX = 1e-6


def _signed_power(x: float, q: float) -> float:
    return abs(x) ** (q - 1.0) * x if x != 0.0 else 0.0


def series_init(ell: float, s0: float, params: Params) -> tuple[float, float]:
    """Two-term series values (h, h') at the starting abscissa s0."""
    if ell == 0.0:
        raise ZeroEll("ell must be nonzero")
    p, iota = params.p, params.iota
    sp = _signed_power(ell, p)
    h = ell * s0 - iota * sp * s0 ** (p - 2.0) / ((p - 2.0) * (p - 3.0))
    hprime = ell - iota * sp * s0 ** (p - 3.0) / (p - 3.0)
    return h, hprime


def series_defect(ell: float, s0: float, params: Params) -> float:
    """Residual of the series in the h-equation at s0."""
    p, iota = params.p, params.iota
    h, _ = series_init(ell, s0, params)
    rhs = -iota * abs(h) ** (p - 1.0) * h / s0 ** 4
    series_second = -iota * _signed_power(ell, p) * s0 ** (p - 4.0)
    return abs(rhs - series_second)


@dataclass
class HSolution:
    params: Params
    ell: float
    s: np.ndarray = field(repr=False)
    h: np.ndarray = field(repr=False)
    hprime: np.ndarray = field(repr=False)
    hsecond: np.ndarray = field(repr=False)
    s_star: float | None = None
    s_star_halfwidth: float | None = None

    def eval_h(self, s) -> np.ndarray:
        return hermite_eval(self.s, self.h, self.hprime, s)

    def eval_hprime(self, s) -> np.ndarray:
        return hermite_eval(self.s, self.hprime, self.hsecond, s)


def integrate_h(ell: float, params: Params, s0: float, s_cap: float, *,
                rtol: float = 1e-10, atol: float = 1e-12) -> HSolution:
    """Integrate the h-equation from s0 to s_cap or to divergence."""
    if ell == 0.0:
        raise ZeroEll("ell must be nonzero")
    if series_defect(ell, s0, params) > SERIES_DEFECT_MAX:
        raise SeriesRegionExceeded(
            f"series defect at s0 = {s0} exceeds {SERIES_DEFECT_MAX}")
    p, iota = params.p, params.iota

    def rhs(s, y):
        return np.array([y[1], -iota * abs(y[0]) ** (p - 1.0) * y[0] / s ** 4])

    y0 = series_init(ell, s0, params)
    res: OdeResult = integrate_adaptive(
        rhs, s0, y0, s_cap, rtol=rtol, atol=atol, min_step=1e-14,
        max_step=(s_cap - s0) / 256.0, divergence=DIVERGENCE_THRESHOLD)
    if res.status not in (REACHED_END, DIVERGED, UNDERFLOW):
        raise RuntimeError(f"h-integration failed: {res.status}")
    return HSolution(
        params=params, ell=ell,
        s=res.t, h=res.y[:, 0], hprime=res.y[:, 1],
        hsecond=res.yprime[:, 1],
        s_star=res.blow_abscissa,
        s_star_halfwidth=res.blow_halfwidth,
    )


@dataclass
class StationarySolution:
    """Z branch: samples on (r_inner, r_outer], detected inner radius,
    and the defect of the r Z -> ell asymptote."""

    params: Params
    ell: float
    r: np.ndarray = field(repr=False)
    Z: np.ndarray = field(repr=False)
    Zprime: np.ndarray = field(repr=False)
    R_ell: float
    R_ell_halfwidth: float
    asymptotic_defect: float
    hsol: HSolution = field(repr=False)

    @property
    def r_inner(self) -> float:
        return float(self.r[0])

    @property
    def r_outer(self) -> float:
        return float(self.r[-1])

    def eval_Z(self, r) -> np.ndarray:
        return self.hsol.eval_h(1.0 / np.asarray(r, dtype=float))

    def eval_Zprime(self, r) -> np.ndarray:
        s = 1.0 / np.asarray(r, dtype=float)
        return -s * s * self.hsol.eval_hprime(s)


def z_from_h(hsol: HSolution, ell: float) -> StationarySolution:
    """Map the h samples back to the radial profile Z(r) = h(1/r)."""
    s = hsol.s
    r = (1.0 / s)[::-1]
    Z = hsol.h[::-1]
    Zp = (-s * s * hsol.hprime)[::-1]
    if hsol.s_star is not None:
        R_ell = 1.0 / hsol.s_star
        halfwidth = hsol.s_star_halfwidth / hsol.s_star ** 2
    else:
        R_ell, halfwidth = 0.0, 0.0
    outer = r >= 0.5 * r[-1]
    defect = float(np.max(r[outer] ** 2 * np.abs(r[outer] * Z[outer] - ell)))
    return StationarySolution(
        params=hsol.params, ell=ell, r=r, Z=Z, Zprime=Zp,
        R_ell=R_ell, R_ell_halfwidth=halfwidth,
        asymptotic_defect=defect, hsol=hsol)


def solve_stationary(ell: float, params: Params, *, s0: float = 1e-3,
                     s_cap: float = 1e3, rtol: float = 1e-10,
                     atol: float = 1e-12) -> StationarySolution:
    """Series-seeded shooting with automatic halving of s0."""
    while series_defect(ell, s0, params) > SERIES_DEFECT_MAX:
        s0 *= 0.5
        if s0 < 1e-12:
            raise SeriesRegionExceeded("series never reached tolerance")
    hsol = integrate_h(ell, params, s0, s_cap, rtol=rtol, atol=atol)
    return z_from_h(hsol, ell)


def scaling_check(ell: float, params: Params) -> tuple[float, float]:
    """Compare Z_ell against the rescaled unit branch.

    Returns (max relative pointwise discrepancy on the common domain,
    |R_ell * lam / R_1 - 1|) with lam = |ell|^{-(p-1)/(p-3)}.
    """
    if ell == 0.0:
        raise ZeroEll("ell must be nonzero")
    p = params.p
    lam = abs(ell) ** (-(p - 1.0) / (p - 3.0))
    sign = 1.0 if ell > 0.0 else -1.0
    amp = lam ** (2.0 / (p - 1.0))

    sol_ell = solve_stationary(ell, params)
    sol_one = solve_stationary(1.0, params)

    r_lo = max(sol_ell.r_inner, sol_one.r_inner / lam)
    if sol_ell.R_ell > 0.0 or sol_one.R_ell > 0.0:
        r_lo = max(r_lo, 2.0 * max(sol_ell.R_ell, sol_one.R_ell / lam))
    r_hi = min(sol_ell.r_outer, sol_one.r_outer / lam)
    if not r_hi > r_lo:
        raise RuntimeError("no common comparison domain")
    rs = np.geomspace(r_lo, r_hi, 400)
    direct = sol_ell.eval_Z(rs)
    predicted = sign * amp * sol_one.eval_Z(lam * rs)
    scale = np.maximum(np.abs(direct), 1e-300)
    pointwise = float(np.max(np.abs(direct - predicted) / scale))

    if sol_one.R_ell > 0.0:
        radius_defect = abs(sol_ell.R_ell * lam / sol_one.R_ell - 1.0)
    else:
        radius_defect = abs(sol_ell.R_ell)
    return pointwise, radius_defect


def partial_critical_mass(sol: StationarySolution, eps: float) -> float:
    """int_eps^1 r^m |Z'|^m dr, the inner piece of the critical seminorm."""
    m = sol.params.m
    rs = np.geomspace(eps, 1.0, 2000)
    zp = sol.eval_Zprime(rs)
    return float(trapz((rs * np.abs(zp)) ** m, rs))


def singular_exponent_fit(sol: StationarySolution,
                          r_window: tuple[float, float]) -> float:
    """Least-squares slope of log|Z| against log r on the window."""
    rs = np.geomspace(r_window[0], r_window[1], 200)
    z = np.abs(sol.eval_Z(rs))
    coeffs = np.polyfit(np.log(rs), np.log(z), 1)
    return float(coeffs[0])
