"""Leapfrog evolution of the radial supercritical wave equation.

The scheme runs on the reduced field v = r w, whose linear part is the
1-D wave equation.  At dt_ratio = 1 the linear stencil is the exact
d'Alembert recursion and the numerical domain of dependence coincides
with the light cone, which the exterior-energy experiments rely on.
There is no absorbing layer: runs must keep support + t_end inside
r_max.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (CausalClosureViolated, CFLViolation,
                     PreconditionViolated)
from .grid import RadialGrid, RadialState, state_from_arrays
from .model import Params

COMPLETED = "completed"
BLEWUP = "blewup"
UNSTABLE = "unstable"


@dataclass(frozen=True)
class SolverConfig:
    t_end: float
    dt_ratio: float = 1.0
    blowup_threshold: float = 1e6
    record_stride: int = 1

    def __post_init__(self):
        if not 0.0 < self.dt_ratio <= 1.0:
            raise CFLViolation(f"need dt_ratio in (0, 1], got {self.dt_ratio}")
        if self.blowup_threshold <= 0.0:
            raise ValueError("blowup_threshold must be positive")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")


@dataclass
class Trajectory:
    params: Params
    states: list[RadialState]
    status: str
    t_star: float | None = None

    @property
    def final(self) -> RadialState:
        return self.states[-1]


def nonlinearity(v, r, params: Params):
    """iota |v|^{p-1} v / r^{p-1}, with the origin value pinned to 0."""
    v = np.asarray(v, dtype=float)
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(v * 1.0)
    mask = r > 0.0
    vm = v[mask] if v.shape else v
    rm = r[mask] if r.shape else r
    if v.shape:
        out[mask] = params.iota * np.abs(vm) ** (params.p - 1.0) * vm / rm ** (params.p - 1.0)
        return out
    if r == 0.0:
        return 0.0
    return float(params.iota * np.abs(v) ** (params.p - 1.0) * v / r ** (params.p - 1.0))


def support_radius(state: RadialState, rel_tol: float = 1e-13) -> float:
    """Largest radius carrying numerically relevant reduced-field content."""
    v = np.abs(state.v)
    vt = np.abs(state.vt)
    peak = max(float(v.max()), float(vt.max()))
    if peak == 0.0:
        return 0.0
    hot = np.flatnonzero((v > rel_tol * peak) | (vt > rel_tol * peak))
    if hot.size == 0:
        return 0.0
    return float(state.grid.nodes[hot[-1]])


def _max_abs_w(v: np.ndarray, r: np.ndarray) -> float:
    w1 = v[1] / r[1]
    w2 = v[2] / r[2]
    w3 = v[3] / r[3]
    origin = abs(3.0 * w1 - 3.0 * w2 + w3)
    return max(float(np.max(np.abs(v[1:] / r[1:]))), origin)


def _state_from_v(params: Params, grid: RadialGrid, v, vt, t) -> RadialState:
    r = grid.nodes
    w = np.empty_like(v)
    wt = np.empty_like(vt)
    w[1:] = v[1:] / r[1:]
    wt[1:] = vt[1:] / r[1:]
    w[0] = 3.0 * w[1] - 3.0 * w[2] + w[3]
    wt[0] = 3.0 * wt[1] - 3.0 * wt[2] + wt[3]
    return state_from_arrays(params, grid, w, wt, time=t)


def evolve(initial: RadialState, config: SolverConfig, *,
           linear: bool = False) -> Trajectory:
    """Run the leapfrog scheme from `initial` until t_end or blow-up.

    Snapshots are recorded at t = 0, every record_stride steps, and at
    the final step.  t_end is snapped to the nearest step multiple.
    With linear=True the power nonlinearity is disabled.
    """
    grid = initial.grid
    params = initial.params
    h = grid.h
    dt = config.dt_ratio * h
    nsteps = max(1, int(round(config.t_end / dt)))
    supp = support_radius(initial)
    if supp + nsteps * dt > grid.r_max + 1e-9 * grid.r_max:
        raise CausalClosureViolated(
            f"support {supp:.3g} + t_end {nsteps * dt:.3g} exceeds "
            f"r_max {grid.r_max:.3g}")

    r = grid.nodes
    coef = config.dt_ratio ** 2
    rp = np.ones_like(r)
    rp[1:] = r[1:] ** (params.p - 1.0)

    def accel(v):
        lap = np.zeros_like(v)
        lap[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / (h * h)
        if linear:
            return lap
        nl = np.zeros_like(v)
        nl[1:] = params.iota * np.abs(v[1:]) ** (params.p - 1.0) * v[1:] / rp[1:]
        return lap + nl

    v_prev = initial.v.copy()
    vt0 = initial.vt.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        a0 = accel(v_prev)
        v_cur = v_prev + dt * vt0 + 0.5 * dt * dt * a0
        v_cur[0] = 0.0
        v_cur[-1] = 0.0

        first = initial if initial.time == 0.0 else state_from_arrays(
            params, grid, initial.w.values, initial.wt.values, 0.0)
        states = [first]
        status = COMPLETED
        t_star = None

        def flush(k_idx, v_km1, v_k, v_kp1):
            vt_k = (v_kp1 - v_km1) / (2.0 * dt)
            states.append(_state_from_v(params, grid, v_k, vt_k, k_idx * dt))

        k = 1
        while k <= nsteps:
            if not np.all(np.isfinite(v_cur)):
                status = UNSTABLE
                break
            top = _max_abs_w(v_cur, r)
            if top > config.blowup_threshold:
                status = BLEWUP
                # threshold crossed between levels k-1 and k: report midpoint
                t_star = (k - 0.5) * dt
                # one-sided second-order velocity at the last live level
                a_k = accel(v_cur)
                vt_k = (v_cur - v_prev) / dt + 0.5 * dt * a_k
                if np.all(np.isfinite(vt_k)):
                    states.append(_state_from_v(params, grid, v_cur, vt_k, k * dt))
                break
            sec = v_cur[2:] - 2.0 * v_cur[1:-1] + v_cur[:-2]
            v_next = np.empty_like(v_cur)
            v_next[1:-1] = 2.0 * v_cur[1:-1] - v_prev[1:-1] + coef * sec
            if not linear:
                v_next[1:-1] += (dt * dt) * (
                    params.iota * np.abs(v_cur[1:-1]) ** (params.p - 1.0)
                    * v_cur[1:-1] / rp[1:-1])
            v_next[0] = 0.0
            v_next[-1] = 0.0
            if k % config.record_stride == 0 or k == nsteps:
                flush(k, v_prev, v_cur, v_next)
            v_prev, v_cur = v_cur, v_next
            k += 1

    return Trajectory(params=params, states=states, status=status,
                      t_star=t_star)


def detect_blowup(traj: Trajectory) -> float | None:
    """First time max|w| exceeded the threshold, or None if it never did."""
    return traj.t_star if traj.status == BLEWUP else None


def check_finite_speed(data_a: RadialState, data_b: RadialState, R: float,
                       config: SolverConfig) -> float:
    """Max discrepancy outside the influence cone of radius R.

    Requires the two data sets to coincide on r >= R; evolves both and
    returns max over snapshots and over r >= R + t of |w_a - w_b|.
    """
    grid = data_a.grid
    r = grid.nodes
    outside = r >= R
    gap_w = np.max(np.abs(data_a.w.values[outside] - data_b.w.values[outside]))
    gap_wt = np.max(np.abs(data_a.wt.values[outside] - data_b.wt.values[outside]))
    if max(gap_w, gap_wt) > 1e-12:
        raise PreconditionViolated(
            f"data differ on r >= {R} by {max(gap_w, gap_wt):.3e}")
    traj_a = evolve(data_a, config)
    traj_b = evolve(data_b, config)
    dt = config.dt_ratio * grid.h
    # pair snapshots by time; a blow-up in one run shortens the overlap
    times_b = {round(s.time / dt): s for s in traj_b.states}
    worst = 0.0
    for sa in traj_a.states:
        sb = times_b.get(round(sa.time / dt))
        if sb is None:
            continue
        mask = r >= R + sa.time
        if not np.any(mask):
            continue
        worst = max(worst, float(np.max(np.abs(
            sa.w.values[mask] - sb.w.values[mask]))))
    return worst
