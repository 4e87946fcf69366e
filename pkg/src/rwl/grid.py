"""Uniform radial grids, finite differences and L^m trapezoid quadrature.

The grid is always uniform with r_0 = 0: the leapfrog scheme needs
dt = dr exactness and the reduced field v = r w pins node 0 to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadInterval, GridTooSmall
from .model import Params

trapz = getattr(np, "trapezoid", None) or np.trapz  # numpy 2.x rename


@dataclass(frozen=True)
class RadialGrid:
    """Nodes r_i = i * h, i = 0..n, with h = r_max / n."""

    r_max: float
    n: int

    def __post_init__(self):
        if self.n < 16:
            raise GridTooSmall(f"need n >= 16, got {self.n}")
        if not self.r_max > 0.0:
            raise ValueError(f"need r_max > 0, got {self.r_max}")

    @property
    def h(self) -> float:
        return self.r_max / self.n

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.n + 1) * self.h


@dataclass(frozen=True)
class SampledFunction:
    grid: RadialGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.grid.n + 1,):
            raise ValueError(
                f"values length {vals.shape} != n+1 = {self.grid.n + 1}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("sampled values must be finite")


@dataclass(frozen=True)
class RadialState:
    """Snapshot (w, dw/dt) on a radial grid at one time.

    The reduced field v = r * w vanishes exactly at node 0 because r_0 = 0.
    """

    params: Params
    grid: RadialGrid
    w: SampledFunction
    wt: SampledFunction
    time: float = 0.0

    def __post_init__(self):
        if self.w.grid != self.grid or self.wt.grid != self.grid:
            raise ValueError("component grids must match the state grid")

    @property
    def v(self) -> np.ndarray:
        """Reduced field r * w (node 0 is exactly 0)."""
        return self.grid.nodes * self.w.values

    @property
    def vt(self) -> np.ndarray:
        """Time derivative of the reduced field, r * dw/dt."""
        return self.grid.nodes * self.wt.values


def state_from_arrays(params: Params, grid: RadialGrid, w, wt,
                      time: float = 0.0) -> RadialState:
    return RadialState(params, grid,
                       SampledFunction(grid, np.asarray(w, dtype=float)),
                       SampledFunction(grid, np.asarray(wt, dtype=float)),
                       time)


def differentiate(f: SampledFunction) -> SampledFunction:
    """Second-order first derivative: centered inside, one-sided at the ends."""
    n = f.grid.n
    if n < 4:
        raise GridTooSmall("differentiate needs n >= 4")
    return SampledFunction(f.grid, diff_values(f.values, f.grid.h))


def diff_values(vals: np.ndarray, h: float) -> np.ndarray:
    """Array form of `differentiate` for internal reuse."""
    out = np.empty_like(vals)
    out[1:-1] = (vals[2:] - vals[:-2]) / (2.0 * h)
    out[0] = (-3.0 * vals[0] + 4.0 * vals[1] - vals[2]) / (2.0 * h)
    out[-1] = (3.0 * vals[-1] - 4.0 * vals[-2] + vals[-3]) / (2.0 * h)
    return out


def antiderivative(f: SampledFunction) -> SampledFunction:
    """Cumulative trapezoid with F(0) = 0."""
    vals = f.values
    h = f.grid.h
    out = np.zeros_like(vals)
    np.cumsum((vals[1:] + vals[:-1]) * (0.5 * h), out=out[1:])
    return SampledFunction(f.grid, out)


def trapezoid_power(x: np.ndarray, vals: np.ndarray, m: float,
                    a: float, b: float) -> float:
    """Trapezoid of |vals|^m over [a, b] on the sorted abscissae x.

    Off-grid endpoints interpolate |vals|^m linearly, so the integrand
    stays nonnegative and the result is monotone in the interval.
    """
    if a > b:
        raise BadInterval(f"reversed interval [{a}, {b}]")
    if a < x[0] - 1e-12 * max(1.0, abs(x[0])) or b > x[-1] + 1e-12 * max(1.0, abs(x[-1])):
        raise BadInterval(f"[{a}, {b}] leaves the sampled domain [{x[0]}, {x[-1]}]")
    a = min(max(a, x[0]), x[-1])
    b = min(max(b, x[0]), x[-1])
    if a == b:
        return 0.0
    g = np.abs(vals) ** m
    ga = np.interp(a, x, g)
    gb = np.interp(b, x, g)
    inside = (x > a) & (x < b)
    xs = np.concatenate(([a], x[inside], [b]))
    gs = np.concatenate(([ga], g[inside], [gb]))
    return float(trapz(gs, xs))


def integrate_power(f: SampledFunction, m: float, a: float, b: float) -> float:
    """Trapezoid approximation of the integral of |f|^m over [a, b]."""
    if m < 1.0:
        raise ValueError(f"need m >= 1, got {m}")
    if a < 0.0:
        raise BadInterval(f"need a >= 0, got {a}")
    return trapezoid_power(f.grid.nodes, f.values, m, a, b)
