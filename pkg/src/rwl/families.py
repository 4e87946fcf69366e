"""Seeded, reproducible initial-data families.

Randomness comes from a splitmix64 generator with the usual constants
(increment 0x9E3779B97F4A7C15, mixers 0xBF58476D1CE4E5B9 and
0x94D049BB133111EB), so any implementation of the same recipe draws the
same data.  All random families are finite sums of compactly supported
smooth bumps; exact compact support is what makes the finite-speed and
Huygens experiments sharp.
"""

from __future__ import annotations

import numpy as np

from .grid import RadialGrid, RadialState, state_from_arrays
from .model import Params

_MASK = (1 << 64) - 1


class SplitMix64:
    """64-bit splitmix generator; uniform doubles use the top 53 bits."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return (z ^ (z >> 31)) & _MASK

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * 2.0 ** -53
        return lo + (hi - lo) * u

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        return lo + self.next_u64() % (hi - lo + 1)


def bump(r, center: float, width: float, amplitude: float) -> np.ndarray:
    """C-infinity bump supported exactly on [center - width, center + width]."""
    r = np.asarray(r, dtype=float)
    u = (r - center) / width
    out = np.zeros_like(r)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = amplitude * np.exp(1.0 - 1.0 / (1.0 - ui * ui))
    return out


def bump_sum(r, rng: SplitMix64, count_range=(3, 6),
             center_range=(1.0, 6.0), width_range=(0.5, 1.5),
             amp_range=(-1.0, 1.0)) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    total = np.zeros_like(r)
    k = rng.randint(*count_range)
    for _ in range(k):
        c = rng.uniform(*center_range)
        wdt = rng.uniform(*width_range)
        # keep the support strictly away from the origin
        wdt = min(wdt, 0.9 * c)
        a = rng.uniform(*amp_range)
        total += bump(r, c, wdt, a)
    return total


def gaussian_data(params: Params, grid: RadialGrid, *, amplitude: float = 1.0,
                  width: float = 1.0, velocity_amplitude: float = 0.0,
                  velocity_width: float = 1.0) -> RadialState:
    r = grid.nodes
    w0 = amplitude * np.exp(-((r / width) ** 2))
    w1 = velocity_amplitude * np.exp(-((r / velocity_width) ** 2))
    return state_from_arrays(params, grid, w0, w1)


def random_bump_data(params: Params, grid: RadialGrid, rng: SplitMix64,
                     **kwargs) -> RadialState:
    r = grid.nodes
    w0 = bump_sum(r, rng, **kwargs)
    w1 = bump_sum(r, rng, **kwargs)
    return state_from_arrays(params, grid, w0, w1)


def smoothstep(u) -> np.ndarray:
    """Quintic 0 -> 1 ramp with vanishing first and second derivatives."""
    u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u))


def plateau_data(params: Params, grid: RadialGrid, *, amplitude: float,
                 radius: float) -> RadialState:
    """w0 = amplitude on [0, radius - 1], tapering to 0 by `radius`; w1 = 0."""
    r = grid.nodes
    w0 = amplitude * (1.0 - smoothstep(r - (radius - 1.0)))
    return state_from_arrays(params, grid, w0, np.zeros_like(r))


def outgoing_bump_data(params: Params, grid: RadialGrid, *, center: float,
                       width: float, amplitude: float) -> RadialState:
    """Data whose profile is purely right-moving: fdot(-r) = 0.

    Choosing r w1 = d_r(r w0) kills the left half of the profile, so the
    generalized energy genuinely moves with time.
    """
    r = grid.nodes
    w0 = bump(r, center, width, amplitude)
    v = r * w0
    h = grid.h
    dv = np.empty_like(v)
    dv[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
    dv[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
    dv[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
    w1 = np.zeros_like(v)
    w1[1:] = dv[1:] / r[1:]
    w1[0] = 3.0 * w1[1] - 3.0 * w1[2] + w1[3]
    return state_from_arrays(params, grid, w0, w1)


FAMILIES = {
    "gaussian": gaussian_data,
    "plateau": plateau_data,
    "outgoing_bump": outgoing_bump_data,
}


def resolve_family(name: str, params: Params, grid: RadialGrid,
                   options: dict, rng: SplitMix64 | None = None) -> RadialState:
    """Build initial data from a family name and its keyword options."""
    if name == "bumps":
        if rng is None:
            raise ValueError("family 'bumps' needs a seeded generator")
        return random_bump_data(params, grid, rng, **options)
    if name == "zero":
        z = np.zeros(grid.n + 1)
        return state_from_arrays(params, grid, z, z)
    try:
        builder = FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown data family {name!r}") from None
    return builder(params, grid, **options)
