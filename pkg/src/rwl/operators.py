"""Truncation and cutoff operators on radial samples.

truncate_T freezes a function at its value on a sphere, cutoff_chi
multiplies by a fixed smooth exterior cutoff, and exterior_data combines
both on a state pair.  These are the only multiplier operators the rest
of the package needs.
"""

from __future__ import annotations

import numpy as np

from .errors import BadRadius
from .grid import RadialState, SampledFunction, state_from_arrays


def truncate_T(phi: SampledFunction, R: float) -> SampledFunction:
    """Replace phi by the constant phi(R) inside radius R."""
    grid = phi.grid
    if not 0.0 < R <= grid.r_max:
        raise BadRadius(f"need 0 < R <= r_max, got R = {R}")
    r = grid.nodes
    phi_R = float(np.interp(R, r, phi.values))
    out = np.where(r <= R, phi_R, phi.values)
    return SampledFunction(grid, out)


def chi_bridge(x) -> np.ndarray:
    """Smooth cutoff: 0 below 1/4, 1 above 1/2, quintic C^2 bridge between."""
    x = np.asarray(x, dtype=float)
    u = np.clip((x - 0.25) / 0.25, 0.0, 1.0)
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u))


def cutoff_chi(phi: SampledFunction, R: float) -> SampledFunction:
    """Pointwise product with chi(r / R)."""
    if R <= 0.0:
        raise BadRadius(f"need R > 0, got R = {R}")
    r = phi.grid.nodes
    return SampledFunction(phi.grid, chi_bridge(r / R) * phi.values)


def exterior_data(pair: RadialState, R: float) -> RadialState:
    """Freeze the position inside B_R, zero the velocity there."""
    grid = pair.grid
    if not 0.0 < R <= grid.r_max:
        raise BadRadius(f"need 0 < R <= r_max, got R = {R}")
    w = truncate_T(pair.w, R)
    r = grid.nodes
    wt = np.where(r >= R, pair.wt.values, 0.0)
    return state_from_arrays(pair.params, grid, w.values, wt, time=pair.time)
