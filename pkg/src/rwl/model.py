"""Exponent arithmetic for the supercritical power nonlinearity.

Everything downstream is driven by the bundle (p, iota, m, s_c) with
m = (p-1)/2 and s_c = 3/2 - 2/(p-1) = 3/2 - 1/m.  Only p > 5 is admitted,
which is equivalent to m > 2 and s_c > 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonpositiveScale, SubcriticalExponent

FOCUSING = +1
DEFOCUSING = -1


@dataclass(frozen=True)
class Params:
    """Immutable exponent bundle; shareable between threads."""

    p: float
    iota: int
    m: float
    s_c: float

    def __post_init__(self):
        if self.iota not in (FOCUSING, DEFOCUSING):
            raise ValueError(f"iota must be +1 or -1, got {self.iota}")


def make_params(p: float, iota: int) -> Params:
    """Validate p > 5 and populate m and s_c.

    Raises SubcriticalExponent for p <= 5 (or non-finite p); the two
    derived exponents satisfy s_c = 3/2 - 1/m exactly.
    """
    p = float(p)
    if not math.isfinite(p) or p <= 5.0:
        raise SubcriticalExponent(f"need p > 5, got p = {p}")
    m = (p - 1.0) / 2.0
    s_c = 1.5 - 2.0 / (p - 1.0)
    return Params(p=p, iota=int(iota), m=m, s_c=s_c)


def rescale_exponents(params: Params, lam: float) -> tuple[float, float]:
    """Return (amplitude_factor, norm_factor) of the scaling symmetry.

    w -> lam^{2/(p-1)} w(lam t, lam x) maps solutions to solutions; the
    critical-norm factor is identically 1.
    """
    if not (lam > 0.0) or not math.isfinite(lam):
        raise NonpositiveScale(f"need lambda > 0, got {lam}")
    return lam ** (2.0 / (params.p - 1.0)), 1.0
