"""Adaptive embedded Runge-Kutta pair (Dormand-Prince 5(4)).

A compact explicit integrator with step-size control, divergence
detection and a bracketed blow-up abscissa.  Blow-up is reported as the
midpoint of the last accepted abscissa and the first failed one, with
the bracket width as the error bar; that convention survives tolerance
changes, which the stationary-solution checks rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_ERR = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920,
                 -17253 / 339200, 22 / 525, -1 / 40])

REACHED_END = "reached_end"
DIVERGED = "diverged"
UNDERFLOW = "step_underflow"
MAX_STEPS = "max_steps"


@dataclass
class OdeResult:
    t: np.ndarray
    y: np.ndarray                  # shape (len(t), dim)
    yprime: np.ndarray             # rhs evaluated at the accepted nodes
    status: str
    blow_lo: float | None = None
    blow_hi: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def blow_abscissa(self) -> float | None:
        if self.blow_lo is None:
            return None
        return 0.5 * (self.blow_lo + self.blow_hi)

    @property
    def blow_halfwidth(self) -> float | None:
        if self.blow_lo is None:
            return None
        return 0.5 * (self.blow_hi - self.blow_lo)


def hermite_eval(ts: np.ndarray, vals: np.ndarray, slopes: np.ndarray,
                 tq: np.ndarray) -> np.ndarray:
    """Cubic Hermite interpolation on sorted nodes with known slopes."""
    tq = np.asarray(tq, dtype=float)
    idx = np.clip(np.searchsorted(ts, tq, side="right") - 1, 0, len(ts) - 2)
    t0 = ts[idx]
    dt = ts[idx + 1] - t0
    u = (tq - t0) / dt
    h00 = (1 + 2 * u) * (1 - u) ** 2
    h10 = u * (1 - u) ** 2
    h01 = u * u * (3 - 2 * u)
    h11 = u * u * (u - 1)
    return (h00 * vals[idx] + h10 * dt * slopes[idx]
            + h01 * vals[idx + 1] + h11 * dt * slopes[idx + 1])


def integrate_adaptive(rhs, t0: float, y0, t_end: float, *,
                       rtol: float = 1e-10, atol: float = 1e-12,
                       min_step: float = 1e-14, max_step: float = np.inf,
                       divergence: float | None = None,
                       max_steps: int = 1_000_000) -> OdeResult:
    """Integrate y' = rhs(t, y) from t0 to t_end (t_end > t0).

    Stops early with status "diverged" when |y[0]| exceeds `divergence`,
    or "step_underflow" when the controller pushes the step below
    `min_step`; both cases carry a (blow_lo, blow_hi) bracket.
    """
    y = np.asarray(y0, dtype=float).copy()
    t = float(t0)
    ts = [t]
    ys = [y.copy()]
    k1 = np.asarray(rhs(t, y), dtype=float)
    fs = [k1.copy()]
    span = t_end - t0
    step = min(max_step, span / 100.0)
    status = MAX_STEPS
    blow_lo = blow_hi = None
    k = np.empty((7, y.size))

    end_slack = 1e-14 * max(abs(t_end), 1.0)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(max_steps):
            if t_end - t <= end_slack:
                status = REACHED_END
                break
            if step < min_step:
                # only the controller, not the end cap, declares underflow
                status = UNDERFLOW
                blow_lo, blow_hi = t, t + min_step
                break
            step = min(step, t_end - t)
            k[0] = k1
            bad = False
            for i in range(1, 7):
                yi = y + step * (k[:i].T @ _A[i])
                if not np.all(np.isfinite(yi)):
                    bad = True
                    break
                k[i] = rhs(t + _C[i] * step, yi)
            if bad or not np.all(np.isfinite(k)):
                step *= 0.25
                continue
            y_new = y + step * (k.T @ _B5)
            err_vec = step * (k.T @ _ERR)
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
            if not np.isfinite(err) or not np.all(np.isfinite(y_new)):
                step *= 0.25
                continue
            if err <= 1.0:
                t_prev = t
                t += step
                y = y_new
                k1 = k[6].copy()     # FSAL
                ts.append(t)
                ys.append(y.copy())
                fs.append(k1.copy())
                if divergence is not None and abs(y[0]) >= divergence:
                    status = DIVERGED
                    blow_lo, blow_hi = t_prev, t
                    break
            factor = 0.9 * err ** -0.2 if err > 0.0 else 5.0
            step = min(step * min(5.0, max(0.2, factor)), max_step)

    return OdeResult(t=np.array(ts), y=np.array(ys), yprime=np.array(fs),
                     status=status, blow_lo=blow_lo, blow_hi=blow_hi)
