"""Renderers: one static figure per spec, overwriting idempotently."""

from __future__ import annotations

import json

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .spec import PlotSpec, SchemaMismatch, check_columns, read_series

plt.rcParams.update({
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 130,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
})


def _load_report(spec: PlotSpec) -> dict:
    if spec.report is None:
        return {}
    return json.loads(spec.report.read_text(encoding="utf-8"))


def _finish(fig, ax, spec: PlotSpec, default_title: str,
            default_x: str, default_y: str):
    ax.set_title(spec.title or default_title)
    ax.set_xlabel(spec.xlabel or default_x)
    ax.set_ylabel(spec.ylabel or default_y)
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(spec.output)
    plt.close(fig)


def _render_energy(spec: PlotSpec, cols) -> None:
    fig, ax = plt.subplots()
    t = np.array(cols["t"])
    em = np.array(cols["E_m"])
    ax.plot(t, em, marker="o", ms=3, lw=1.2, label="E_m(t)")
    report = _load_report(spec)
    m = report.get("params", {}).get("m")
    if m is not None and em.size:
        e0 = em[0]
        lo, hi = 2.0 ** (1.0 - m) * e0, 2.0 ** (m - 1.0) * e0
        ax.axhspan(lo, hi, color="tab:green", alpha=0.15,
                   label="almost-conservation band")
        ax.legend(loc="best")
    _finish(fig, ax, spec, "generalized energy", "t", "E_m")


def _render_channel(spec: PlotSpec, cols) -> None:
    fig, ax = plt.subplots()
    trial = np.array(cols["trial"])
    t = np.array(cols["t"])
    ratio = np.array(cols["surrogate_ratio"])
    direction = np.array(cols.get("direction", np.ones_like(t)))
    if t.size:
        for tr in np.unique(trial):
            mask = trial == tr
            ax.plot(np.abs(t[mask]), ratio[mask], lw=0.6, alpha=0.35,
                    color="tab:blue")
        ax.axhline(0.5, color="tab:red", lw=1.2, label="dichotomy bound 1/2")
        pos = float(np.mean(direction > 0))
        ax.text(0.02, 0.04,
                f"certified t>=0 for {100 * pos:.0f}% of trials",
                transform=ax.transAxes, fontsize=9)
        ax.legend(loc="best")
    _finish(fig, ax, spec, "exterior-energy channels", "|t| (certified side)",
            "E(t) / E(0)")


def _render_stationary(spec: PlotSpec, cols) -> None:
    fig, ax = plt.subplots()
    r = np.array(cols["r"])
    z = np.array(cols["Z"])
    if r.size:
        ax.loglog(r, np.abs(z), lw=1.4, label="|Z(r)|")
        report = _load_report(spec)
        ell = report.get("config", {}).get("series_ell", 1.0)
        ax.loglog(r, np.abs(ell) / r, "--", lw=1.0,
                  label=f"asymptote {ell:g}/r")
        R_ell = report.get("metrics", {}).get("R_1")
        if R_ell:
            ax.axvline(R_ell, color="tab:red", lw=1.0, alpha=0.7)
            ax.annotate(f"R = {R_ell:.4f}", (R_ell, np.abs(z).max()),
                        fontsize=9, rotation=90, va="top", ha="right")
        ax.legend(loc="best")
    _finish(fig, ax, spec, "stationary branch", "r", "|Z|")


def _render_blowup(spec: PlotSpec, cols) -> None:
    fig, ax = plt.subplots()
    x = np.array(cols["x"])
    y = np.array(cols["y"])
    fit = np.array(cols["fit"])
    if x.size:
        order = np.argsort(x)
        ax.loglog(x[order], y[order], "o", ms=3, label="measured")
        ax.loglog(x[order], fit[order], "-", lw=1.2, label="power-law fit")
        ax.legend(loc="best")
    _finish(fig, ax, spec, "blow-up fit", "x", "y")


def _render_huygens(spec: PlotSpec, cols) -> None:
    fig, ax = plt.subplots()
    R = np.array(cols["R"])
    res = np.array(cols["residual"])
    if R.size:
        positive = res > 0.0
        floor = res[positive].min() * 0.1 if positive.any() else 1e-18
        ax.semilogy(R, np.maximum(res, floor), marker="s", ms=4, lw=1.2)
        if not positive.all():
            ax.text(0.02, 0.04, "zero residuals clipped to plot floor",
                    transform=ax.transAxes, fontsize=8)
    _finish(fig, ax, spec, "mass outside the window", "R", "residual")


_RENDERERS = {
    "energy": _render_energy,
    "channel": _render_channel,
    "stationary": _render_stationary,
    "blowup": _render_blowup,
    "huygens": _render_huygens,
}


def render(spec: PlotSpec) -> None:
    """Render one figure; never mutates inputs, overwrites its output."""
    if not spec.csv.exists():
        raise IOError(f"input CSV not found: {spec.csv}")
    header, cols = read_series(spec.csv)
    check_columns(spec.kind, header, spec.csv)
    _RENDERERS[spec.kind](spec, cols)
