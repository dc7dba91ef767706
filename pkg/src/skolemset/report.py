"""Figure rendering for CLI reports: moment-scan trends and bound
comparisons, written as image files next to the delimited output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .bhcount import BoundReport  # noqa: E402
from .density import WindowStats, predictions  # noqa: E402


def render_moment_figure(stats: list[WindowStats], path: str) -> str:
    """Measured moments per window against the asymptotic predictions."""
    ws = [s.w for s in stats]
    preds = [predictions(s.w) for s in stats]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.2))
    ax1.plot(ws, [s.M1 for s in stats], "o-", label="M1 measured")
    ax1.plot(ws, [p.m1_pred for p in preds], "s--", label="M1 predicted")
    ax1.plot(ws, [s.M2 for s in stats], "^-", label="M2 measured")
    ax1.plot(ws, [p.m2_pred for p in preds], "d--", label="M2 predicted")
    ax1.set_yscale("log")
    ax1.set_xlabel("window exponent w")
    ax1.set_ylabel("moment")
    ax1.legend(fontsize=8)
    ax1.set_title("moments vs predictions")
    ax2.plot(ws, [s.density_estimate for s in stats], "o-")
    ax2.set_xlabel("window exponent w")
    ax2.set_ylabel("member fraction")
    ax2.set_ylim(-0.02, 1.02)
    ax2.set_title("window density estimate")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_bound_figure(reports: list[BoundReport], path: str) -> str:
    """Actual counts against the integral prediction and sieve bounds."""
    xs = [r.X for r in reports]
    fig, ax = plt.subplots(figsize=(6.2, 4.4))
    ax.plot(xs, [r.actual for r in reports], "o-", label="actual")
    ax.plot(xs, [r.bh_integral for r in reports], "s--", label="integral prediction")
    ax.plot(xs, [r.wu for r in reports], "^:", label="Wu bound (3.418)")
    ax.plot(xs, [r.brun8 for r in reports], "v:", label="Brun bound (8)")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("X")
    ax.set_ylabel("simultaneous prime count")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
