"""Figure rendering for the sweep report path.

Renders the disagreement-decay curve (both norms) against t with the
1/lambda_1 marker line, mirroring the CSV the sweep command emits.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")  # headless; must precede pyplot import

import matplotlib.pyplot as plt

from .consensus import ConvergenceTrace


def render_sweep_figure(trace: ConvergenceTrace, path, title: str | None = None) -> None:
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(trace.t, trace.euclidean, marker="o", ms=3, lw=1.2, label="‖δ(t)‖₂")
    ax.plot(trace.t, trace.dnorm, marker="s", ms=3, lw=1.2, label="‖D^{1/2}δ(t)‖₂")
    ax.axvline(
        trace.lambda1_marker, color="red", lw=1.0, ls="--", label="t = 1/λ₁"
    )
    if (trace.t > 0).all():
        ax.set_xscale("log")
    if (trace.euclidean > 0).all() and (trace.dnorm > 0).all():
        ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("total disagreement")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False, fontsize=9)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
