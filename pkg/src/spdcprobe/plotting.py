"""Static figures for sweep results.

Everything renders through the non-interactive Agg canvas; SVG output is
made byte-reproducible by fixing the id salt and dropping the date stamp.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

RC = {
    "svg.hashsalt": "spdcprobe",
    "svg.fonttype": "none",
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.2,
    "figure.figsize": (5.0, 3.4),
}

BETA_LABEL = r"$\beta$ [rad$^{-1}$]"


def _save(fig, path) -> Path:
    path = Path(path)
    fig.savefig(path, metadata={"Date": None} if path.suffix == ".svg" else None)
    plt.close(fig)
    return path


def plot_curve(result, path) -> Path:
    """D(beta) of one scenario, closed form solid and eigenvalue route dotted."""
    c = result.curve
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        ax.plot(c.beta, c.d_closed, label="closed form")
        ax.plot(c.beta, c.d_eig, ":", label="eigenvalues")
        ax.axhline(result.d0, color="0.6", lw=0.8, ls="--")
        ax.set_xlabel(BETA_LABEL)
        ax.set_ylabel(r"$D(\beta)$")
        ax.set_title(result.scenario_id, fontsize=9)
        ax.legend(frameon=False)
        fig.tight_layout()
        return _save(fig, path)


def plot_curves(results, path) -> Path:
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        for r in results:
            ax.plot(r.curve.beta, r.curve.d_closed, label=r.scenario_id)
        ax.set_xlabel(BETA_LABEL)
        ax.set_ylabel(r"$D(\beta)$")
        if results:
            ax.legend(frameon=False)
        fig.tight_layout()
        return _save(fig, path)


def plot_witness(results, path) -> Path:
    """Maximum trace-distance increase against the second environment's |C|."""
    c = np.array([abs(r.c2) for r in results])
    dd = np.array([r.delta_d_max for r in results])
    order = np.argsort(c, kind="stable")
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        ax.plot(c[order], dd[order], "o-")
        ax.set_xlabel(r"$|C_2|$")
        ax.set_ylabel(r"$\max_\beta D - D(0)$")
        fig.tight_layout()
        return _save(fig, path)
