"""Figure rendering for the report paths.

Every CLI command that writes a delimited table can drop a matplotlib PNG
next to it.  Rendering is file-only (Agg backend), no interactive windows.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import theta  # noqa: E402


def save_kernel_plot(path, t_min=-1.0, t_max=1.5, n=301):
    """Kernel G and its first derivative over t."""
    ts = np.linspace(t_min, t_max, n)
    g = [theta.G_eval(float(t)).value for t in ts]
    gp = [theta.G_deriv(float(t), 1).value for t in ts]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(ts, g, label="G(t)")
    ax.plot(ts, gp, label="G'(t)", ls="--")
    ax.axhline(0.0, color="k", lw=0.5)
    ax.set_xlabel("t")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_zeros_plot(path, ys, us, records):
    """u(0, y) with the refined zero ordinates marked."""
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(ys, us, lw=1.0, label="u(0, y)")
    for r in records:
        ax.axvline(r.y, color="r", lw=0.5, alpha=0.6)
    ax.axhline(0.0, color="k", lw=0.5)
    ax.set_xlabel("y")
    ax.set_yscale("symlog", linthresh=1e-12)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_pq_plot(path, rows):
    """p(y) and q(y) aggregates on a log scale."""
    ys = [r["y"] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(ys, [r["p"] for r in rows], marker="o", label="p(y)")
    ax.plot(ys, [r["q"] for r in rows], marker="s", ls="--", label="q(y)")
    ax.set_xlabel("y")
    ax.set_yscale("log")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_map_plot(path, grid_u, grid_v, curves):
    """Sign field of v over the strip region with traced curves overlaid."""
    region = grid_v.region
    fig, ax = plt.subplots(figsize=(6, 9))
    extent = (region.x_min, region.x_max, region.y_min, region.y_max)
    ax.imshow(grid_v.signs.T, origin="lower", extent=extent, aspect="auto",
              cmap="RdBu", vmin=-1, vmax=1, alpha=0.6)
    for k, curve in enumerate(curves):
        pts = np.array(curve.points)
        if pts.size:
            ax.plot(pts[:, 0], pts[:, 1], "k-", lw=1.0)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title("sign of v with v = 0 curves")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
