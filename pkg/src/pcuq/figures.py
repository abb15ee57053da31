"""Plot rendering for the report path.

Figures are written next to the CSV files they visualize: the
coefficient-decay panels, the sparsity sweep, and the reduction error
curve.  Rendering is headless and file-only.
"""

import math

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

GOLDEN = (math.sqrt(5) - 1.0) / 2.0


def _new_axes(width=6.0, ncols=1):
    plt.rcParams["font.size"] = 10
    plt.rcParams["axes.grid"] = True
    plt.rcParams["grid.alpha"] = 0.4
    plt.rcParams["lines.linewidth"] = 1.4
    fig, axes = plt.subplots(1, ncols, figsize=(width * ncols, width * GOLDEN))
    return fig, axes


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_coefficients(path, traj):
    """Two panels: max-over-time |w_i| by linear index, and the same
    values sorted descending."""
    mags = np.abs(traj.coeffs).max(axis=1)
    floor = max(mags.max(), 1e-300) * 1e-16
    shown = np.maximum(mags, floor)
    fig, (ax1, ax2) = _new_axes(ncols=2)
    idx = np.arange(1, len(mags) + 1)
    ax1.semilogy(idx, shown, ".", markersize=3)
    ax1.set_xlabel("basis polynomial index")
    ax1.set_ylabel("max coefficient magnitude")
    ax2.semilogy(idx, np.sort(shown)[::-1], "-")
    ax2.set_xlabel("rank")
    ax2.set_ylabel("sorted magnitude")
    _finish(fig, path)


def render_sparsity(path, rows):
    rows = list(rows)
    eps = [r[0] for r in rows]
    maxpt = [r[1] for r in rows]
    glob = [r[2] for r in rows]
    fig, ax = _new_axes()
    ax.semilogx(eps, glob, "o-", label="union over time")
    ax.semilogx(eps, maxpt, "s--", label="largest pointwise set")
    ax.set_xlabel("error tolerance")
    ax.set_ylabel("basis polynomials kept")
    ax.legend()
    _finish(fig, path)


def render_pod_error(path, curve):
    r = [c[0] for c in curve]
    err = [max(c[1], 1e-300) for c in curve]
    fig, ax = _new_axes()
    ax.semilogy(r, err, "o-")
    ax.set_xlabel("reduced basis size")
    ax.set_ylabel("max relative error over time")
    _finish(fig, path)


def render_trajectory(path, times, values, ylabel="output voltage (V)"):
    fig, ax = _new_axes()
    ax.plot(times, values, "-")
    ax.set_xlabel("time (s)")
    ax.set_ylabel(ylabel)
    _finish(fig, path)
