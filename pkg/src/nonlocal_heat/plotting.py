"""Optional figure rendering for the CLI report paths.

All figures are written to files (Agg backend); nothing is shown
interactively.  Rendering is opt-in via the CLI ``--plot`` flag, so the
default output of every subcommand remains data only.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

plt.rcParams["figure.figsize"] = (6.0, 4.0)
plt.rcParams["savefig.bbox"] = "tight"
plt.rcParams["axes.grid"] = True
plt.rcParams["grid.alpha"] = 0.3


def heat_content_figure(report, path):
    """H(t) and H(t)/t against t on log axes."""
    fig, axes = plt.subplots(1, 2, figsize=(9.5, 4.0))
    t = np.asarray(report.t_grid)
    axes[0].loglog(t, report.values, "o-", ms=4)
    axes[0].set_xlabel("t")
    axes[0].set_ylabel("H(t)")
    axes[1].semilogx(t, report.values / t, "o-", ms=4)
    axes[1].set_xlabel("t")
    axes[1].set_ylabel("H(t)/t")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def verify_figure(report, path):
    """Normalised residuals with the target constant and the verdict."""
    fig, ax = plt.subplots()
    t = np.asarray(report.t_grid)
    ax.semilogx(t, report.normalized_residuals, "o-", ms=4,
                label="normalised residual")
    ax.axhline(report.target, color="k", ls="--", lw=1, label="target constant")
    ax.axhline(report.extrapolated, color="C3", ls=":", lw=1, label="extrapolated")
    ax.set_xlabel("t")
    ax.set_title(f"verdict: {report.verdict} "
                 f"(rel. err {report.achieved_relative_error:.2e})")
    ax.legend()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def density_figure(rows, path):
    """Series and inversion densities plus their absolute difference."""
    rows = np.asarray(rows, dtype=float)
    fig, axes = plt.subplots(1, 2, figsize=(9.5, 4.0))
    axes[0].plot(rows[:, 0], rows[:, 1], "o-", ms=3, label="series")
    axes[0].plot(rows[:, 0], rows[:, 2], "x--", ms=4, label="inversion")
    axes[0].set_xlabel("x")
    axes[0].set_ylabel("p_1(x)")
    axes[0].legend()
    diff = np.abs(rows[:, 3])
    axes[1].semilogy(rows[:, 0], np.maximum(diff, 1e-18), "o-", ms=3)
    axes[1].set_xlabel("x")
    axes[1].set_ylabel("|series - inversion|")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def expansion_figure(series, t_grid, h_vals, path):
    """Heat content against successive partial sums of the expansion."""
    fig, ax = plt.subplots()
    t = np.asarray(t_grid)
    ax.loglog(t, np.abs(h_vals), "ko", ms=4, label="H(t)")
    for n in range(1, len(series.terms) + 1):
        ps = np.array([series.partial_sum(tt, n) for tt in t])
        ax.loglog(t, np.abs(ps), "--", lw=1, label=f"{n}-term sum")
    ax.set_xlabel("t")
    ax.set_ylabel("|H|")
    ax.legend(fontsize=8)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def samples_figure(samples, path, bins=200):
    """Histogram of drawn samples (1-d) or a scatter of the first two axes."""
    samples = np.asarray(samples)
    fig, ax = plt.subplots()
    if samples.ndim == 1 or samples.shape[1] == 1:
        x = samples.ravel()
        lo, hi = np.quantile(x, [0.001, 0.999])
        ax.hist(x[(x >= lo) & (x <= hi)], bins=bins, density=True)
        ax.set_xlabel("x")
        ax.set_ylabel("density")
    else:
        ax.plot(samples[:2000, 0], samples[:2000, 1], ".", ms=2, alpha=0.5)
        ax.set_xlabel("x1")
        ax.set_ylabel("x2")
        ax.set_aspect("equal")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
