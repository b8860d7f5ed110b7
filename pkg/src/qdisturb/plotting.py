"""Matplotlib rendering for CLI reports (file output only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_disturbance_surface(rows, path: str) -> None:
    """Surface plot of the disturbance root and its upper bound over the
    ordered probability simplex; ``rows`` are (p1, p2, value, bound)."""
    p1 = [r[0] for r in rows]
    p2 = [r[1] for r in rows]
    value = [r[2] for r in rows]
    bound = [r[3] for r in rows]
    fig = plt.figure(figsize=(7, 5))
    ax = fig.add_subplot(projection="3d")
    ax.plot_trisurf(p1, p2, value, cmap="viridis", linewidth=0.1)
    ax.plot_trisurf(p1, p2, bound, color="tab:orange", alpha=0.35, linewidth=0.1)
    ax.set_xlabel(r"$p_1$")
    ax.set_ylabel(r"$p_2$")
    ax.set_zlabel("disturbance")
    ax.set_title("disturbance root (solid) and upper bound (transparent)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_haar_batches(batches, lower, upper, path: str) -> None:
    """Per-batch Monte Carlo estimates with error bars against the
    analytic bracket; ``batches`` are (index, samples, estimate, stderr)."""
    idx = [b[0] for b in batches]
    est = [b[2] for b in batches]
    err = [3 * b[3] for b in batches]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.errorbar(idx, est, yerr=err, fmt="o", capsize=3, label="estimate ± 3 s.e.")
    if lower is not None:
        ax.axhline(lower, color="tab:green", linestyle="--", label="analytic lower")
        ax.axhline(upper, color="tab:red", linestyle="--", label="analytic upper")
    ax.set_xlabel("batch")
    ax.set_ylabel("average disturbance")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
