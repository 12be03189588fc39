"""Figure rendering for report datasets: a PNG next to the delimited output.

Purely presentational; every number plotted comes straight from the report
rows.  Non-finite entries (flagged cutoff resonances, divergent logarithms)
are masked out of the curves.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .reports import Report


def _column(report: Report, name: str) -> np.ndarray:
    idx = report.columns.index(name)
    return np.asarray([row[idx] for row in report.rows])


def _grouped_curves(report: Report, group_cols, x_col, y_col):
    """Yield (group_key, x, y) with non-finite y masked out, preserving order."""
    keys = list(zip(*(_column(report, c) for c in group_cols)))
    x = _column(report, x_col).astype(float)
    y = _column(report, y_col).astype(float)
    seen = []
    for key in keys:
        if key not in seen:
            seen.append(key)
    for key in seen:
        mask = np.array([k == key for k in keys]) & np.isfinite(y)
        if mask.any():
            yield key, x[mask], y[mask]


def _plot_phase_vs_theta(report: Report, y_col: str, bare_col: str, group_col: str, title: str):
    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    for (group, level), x, y in _grouped_curves(report, (group_col, "level"), "theta", y_col):
        ax.plot(x, y, marker=".", markersize=3, linestyle="none",
                label=f"{group_col}={group:g}, level {level}")
    drawn = set()
    for (_, level), x, y in _grouped_curves(report, (group_col, "level"), "theta", bare_col):
        if level not in drawn:
            ax.plot(x, y, color="black", linewidth=1.2,
                    linestyle="--" if level == "-" else "-",
                    label=f"dissipationless, level {level}")
            drawn.add(level)
    ax.set_xlabel(r"$\theta$ (rad)")
    ax.set_ylabel("phase (rad)")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    return fig


def _plot_density(report: Report):
    t = _column(report, "t").astype(float)
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7.0, 6.2), sharex=True)
    for name in ("population_upper", "population_lower", "trace"):
        ax1.plot(t, _column(report, name).astype(float), label=name)
    ax1.set_ylabel("probability")
    ax1.grid(alpha=0.3)
    ax1.legend(fontsize=8)
    for name in ("coherence_magnitude", "purity"):
        ax2.plot(t, _column(report, name).astype(float), label=name)
    ax2.set_xlabel("t (1/b)")
    ax2.grid(alpha=0.3)
    ax2.legend(fontsize=8)
    fig.suptitle("reduced-density evolution")
    fig.tight_layout()
    return fig


def _plot_exact(report: Report):
    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    x_col = "theta" if len(set(_column(report, "theta"))) > 1 else "omega0_over_b"
    x = _column(report, x_col).astype(float)
    for name in ("beta_plus_lifted", "beta_minus_lifted", "theta0"):
        ax.plot(x, _column(report, name).astype(float), label=name)
    ax.set_xlabel(x_col)
    ax.set_ylabel("rad")
    ax.set_title("dissipationless sweep")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def render_report(report: Report, path) -> None:
    """Render the figure matching the report mode and write it to `path`."""
    if report.mode == "fig2":
        fig = _plot_phase_vs_theta(report, "gp_total", "gp_bare", "omega_c_over_b",
                                   "slow-drive geometric phase vs cutoff")
    elif report.mode in ("fig3", "nonadiabatic"):
        fig = _plot_phase_vs_theta(report, "te_geomet", "omega_k", "omega0_over_b",
                                   "geometric phase vs drive speed")
    elif report.mode == "adiabatic":
        fig = _plot_phase_vs_theta(report, "gp_total", "gp_bare", "omega_c_over_b",
                                   "slow-drive phase split")
    elif report.mode == "density":
        fig = _plot_density(report)
    elif report.mode == "exact":
        fig = _plot_exact(report)
    else:
        raise ValueError(f"no figure defined for mode {report.mode!r}")
    try:
        fig.savefig(path, dpi=150)
    finally:
        plt.close(fig)
