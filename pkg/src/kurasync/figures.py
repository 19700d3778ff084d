"""Matplotlib rendering for the report paths.

Each CLI report command writes a PNG next to its delimited output unless
figures are disabled. The Agg backend is forced so rendering works
headless; CSV/JSON files remain the machine-readable contract and the
figures are purely illustrative.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_bounds_figure(report: dict, path):
    labels, values = [], []
    for key in ("k_necessary", "k_exact", "k_explicit", "k_continuum", "k_ermentrout"):
        if report.get(key) is not None:
            labels.append(key.replace("k_", ""))
            values.append(report[key])
    fig, ax = plt.subplots(figsize=(6.0, 3.5))
    ax.bar(labels, values, color="#4878a8")
    ax.set_ylabel("critical coupling [rad/s]")
    ax.set_title("Critical-coupling estimates")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_study_figure(rows, path):
    sizes = [row.n for row in rows]
    fig, ax = plt.subplots(figsize=(6.5, 4.0))
    ax.semilogx(sizes, [row.k_necessary for row in rows], "o-", color="#c44e52", label="necessary")
    ax.semilogx(sizes, [row.k_exact for row in rows], "d-", color="#55a868", label="exact")
    ax.semilogx(sizes, [row.k_explicit for row in rows], "s-", color="#4c72b0", label="explicit")
    ax.set_xlabel("oscillators n")
    ax.set_ylabel("mean critical coupling [rad/s]")
    ax.set_title(f"Threshold comparison ({rows[0].trials} trials per size)")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_trajectory_figure(trajectory, summary: dict, path):
    times = trajectory.times
    fig, axes = plt.subplots(2, 2, figsize=(9.0, 6.0))

    ax = axes[0, 0]
    ax.plot(times, trajectory.theta, lw=0.7)
    ax.set_ylabel("phase [rad]")
    ax.set_title("Unwrapped phases")

    ax = axes[0, 1]
    ax.plot(times, trajectory.arc_length, color="#4c72b0")
    for key, style in (("gamma_min", "--"), ("gamma_max", ":")):
        if summary.get(key) is not None:
            ax.axhline(summary[key], color="#c44e52", ls=style, lw=1.0, label=key)
    ax.set_ylabel("enclosing arc V [rad]")
    ax.set_title("Phase cohesiveness")
    if summary.get("gamma_min") is not None:
        ax.legend(fontsize=8)

    ax = axes[1, 0]
    ax.plot(times, trajectory.order_magnitude, color="#55a868")
    if summary.get("r_floor") is not None:
        ax.axhline(summary["r_floor"], color="#c44e52", ls="--", lw=1.0, label="r floor")
        ax.legend(fontsize=8)
    ax.set_ylim(0.0, 1.02)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("order parameter r")

    ax = axes[1, 1]
    positive = trajectory.disagreement > 0
    if positive.any():
        ax.semilogy(times[positive], trajectory.disagreement[positive], color="#8172b2")
    ax.set_xlabel("time [s]")
    ax.set_ylabel("frequency disagreement")

    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_equilibria_figure(report: dict, path):
    eigenvalues = np.asarray(report["eigenvalues"], dtype=float)
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 3.8))

    ax = axes[0]
    phases = report["equilibrium_phases"]
    ax.stem(range(1, len(phases) + 1), phases)
    ax.set_xlabel("oscillator")
    ax.set_ylabel("equilibrium phase [rad]")
    ax.set_title("Grounded equilibrium")

    ax = axes[1]
    ax.axvline(0.0, color="0.6", lw=0.8)
    ax.axhline(0.0, color="0.6", lw=0.8)
    ax.scatter(eigenvalues[:, 0], eigenvalues[:, 1], color="#4c72b0", zorder=3)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    inertia = report["inertia"]
    ax.set_title(f"Spectrum (stable {inertia['stable']}, center {inertia['center']}, "
                 f"unstable {inertia['unstable']})")

    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
