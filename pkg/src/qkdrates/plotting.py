"""Figure rendering for sweep and threshold tables.

Companion to the CLI: each report subcommand can render its table as a
figure next to the CSV. Uses the non-interactive backend so files can be
produced headlessly.
"""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .optimize import RegionPoint, SweepRow

__all__ = ["plot_rate_sweep", "plot_max_distance", "plot_region"]


def plot_rate_sweep(rows: list[SweepRow], path: str, title: str = "") -> None:
    """Secret-key rate versus distance, one curve per round count.

    Zero rates are masked so the logarithmic axis shows where each curve
    dies instead of plunging to the floor.
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for n in sorted({row.n for row in rows}):
        pts = [(row.l_km, row.rate) for row in rows if row.n == n]
        xs = [p[0] for p in pts]
        ys = [p[1] if p[1] > 0.0 else math.nan for p in pts]
        ax.plot(xs, ys, label=f"n = {n}")
    ax.set_yscale("log")
    ax.set_xlabel("distance (km)")
    ax.set_ylabel("secret-key rate per pulse")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_max_distance(entries: list[tuple[int, float]], path: str, title: str = "") -> None:
    """Maximum reachable distance against the round-count budget."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ns = [n for n, _ in entries]
    ls = [l for _, l in entries]
    ax.plot(ns, ls, marker="o")
    ax.set_xlabel("error-rejection rounds")
    ax.set_ylabel("maximum distance (km)")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_region(points: list[RegionPoint], path: str, title: str = "") -> None:
    """Feasibility regions in the (error rate, tagging fraction) plane."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    xs = [p.delta for p in points]
    black = [p.big_delta_black for p in points]
    grey = [p.big_delta_grey for p in points]
    ax.fill_between(xs, black, 1.0, color="black", alpha=0.85, label="no key possible")
    ax.fill_between(xs, grey, black, color="grey", alpha=0.6, label="out of reach of this post-processing")
    ax.plot(xs, black, color="black", lw=1.0)
    ax.plot(xs, grey, color="dimgrey", lw=1.0, ls="--")
    ax.set_xlim(min(xs), max(xs))
    ax.set_ylim(0.0, 1.0)
    ax.set_xlabel("observed error rate")
    ax.set_ylabel("tagging fraction")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
