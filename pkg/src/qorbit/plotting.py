"""Headless rendering of the report figures (PNG next to the CSV)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def save_kernel_figure(table, n: int, path: str, dpi: int = 150) -> None:
    """Central profile |S(N,u)|^2 (solid) against exp(-pi u^2) (dashed)."""
    u = table[:, 0]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(u, table[:, 1], color="tab:blue", lw=1.4, label=f"|S({n}, u)|$^2$")
    ax.plot(u, table[:, 2], color="tab:orange", lw=1.2, ls="--",
            label=r"$e^{-\pi u^2}$")
    ax.set_xlabel("u")
    ax.set_ylabel("probability")
    ax.set_title(f"Interpolation kernel vs gaussian, N = {n}")
    ax.set_xlim(float(u[0]), float(u[-1]))
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def save_probability_figure(positions, probs, title: str, path: str,
                            dpi: int = 150) -> None:
    """Bar chart of interpolated occupation probabilities along an orbit."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.bar(positions, probs, color="tab:blue", width=0.8)
    ax.set_xlabel("orbit position n")
    ax.set_ylabel("probability")
    ax.set_title(title)
    ax.set_ylim(0.0, 1.05)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
