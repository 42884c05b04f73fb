"""Figure rendering for scenario outputs.

Each scenario's report path can drop a PNG next to its CSV. Matplotlib is
imported lazily (Agg backend) so CSV-only runs never pay for it.
"""

from __future__ import annotations


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams.update({
        "font.size": 9,
        "axes.labelsize": 10,
        "legend.fontsize": 8,
        "lines.linewidth": 1.4,
        "figure.dpi": 120,
        "legend.frameon": False,
        "xtick.direction": "in",
        "ytick.direction": "in",
    })
    return plt


def _column(rows, header, name):
    idx = header.index(name)
    return [row[idx] for row in rows]


def render(scenario: str, header: list[str], rows: list[tuple], path) -> None:
    """Render the standard figure for a scenario's CSV rows to ``path``."""
    plt = _pyplot()
    fig = _RENDERERS[scenario](plt, header, rows)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)


def _render_trajectory(plt, header, rows):
    tau = _column(rows, header, "tau")
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.2))
    ax1.plot(tau, _column(rows, header, "r"), color="#0072B2")
    ax1.axhline(1.0, color="black", lw=0.8, ls="--", label="horizon")
    ax1.set_xlabel(r"proper time $\tau$")
    ax1.set_ylabel(r"$r$")
    ax1.legend()
    ax2.plot(tau, _column(rows, header, "t"), color="#D55E00")
    ax2.set_xlabel(r"proper time $\tau$")
    ax2.set_ylabel(r"$t$")
    fig.suptitle("Radial infall worldline")
    fig.tight_layout()
    return fig


def _render_modes(plt, header, rows):
    tau = _column(rows, header, "tau")
    fig, ax = plt.subplots(figsize=(5.5, 3.4))
    ax.plot(tau, _column(rows, header, "re"), label="Re", color="#0072B2")
    ax.plot(tau, _column(rows, header, "im"), label="Im", color="#D55E00")
    ax.set_xlabel(r"proper time $\tau$")
    ax.set_ylabel("mode amplitude")
    ax.legend()
    fig.tight_layout()
    return fig


def _render_strong(plt, header, rows):
    t = _column(rows, header, "t")
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.2))
    ax1.plot(t, _column(rows, header, "u_abs_sq"), label=r"$|u|^2$",
             color="#0072B2")
    ax1.plot(t, _column(rows, header, "v_abs_sq"), label=r"$|v|^2$",
             color="#D55E00")
    ax1.set_xlabel("t")
    ax1.set_ylabel("population")
    ax1.legend()
    ax2.plot(t, _column(rows, header, "ergotropy_gain"), label="ergotropy gain",
             color="#009E73")
    ax2.plot(t, _column(rows, header, "power"), label="avg power",
             color="#CC79A7")
    ax2.set_xlabel("t")
    ax2.legend()
    fig.suptitle("Rabi amplifier pulse")
    fig.tight_layout()
    return fig


def _render_weak(plt, header, rows):
    t = _column(rows, header, "t")
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.2))
    ax1.plot(t, _column(rows, header, "alpha_sq"), label=r"$|\alpha|^2$",
             color="#0072B2")
    ax1.plot(t, _column(rows, header, "sigma_sq"), label=r"$\sigma^2$",
             color="#D55E00")
    ax1.plot(t, _column(rows, header, "mean_n"), label=r"$\langle n\rangle$",
             color="#009E73", ls="--")
    ax1.set_xlabel("t")
    ax1.legend()
    ax2.plot(t, _column(rows, header, "work"), label="W", color="#0072B2")
    ax2.plot(t, _column(rows, header, "power"), label=r"$\dot W$",
             color="#D55E00")
    ax2.set_xlabel("t")
    ax2.legend()
    fig.suptitle("Steady-state amplifier")
    fig.tight_layout()
    return fig


def _render_fig2(plt, header, rows):
    fig, ax = plt.subplots(figsize=(5.5, 3.4))
    alpha_sq = _column(rows, header, "alpha0_sq")
    ax.semilogx(alpha_sq, _column(rows, header, "eta"), color="#0072B2",
                label=r"$\eta$")
    ax.axhline(rows[0][header.index("eta_ssd")], color="black", lw=0.8,
               ls="--", label="SSD bound")
    ax.set_xlabel(r"$|\alpha_0|^2$")
    ax.set_ylabel(r"efficiency $\eta$")
    ax.legend()
    fig.tight_layout()
    return fig


def _render_fig3(plt, header, rows):
    fig, ax = plt.subplots(figsize=(5.5, 3.4))
    gain = _column(rows, header, "gain")
    ax.plot(gain, _column(rows, header, "ergotropy"), label="ergotropy",
            color="#0072B2")
    ax.plot(gain, _column(rows, header, "thermal"), label="thermal",
            color="#D55E00")
    ax.plot(gain, _column(rows, header, "mean"), label="mean",
            color="#009E73", ls="--")
    ax.set_xlabel(r"gain $\mathcal{G}$")
    ax.set_ylabel(r"signal energy / $\nu$ units")
    ax.legend()
    fig.tight_layout()
    return fig


def _render_sweep(plt, header, rows):
    observable = header[-1]
    if len(header) == 2:
        fig, ax = plt.subplots(figsize=(5.5, 3.4))
        ax.plot(_column(rows, header, header[0]),
                _column(rows, header, observable), color="#0072B2")
        ax.set_xlabel(header[0])
        ax.set_ylabel(observable)
        fig.tight_layout()
        return fig
    # 2-d sweep: rows are row-major over (axis0, axis1)
    import numpy as np

    x0 = sorted(set(_column(rows, header, header[0])))
    x1 = sorted(set(_column(rows, header, header[1])))
    values = np.array(_column(rows, header, observable), dtype=float)
    grid = values.reshape(len(x0), len(x1))
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    mesh = ax.pcolormesh(x1, x0, grid, shading="nearest")
    fig.colorbar(mesh, ax=ax, label=observable)
    ax.set_xlabel(header[1])
    ax.set_ylabel(header[0])
    fig.tight_layout()
    return fig


_RENDERERS = {
    "trajectory": _render_trajectory,
    "modes": _render_modes,
    "strong": _render_strong,
    "weak": _render_weak,
    "fig2": _render_fig2,
    "fig3": _render_fig3,
    "sweep": _render_sweep,
}
