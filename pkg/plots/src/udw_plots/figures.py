"""Figure renderers for the sweep CSV datasets.

Each renderer validates the data it is about to draw (schema, and the
structural properties the dataset is supposed to have), then writes the
same figure as both SVG and PNG.  Output is deterministic for identical
input: fixed hash salt, no embedded dates.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .csv_io import Dataset, SchemaError, caption_from_params, read_dataset

plt.rcParams["svg.hashsalt"] = "udw-plots"

_SYMMETRY_RTOL = 1e-9
_REFERENCE_ATOL = 1e-12


class ValidationError(ValueError):
    """The dataset violates a property the figure is supposed to show."""


def _series_labels(values, fmt):
    return [fmt.format(v) for v in values]


def _finish(fig, stem, caption):
    fig.text(0.01, 0.01, caption, fontsize=6, color="0.35")
    svg = f"{stem}.svg"
    png = f"{stem}.png"
    fig.savefig(svg, metadata={"Date": None})
    fig.savefig(png, dpi=150)
    plt.close(fig)
    return [svg, png]


def _check_gap_symmetry(omega, values, label):
    order = np.argsort(omega)
    om, vals = omega[order], values[order]
    if not np.allclose(om, -om[::-1], rtol=0.0, atol=1e-12):
        raise ValidationError(f"{label}: omega grid is not symmetric about 0")
    if not np.allclose(vals, vals[::-1], rtol=_SYMMETRY_RTOL, atol=0.0):
        worst = np.max(np.abs(vals - vals[::-1]) / np.abs(vals))
        raise ValidationError(
            f"{label}: p_m is not symmetric under omega -> -omega "
            f"(worst relative asymmetry {worst:.3e})")


def render_fig1(dataset: Dataset, stem):
    dataset.require("delta_tau", "tau_i", "p_m", "p_v")
    dt = dataset.column("delta_tau")
    ti = dataset.column("tau_i")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for t in np.unique(ti):
        sel = ti == t
        order = np.argsort(dt[sel])
        ax.plot(dt[sel][order], dataset.column("p_m")[sel][order],
                label=rf"$P_m$, $\tau_i\sigma={t:g}$")
        ax.plot(dt[sel][order], dataset.column("p_v")[sel][order], "--",
                label=rf"$P_v$, $\tau_i\sigma={t:g}$")
    ax.set_xlabel(r"$\Delta\tau\,\sigma$")
    ax.set_ylabel("transition probability")
    ax.legend(fontsize=8)
    return _finish(fig, stem, caption_from_params(dataset.params))


def render_fig2(dataset: Dataset, stem):
    dataset.require("omega", "tau_i", "p_m")
    omega = dataset.column("omega")
    ti = dataset.column("tau_i")
    pm = dataset.column("p_m")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for t in np.unique(ti):
        sel = ti == t
        _check_gap_symmetry(omega[sel], pm[sel], f"fig2 (tau_i={t:g})")
        order = np.argsort(omega[sel])
        ax.plot(omega[sel][order], pm[sel][order], label=rf"$\tau_i\sigma={t:g}$")
    ax.set_xlabel(r"$\Omega/\sigma$")
    ax.set_ylabel(r"$P_m$")
    ax.legend(fontsize=8)
    return _finish(fig, stem, caption_from_params(dataset.params))


def render_fig3(dataset: Dataset, stem):
    dataset.require("omega", "p_m", "p_v")
    omega = dataset.column("omega")
    order = np.argsort(omega)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogy(omega[order], dataset.column("p_m")[order], label=r"$P_m$")
    ax.semilogy(omega[order], dataset.column("p_v")[order], "--", label=r"$P_v$")
    ax.set_xlabel(r"$\Omega/\sigma$")
    ax.set_ylabel("transition probability")
    ax.legend(fontsize=8)
    return _finish(fig, stem, caption_from_params(dataset.params))


def render_fig4(dataset: Dataset, stem):
    dataset.require("x0", "k0", "p_m")
    x0 = dataset.column("x0")
    k0 = dataset.column("k0")
    pm = dataset.column("p_m")
    xs = np.unique(x0)
    ks = np.unique(k0)
    if len(xs) * len(ks) != len(pm):
        raise SchemaError(f"{dataset.path}: rows do not form a full x0 x k0 grid")
    grid = pm.reshape(len(xs), len(ks))  # row-major: x0 outer, k0 inner

    fig, (ax_map, ax_cut) = plt.subplots(
        1, 2, figsize=(9.0, 4.0), gridspec_kw={"width_ratios": [1.3, 1.0]})
    mesh = ax_map.pcolormesh(xs, ks, grid.T, shading="auto")
    fig.colorbar(mesh, ax=ax_map, label=r"$P_m$")
    ax_map.set_xlabel(r"$x_0\,\sigma$")
    ax_map.set_ylabel(r"$k_0/\sigma$")

    cut_values = [k for k in (0.0, 0.5, 1.0) if np.any(np.isclose(ks, k))]
    if not cut_values:
        cut_values = [ks[len(ks) // 2]]
    for k in cut_values:
        idx = int(np.argmin(np.abs(ks - k)))
        ax_cut.semilogy(xs, grid[:, idx], label=rf"$P_m$, $k_0/\sigma={ks[idx]:g}$")
    if "p_v" in dataset.table:
        ax_cut.semilogy(xs, dataset.column("p_v").reshape(len(xs), len(ks))[:, 0],
                        "k--", label=r"$P_v$")
    ax_cut.set_xlabel(r"$x_0\,\sigma$")
    ax_cut.set_ylabel("transition probability")
    ax_cut.legend(fontsize=8)
    return _finish(fig, stem, caption_from_params(dataset.params))


def render_fig5(dataset: Dataset, stem):
    dataset.require("x0", "k0", "ratio_normalized")
    x0 = dataset.column("x0")
    k0 = dataset.column("k0")
    ratio = dataset.column("ratio_normalized")

    reference = (x0 == 0.0) & (k0 == 0.0)
    if not np.any(reference):
        raise ValidationError(f"{dataset.path}: fig5 grid lacks the (x0=0, k0=0) "
                              "normalization point")
    if not np.all(np.abs(ratio[reference] - 1.0) <= _REFERENCE_ATOL):
        raise ValidationError(
            f"{dataset.path}: normalized ratio at (0, 0) is {ratio[reference][0]!r}, "
            "expected exactly 1")

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for k in np.unique(k0):
        sel = k0 == k
        order = np.argsort(x0[sel])
        ax.plot(x0[sel][order], ratio[sel][order], label=rf"$k_0/\sigma={k:g}$")
    ax.axhline(1.0, color="0.6", lw=0.8)
    ax.set_xlabel(r"$x_0\,\sigma$")
    ax.set_ylabel(r"$P_{avg}/P_m$ (normalized)")
    ax.legend(fontsize=8)
    return _finish(fig, stem, caption_from_params(dataset.params))


_RENDERERS = {
    "fig1": render_fig1,
    "fig2": render_fig2,
    "fig3": render_fig3,
    "fig4": render_fig4,
    "fig5": render_fig5,
}

FIGURE_IDS = tuple(_RENDERERS)


def render(fig_id, csv_in, img_stem):
    """Render one figure id from its CSV; writes <img_stem>.svg and .png."""
    if fig_id not in _RENDERERS:
        raise ValueError(f"unknown figure id {fig_id!r}; expected one of {FIGURE_IDS}")
    dataset = read_dataset(csv_in)
    return _RENDERERS[fig_id](dataset, img_stem)
