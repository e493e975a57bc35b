"""Figure builders: one function per panel kind, plus routing.

Everything is drawn with the object-oriented matplotlib API (no pyplot,
no global state) so rendering is deterministic and backend-free; PNG
output is pinned to a fixed DPI by save_panel.
"""

from __future__ import annotations

import numpy as np
from matplotlib.figure import Figure
from matplotlib.patches import Patch

from .io import SchemaError, drop_failed_rows, load_table, varying_axes

__all__ = ["PANEL_KINDS", "DPI", "EVENT_COLORS", "spectrum_map",
           "entropy_lines", "d2_scatter", "steady_lines", "eta_heatmap",
           "oddeven_bars", "build_panel", "save_panel"]

PANEL_KINDS = ("spectrum_map", "entropy_lines", "d2_scatter",
               "steady_lines", "eta_heatmap", "oddeven_bars")

DPI = 150

# Crossings are drawn black, anticrossings violet.
EVENT_COLORS = {"crossing": "black", "anticrossing": "darkviolet"}

AXIS_LABELS = {"zeta": "zeta (eV)", "delta": "delta", "Delta": "Delta (eV)",
               "L": "number of chains L", "N": "chain length N"}


def _fig(width=7.0, height=4.5):
    fig = Figure(figsize=(width, height), constrained_layout=True)
    return fig, fig.add_subplot()


def _spectrum_axis(df) -> str:
    names = df["param_name"].unique()
    if len(names) != 1:
        raise SchemaError(f"spectrum table mixes sweep axes {sorted(names)}")
    return str(names[0])


def spectrum_map(spectrum, events=None) -> Figure:
    """Energy bands colored by photon weight, with event markers."""
    name = _spectrum_axis(spectrum)
    fig, ax = _fig()
    pts = ax.scatter(spectrum["param_value"], spectrum["energy_eV"],
                     c=spectrum["photon_weight"], s=4, cmap="viridis",
                     vmin=0.0, vmax=1.0, rasterized=True)
    fig.colorbar(pts, ax=ax, label="photon weight")
    if events is not None:
        for _, ev in events.iterrows():
            ax.axvline(float(ev["param_value"]),
                       color=EVENT_COLORS.get(str(ev["kind"]), "gray"),
                       lw=1.0, alpha=0.9)
    ax.set_xlabel(AXIS_LABELS.get(name, name))
    ax.set_ylabel("energy (eV)")
    return fig


def entropy_lines(spectrum) -> Figure:
    """Per-branch entropy along the sweep."""
    name = _spectrum_axis(spectrum)
    fig, ax = _fig()
    for branch, sub in spectrum.groupby("branch"):
        sub = sub.sort_values("param_value")
        ax.plot(sub["param_value"], sub["entropy_bits"], lw=1.0)
    ax.set_xlabel(AXIS_LABELS.get(name, name))
    ax.set_ylabel("entropy (bits)")
    return fig


def d2_scatter(spectrum) -> Figure:
    """Second difference of the photon weight along the sweep.

    A plotting-side finite difference of the tabulated column; nothing
    is re-diagonalized.
    """
    name = _spectrum_axis(spectrum)
    fig, ax = _fig()
    for branch, sub in spectrum.groupby("branch"):
        sub = sub.sort_values("param_value")
        x = sub["param_value"].to_numpy(float)
        if len(x) < 3:
            raise SchemaError("d2_scatter needs at least 3 grid points")
        dx = np.diff(x)
        if not np.allclose(dx, dx[0], rtol=1e-8, atol=1e-12):
            raise SchemaError("d2_scatter needs a uniform sweep grid")
        w = sub["photon_weight"].to_numpy(float)
        d2 = (w[2:] - 2.0 * w[1:-1] + w[:-2]) / dx[0] ** 2
        ax.scatter(x[1:-1], d2, s=6)
    ax.set_xlabel(AXIS_LABELS.get(name, name))
    ax.set_ylabel("d2 photon weight")
    return fig


def _steady_axis(label, df) -> str:
    axes = varying_axes(df)
    if len(axes) != 1:
        raise SchemaError(f"{label}: steady_lines needs exactly one varying "
                          f"sweep column, found {axes or 'none'}")
    return axes[0]


def steady_lines(tables) -> Figure:
    """Efficiency along a 1D sweep; currents too when a single curve.

    tables: sequence of (label, steady dataframe).
    """
    groups = []
    axis = None
    for label, df in tables:
        df = drop_failed_rows(df)
        ax_name = _steady_axis(label, df)
        if axis is None:
            axis = ax_name
        elif ax_name != axis:
            raise SchemaError(f"{label}: sweeps {ax_name}, other inputs "
                              f"sweep {axis}")
        for config, sub in df.groupby("config"):
            groups.append((label, str(config), sub.sort_values(axis)))
    fig, ax = _fig()
    many_files = len({lab for lab, _, _ in groups}) > 1
    for label, config, sub in groups:
        curve = f"{config} ({label})" if many_files else config
        ax.plot(sub[axis], sub["eta"], lw=1.4, label=f"eta {curve}")
    if len(groups) == 1:
        _, _, sub = groups[0]
        twin = ax.twinx()
        twin.plot(sub[axis], sub["I_i"], "--", color="tab:gray", lw=1.0,
                  label="I_i")
        twin.plot(sub[axis], sub["I_o"], ":", color="tab:red", lw=1.0,
                  label="I_o")
        twin.set_ylabel("current (eV)")
        lines = ax.get_lines() + twin.get_lines()
        ax.legend(lines, [ln.get_label() for ln in lines], fontsize=8)
    else:
        ax.legend(fontsize=8)
    ax.set_xlabel(AXIS_LABELS.get(axis, axis))
    ax.set_ylabel("efficiency eta")
    return fig


def eta_heatmap(df) -> Figure:
    """Efficiency over a 2D sweep grid."""
    df = drop_failed_rows(df)
    axes = varying_axes(df)
    if len(axes) != 2:
        raise SchemaError(f"eta_heatmap needs exactly two varying sweep "
                          f"columns, found {axes or 'none'}")
    x, y = axes
    piv = df.pivot_table(index=y, columns=x, values="eta", aggfunc="mean")
    fig, ax = _fig()
    mesh = ax.pcolormesh(piv.columns.to_numpy(float),
                         piv.index.to_numpy(float),
                         piv.to_numpy(float), shading="nearest", cmap="magma")
    fig.colorbar(mesh, ax=ax, label="efficiency eta")
    ax.set_xlabel(AXIS_LABELS.get(x, x))
    ax.set_ylabel(AXIS_LABELS.get(y, y))
    return fig


def oddeven_bars(df) -> Figure:
    """Efficiency bars over an integer size axis, colored by parity."""
    df = drop_failed_rows(df)
    axes = varying_axes(df)
    if len(axes) != 1 or axes[0] not in ("L", "N"):
        raise SchemaError(f"oddeven_bars needs exactly one varying integer "
                          f"axis (L or N), found {axes or 'none'}")
    axis = axes[0]
    sub = df.sort_values(axis)
    vals = sub[axis].to_numpy(int)
    if len(np.unique(vals)) != len(vals):
        raise SchemaError(f"oddeven_bars needs one row per {axis}")
    eta = sub["eta"].to_numpy(float)
    colors = ["tab:blue" if v % 2 else "tab:orange" for v in vals]
    fig, ax = _fig()
    ax.bar(vals, eta, color=colors)
    ax.legend(handles=[Patch(color="tab:blue", label="odd"),
                       Patch(color="tab:orange", label="even")], fontsize=8)
    ax.set_xticks(vals)
    ax.set_xlabel(AXIS_LABELS.get(axis, axis))
    ax.set_ylabel("efficiency eta")
    return fig


def build_panel(kind: str, in_paths, events_path=None) -> Figure:
    """Load and validate the inputs for a panel kind and build its figure."""
    if kind not in PANEL_KINDS:
        raise SchemaError(f"unknown panel kind {kind!r}; expected one of "
                          f"{', '.join(PANEL_KINDS)}")
    in_paths = list(in_paths)
    if kind != "spectrum_map" and events_path is not None:
        raise SchemaError("an events table only applies to spectrum_map")
    if kind in ("spectrum_map", "entropy_lines", "d2_scatter"):
        if len(in_paths) != 1:
            raise SchemaError(f"{kind} takes exactly one spectrum CSV")
        spectrum = load_table(in_paths[0], "spectrum")
        if kind == "spectrum_map":
            events = (load_table(events_path, "events")
                      if events_path is not None else None)
            return spectrum_map(spectrum, events)
        return (entropy_lines if kind == "entropy_lines" else d2_scatter)(spectrum)
    if kind == "steady_lines":
        if not in_paths:
            raise SchemaError("steady_lines takes one or more steady CSVs")
        return steady_lines([(str(p), load_table(p, "steady")) for p in in_paths])
    if len(in_paths) != 1:
        raise SchemaError(f"{kind} takes exactly one steady CSV")
    df = load_table(in_paths[0], "steady")
    return (eta_heatmap if kind == "eta_heatmap" else oddeven_bars)(df)


def save_panel(fig: Figure, out_path) -> None:
    fig.savefig(out_path, dpi=DPI, format="png",
                metadata={"Software": "chaincavity-plots"})
