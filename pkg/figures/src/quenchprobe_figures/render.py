"""Render one figure spec to PNG and SVG from quenchprobe CSV files.

Rendering is pure post-processing: all numbers come from the CSVs, nothing
is recomputed, and repeated renders of the same inputs produce stable
output (up to the installed matplotlib version).
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "quenchprobe"

import matplotlib.pyplot as plt
import numpy as np

from .spec import FigureSpec, FigureSpecError

LN2 = float(np.log(2.0))

# baseline key in the CSV header echo that each measure's delta subtracts
_BASELINE_OF = {"S_P": "S_P(0)", "S_Q": "S_Q(0)", "S_X": "S_X(0)",
                "S_QP": "S_QP(0)", "I": "I(t0)", "I2": "I2(t0)",
                "S2_P": "S2_P(0)", "S2_Q": "S2_Q(0)", "S2_QP": "S2_QP(0)"}

FIGSIZE = (4.8, 3.2)
DPI = 160


def read_quenchprobe_csv(path: str):
    """Parse a quenchprobe CSV into (meta dict, column dict)."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise FigureSpecError(f"cannot read CSV {path}: {exc}")
    meta = {}
    body = []
    for ln in lines:
        if ln.startswith("#"):
            item = ln[1:].strip()
            for tag in ("baseline ", "derived "):
                if item.startswith(tag):
                    item = item[len(tag):]
            if "=" in item:
                key, _, value = item.partition("=")
                meta[key.strip()] = value.strip()
        elif ln:
            body.append(ln)
    if not body:
        raise FigureSpecError(f"{path}: no table found")
    header = body[0].split(",")
    columns = {h: [] for h in header}
    for ln in body[1:]:
        for h, cell in zip(header, ln.split(",")):
            columns[h].append(cell)
    out = {}
    for h, cells in columns.items():
        if h == "error":
            out[h] = cells
        else:
            out[h] = np.array([float(c) if c else np.nan for c in cells])
    if not body[1:]:
        raise FigureSpecError(f"{path}: table has a header but no rows")
    return meta, out


def _column(columns, name, path):
    if name not in columns:
        raise FigureSpecError(
            f"{path}: missing column {name!r} (have: {', '.join(columns)})"
        )
    return columns[name]


def _series_values(meta, columns, name, delta, path):
    y = np.array(_column(columns, name, path), dtype=float)
    if delta:
        key = _BASELINE_OF.get(name)
        if key is None or key not in meta:
            raise FigureSpecError(f"{path}: no baseline recorded for {name!r}")
        y = y - float(meta[key])
    return y


def _render_lines(spec: FigureSpec, ax, loglog: bool):
    plotted = 0
    for i, path in enumerate(spec.csv_paths):
        meta, columns = read_quenchprobe_csv(path)
        x = np.array(_column(columns, spec.x, path), dtype=float)
        for name in spec.y:
            y = _series_values(meta, columns, name, spec.delta, path)
            if spec.flip:
                y = 1.0 - y
            label = None
            if spec.labels:
                label = spec.labels[min(plotted, len(spec.labels) - 1)]
            if loglog:
                mask = (x > 0) & (y > 0)
                ax.loglog(x[mask], y[mask], label=label)
            else:
                ax.plot(x, y, label=label)
            plotted += 1
    for guide in spec.guides:
        ax.axhline(guide, color="0.4", lw=0.8, ls=":")
    if spec.labels:
        ax.legend(frameon=False, fontsize=8)


def _render_heatmap(spec: FigureSpec, ax, fig):
    if len(spec.csv_paths) != 1:
        raise FigureSpecError("heatmap panels take exactly one CSV")
    path = spec.csv_paths[0]
    meta, columns = read_quenchprobe_csv(path)
    if not spec.vcol:
        raise FigureSpecError("heatmap needs vcol=")
    xname = spec.x if spec.x != "t" or "t" in columns else spec.x
    yname = spec.ycol
    if not yname:
        raise FigureSpecError("heatmap needs ycol=")
    x = np.array(_column(columns, xname, path), dtype=float)
    y = np.array(_column(columns, yname, path), dtype=float)
    v = np.array(_column(columns, spec.vcol, path), dtype=float)
    xs = np.unique(x)
    ys = np.unique(y)
    grid = np.full((len(ys), len(xs)), np.nan)
    xi = np.searchsorted(xs, x)
    yi = np.searchsorted(ys, y)
    grid[yi, xi] = v
    # the CSV grid is used directly, no interpolation
    mesh = ax.pcolormesh(xs, ys, grid, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=spec.vcol)
    if spec.lr_line:
        lim = [max(xs.min(), ys.min()), min(xs.max(), ys.max())]
        ax.plot(lim, lim, "k--", lw=1.0)
    if spec.contour_col:
        c = np.array(_column(columns, spec.contour_col, path), dtype=float)
        cgrid = np.full((len(ys), len(xs)), np.nan)
        cgrid[yi, xi] = c
        levels = sorted(spec.contour_levels) or None
        cs = ax.contour(xs, ys, cgrid, levels=levels, colors="k",
                        linewidths=0.9)
        ax.clabel(cs, fontsize=7, fmt="%g")


def render(spec: FigureSpec) -> list:
    """Render the spec; returns the written file paths ([png, svg])."""
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    try:
        if spec.panel in ("lines", "loglog"):
            _render_lines(spec, ax, loglog=spec.panel == "loglog")
        else:
            _render_heatmap(spec, ax, fig)
        ax.set_xlabel(spec.xlabel or spec.x)
        if spec.ylabel:
            ax.set_ylabel(spec.ylabel)
        if spec.title:
            ax.set_title(spec.title, fontsize=10)
        fig.tight_layout()
        out_dir = os.path.dirname(os.path.abspath(spec.out))
        os.makedirs(out_dir, exist_ok=True)
        written = []
        for ext in ("png", "svg"):
            target = f"{spec.out}.{ext}"
            fig.savefig(target, metadata=_stable_metadata(ext))
            written.append(target)
        return written
    finally:
        plt.close(fig)


def _stable_metadata(ext: str):
    if ext == "svg":
        return {"Date": None}
    return {}
