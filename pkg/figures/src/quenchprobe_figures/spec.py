"""Figure-spec files: flat key=value descriptions of one rendered panel.

Keys:

  panel     lines | heatmap | loglog                       (required)
  csv       comma list of input CSV paths, relative to the spec file
  out       output image path base (.png and .svg are appended)
  x         x column (default "t" for lines, first axis for heatmaps)
  y         comma list of value columns (lines/loglog; one set per CSV)
  labels    comma list of legend labels, one per csv/column pair
  delta     true: subtract the matching protocol baseline (S_P -> S_P(0),
            I -> I(t0), ...) read from the CSV header echo
  guides    comma list of horizontal guide values (entropy panels)
  vcol      heatmap value column
  ycol      heatmap second axis column
  lr_line   true: overlay the light-cone line d = t on a heatmap
  contour_col / contour_levels   overlay contours of another column
  flip      true: plot 1 - y/log(2) instead of y (deficit panels)
  title, xlabel, ylabel          axis decorations
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field


class FigureSpecError(ValueError):
    """A figure spec or its referenced data is invalid."""


_KNOWN = {"panel", "csv", "out", "x", "y", "labels", "delta", "guides",
          "vcol", "ycol", "lr_line", "contour_col", "contour_levels",
          "flip", "title", "xlabel", "ylabel"}
_PANELS = ("lines", "heatmap", "loglog")


@dataclass
class FigureSpec:
    panel: str
    csv_paths: list
    out: str
    x: str = "t"
    y: list = field(default_factory=lambda: ["S_P"])
    labels: list = field(default_factory=list)
    delta: bool = False
    guides: list = field(default_factory=list)
    vcol: str = ""
    ycol: str = ""
    lr_line: bool = False
    contour_col: str = ""
    contour_levels: list = field(default_factory=list)
    flip: bool = False
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""


def parse_figure_spec(text: str, base_dir: str = ".") -> FigureSpec:
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FigureSpecError(f"line {lineno}: expected key=value")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in _KNOWN:
            raise FigureSpecError(f"line {lineno}: unknown key {key!r}")
        entries[key] = value

    for required in ("panel", "csv", "out"):
        if required not in entries:
            raise FigureSpecError(f"missing required key {required!r}")
    panel = entries["panel"]
    if panel not in _PANELS:
        raise FigureSpecError(f"panel must be one of {_PANELS}, got {panel!r}")

    def _list(key, default=()):
        if key not in entries:
            return list(default)
        return [v.strip() for v in entries[key].split(",") if v.strip()]

    def _bool(key):
        return entries.get(key, "false").strip().lower() in ("true", "1", "yes")

    csv_paths = [os.path.normpath(os.path.join(base_dir, p)) for p in _list("csv")]
    out = os.path.normpath(os.path.join(base_dir, entries["out"]))
    return FigureSpec(
        panel=panel,
        csv_paths=csv_paths,
        out=out,
        x=entries.get("x", "t"),
        y=_list("y", ["S_P"]),
        labels=_list("labels"),
        delta=_bool("delta"),
        guides=[float(v) for v in _list("guides")],
        vcol=entries.get("vcol", ""),
        ycol=entries.get("ycol", ""),
        lr_line=_bool("lr_line"),
        contour_col=entries.get("contour_col", ""),
        contour_levels=[float(v) for v in _list("contour_levels")],
        flip=_bool("flip"),
        title=entries.get("title", ""),
        xlabel=entries.get("xlabel", ""),
        ylabel=entries.get("ylabel", ""),
    )


def load_figure_spec(path: str) -> FigureSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FigureSpecError(f"cannot read spec {path}: {exc}")
    return parse_figure_spec(text, base_dir=os.path.dirname(os.path.abspath(path)))
