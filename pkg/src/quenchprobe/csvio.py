"""Bit-stable CSV output for time series and sweep tables.

Files are UTF-8 with LF line endings; `#`-prefixed header lines echo the
full configuration and units.  Numeric fields use 12-significant-digit
scientific notation, so values re-parse to within 1e-12 relative and two
runs of the same computation produce byte-identical files.
"""

from __future__ import annotations

import io
import os

import numpy as np

from .entanglement import LN2
from .errors import ValidationError
from .experiments import MEASURES, SweepTable, TimeSeriesRecord
from .model import SetupConfig

__all__ = ["write_series_csv", "write_sweep_csv", "read_csv"]

_CONFIG_ECHO_KEYS = ("n_total", "l", "d", "mu_i", "tau_i", "delta_i",
                     "mu_f", "tau_f", "delta_f", "mu_p", "tau_p", "tau_t",
                     "tau_gg", "temperature", "t0")


def _num(x: float) -> str:
    return f"{x:.11e}"


def _config_echo(config: SetupConfig) -> list:
    lines = [f"# {key}={getattr(config, key)!r}" for key in _CONFIG_ECHO_KEYS]
    if config.times:
        times = np.asarray(config.times)
        lines.append(f"# t_min={times[0]!r} t_max={times[-1]!r} n_times={len(times)}")
    return lines


def _scale(units: str) -> float:
    if units == "log2":
        return 1.0 / LN2
    if units == "nats":
        return 1.0
    raise ValidationError(f"units must be log2 or nats, got {units!r}")


def write_series_csv(record: TimeSeriesRecord, path: str, units: str = "log2") -> str:
    """Write one time-series record; returns the path."""
    scale = _scale(units)
    measures = [m for m in MEASURES if m in record.series.values]
    buf = io.StringIO()
    buf.write("# quenchprobe series v1\n")
    for line in _config_echo(record.config):
        buf.write(line + "\n")
    buf.write(f"# units={units}\n")
    for key in sorted(record.baselines):
        buf.write(f"# baseline {key}={_num(record.baselines[key] * scale)}\n")
    for key in sorted(record.derived):
        val = record.derived[key]
        if isinstance(val, float):
            shown = _num(val * scale) if key != "onset_time" else _num(val)
            buf.write(f"# derived {key}={shown}\n")
        else:
            buf.write(f"# derived {key}={val}\n")
    buf.write(",".join(["t"] + measures) + "\n")
    for i, t in enumerate(record.series.times):
        row = [_num(float(t))]
        row += [_num(record.series.values[m][i] * scale) for m in measures]
        buf.write(",".join(row) + "\n")
    _write_atomic(path, buf.getvalue())
    return path


def write_sweep_csv(table: SweepTable, base_config: SetupConfig, path: str,
                    units: str = "log2") -> str:
    """Write a sweep table; rows stay in lexicographic grid order."""
    scale = _scale(units)
    buf = io.StringIO()
    buf.write("# quenchprobe sweep v1\n")
    for line in _config_echo(base_config):
        buf.write(line + "\n")
    buf.write(f"# units={units}\n")
    header = list(table.axis_names) + list(table.measures) + ["error"]
    buf.write(",".join(header) + "\n")
    n_axes = len(table.axis_names)
    for row, err in zip(table.rows, table.errors):
        cells = [_num(float(v)) for v in row[:n_axes]]
        for measure, v in zip(table.measures, row[n_axes:]):
            col_scale = 1.0 if measure == "splitting" else scale
            cells.append("" if v is None else _num(v * col_scale))
        cells.append(err.replace(",", ";"))
        buf.write(",".join(cells) + "\n")
    _write_atomic(path, buf.getvalue())
    return path


def _write_atomic(path: str, content: str):
    directory = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(content)
    except OSError as exc:
        raise ValidationError(f"cannot write {path}: {exc}")


def read_csv(path: str):
    """Read a quenchprobe CSV back: (meta lines, column dict of float arrays)."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}")
    meta = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if ln and not ln.startswith("#")]
    if not body:
        raise ValidationError(f"{path}: no table found")
    header = body[0].split(",")
    cols = {h: [] for h in header}
    for ln in body[1:]:
        for h, cell in zip(header, ln.split(",")):
            cols[h].append(cell)
    out = {}
    for h, cells in cols.items():
        if h == "error":
            out[h] = cells
        else:
            out[h] = np.array([float(c) if c else np.nan for c in cells])
    return meta, out
