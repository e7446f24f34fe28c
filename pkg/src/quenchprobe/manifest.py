"""Flat key=value run configuration: parsing, validation, rendering.

Schema (one `key=value` per line, `#` starts a comment, keys are flat):

  physics   n_total, l, d, mu_i, tau_i, delta_i, mu_f, tau_f, delta_f,
            mu_p, tau_p, tau_t, tau_gg, temperature, t0
  grid      t_max, n_times        -> times = linspace(0, t_max, n_times)
  run       measures (comma list of S_Q,S_X,S_P,S_QP,I,S2_Q,S2_X,S2_P,
            S2_QP,I2), units (log2|nats), preset (name), trace (label of a
            preset series run), output (path), workers (int), desk
            (true|false), sweep_measure (comma list), t_sf (sweep time)
  sweep     sweep.<param>.values = comma list of numbers ("t" allowed as
            a pseudo-parameter)

A `preset=` line materializes the named preset's parameters first; every
other key in the file then overrides them.  Unknown keys are hard errors
reported with their line number.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ValidationError
from .experiments import MEASURES, SWEEP_MEASURES, SweepGrid
from .model import SetupConfig
from .presets import PRESET_NAMES, preset

__all__ = ["RunManifest", "parse_config", "render"]

_CONFIG_FLOAT_KEYS = ("mu_i", "tau_i", "delta_i", "mu_f", "tau_f", "delta_f",
                      "mu_p", "tau_p", "tau_t", "tau_gg", "temperature", "t0")
_CONFIG_INT_KEYS = ("n_total", "l", "d")
_RUN_KEYS = ("t_max", "n_times", "measures", "units", "preset", "trace",
             "output", "workers", "desk", "sweep_measure", "t_sf")
_KNOWN_KEYS = set(_CONFIG_FLOAT_KEYS) | set(_CONFIG_INT_KEYS) | set(_RUN_KEYS)


@dataclass(frozen=True)
class RunManifest:
    """Parsed configuration plus execution options."""

    config: SetupConfig
    measures: tuple = ("S_Q", "S_P", "S_QP", "I")
    units: str = "log2"
    output: str = ""
    workers: int = 1
    desk: bool = True
    sweep: SweepGrid = None
    preset_name: str = ""
    trace: str = ""


def _parse_bool(value: str, key: str, lineno: int) -> bool:
    v = value.strip().lower()
    if v in ("true", "1", "yes"):
        return True
    if v in ("false", "0", "no"):
        return False
    raise ValidationError(f"line {lineno}: {key} must be true/false, got {value!r}")


def _parse_float(value: str, key: str, lineno: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise ValidationError(f"line {lineno}: {key} expects a number, got {value!r}")


def _parse_int(value: str, key: str, lineno: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ValidationError(f"line {lineno}: {key} expects an integer, got {value!r}")


def parse_config(text: str) -> RunManifest:
    """Parse the documented key=value schema into a validated manifest."""
    entries = {}
    sweep_axes = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key.startswith("sweep."):
            parts = key.split(".")
            if len(parts) != 3 or parts[2] != "values":
                raise ValidationError(
                    f"line {lineno}: sweep keys look like sweep.<param>.values"
                )
            param = parts[1]
            if param != "t" and param not in _CONFIG_FLOAT_KEYS + _CONFIG_INT_KEYS:
                raise ValidationError(f"line {lineno}: unknown sweep parameter {param!r}")
            try:
                vals = tuple(float(v) for v in value.split(",") if v.strip())
            except ValueError:
                raise ValidationError(f"line {lineno}: bad number list {value!r}")
            if not vals:
                raise ValidationError(f"line {lineno}: empty sweep axis {param!r}")
            sweep_axes.append((param, vals))
            continue
        if key not in _KNOWN_KEYS:
            raise ValidationError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise ValidationError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = (value, lineno)

    # start from a preset if requested
    base_config = None
    measures = None
    preset_name = entries.pop("preset", ("", 0))[0]
    trace = entries.pop("trace", ("", 0))[0]
    if preset_name:
        if preset_name not in PRESET_NAMES:
            raise ValidationError(f"unknown preset {preset_name!r}")
        desk = True
        if "desk" in entries:  # peeked here, popped later with the run options
            desk = _parse_bool(entries["desk"][0], "desk", entries["desk"][1])
        plan = preset(preset_name, desk=desk)
        if plan.series_runs:
            run = plan.series_runs[0]
            if trace:
                matches = [r for r in plan.series_runs if r.label == trace]
                if not matches:
                    labels = ", ".join(r.label for r in plan.series_runs)
                    raise ValidationError(
                        f"preset {preset_name!r} has no trace {trace!r} (have: {labels})"
                    )
                run = matches[0]
            base_config = run.config
            measures = run.measures
        elif plan.sweeps:
            base_config = plan.sweeps[0].base
    elif trace:
        raise ValidationError("trace= requires preset=")

    overrides = {}
    for key in _CONFIG_FLOAT_KEYS:
        if key in entries:
            overrides[key] = _parse_float(entries.pop(key)[0], key, 0)
    for key in _CONFIG_INT_KEYS:
        if key in entries:
            overrides[key] = _parse_int(entries.pop(key)[0], key, 0)

    t_max = None
    n_times = None
    if "t_max" in entries:
        value, lineno = entries.pop("t_max")
        t_max = _parse_float(value, "t_max", lineno)
    if "n_times" in entries:
        value, lineno = entries.pop("n_times")
        n_times = _parse_int(value, "n_times", lineno)
    if t_max is not None:
        if n_times is None:
            n_times = max(2, int(t_max / 2) + 1)
        overrides["times"] = tuple(np.linspace(0.0, t_max, n_times))
    elif n_times is not None:
        raise ValidationError("n_times given without t_max")

    if base_config is None:
        missing = [k for k in ("n_total", "l", "d", "mu_i", "tau_i", "delta_i",
                               "mu_f", "tau_f", "delta_f") if k not in overrides]
        if missing:
            raise ValidationError(
                f"missing required keys (no preset given): {', '.join(missing)}"
            )
        if "times" not in overrides and not sweep_axes:
            raise ValidationError("missing t_max (no preset given)")
        config = SetupConfig(**overrides)
    else:
        config = replace(base_config, **overrides) if overrides else base_config

    if "measures" in entries:
        value, lineno = entries.pop("measures")
        measures = tuple(m.strip() for m in value.split(",") if m.strip())
        bad = set(measures) - set(MEASURES)
        if bad:
            raise ValidationError(f"line {lineno}: unknown measures {sorted(bad)}")
    if measures is None:
        measures = ("S_Q", "S_P", "S_QP", "I")

    units = "log2"
    if "units" in entries:
        value, lineno = entries.pop("units")
        if value not in ("log2", "nats"):
            raise ValidationError(f"line {lineno}: units must be log2 or nats")
        units = value

    output = entries.pop("output", ("", 0))[0]
    workers = 1
    if "workers" in entries:
        value, lineno = entries.pop("workers")
        workers = _parse_int(value, "workers", lineno)
        if workers < 1:
            raise ValidationError(f"line {lineno}: workers must be >= 1")
    desk = True
    if "desk" in entries:
        value, lineno = entries.pop("desk")
        desk = _parse_bool(value, "desk", lineno)

    sweep = None
    if sweep_axes:
        sweep_measures = ("dI",)
        if "sweep_measure" in entries:
            value, lineno = entries.pop("sweep_measure")
            sweep_measures = tuple(m.strip() for m in value.split(",") if m.strip())
            bad = set(sweep_measures) - set(SWEEP_MEASURES)
            if bad:
                raise ValidationError(
                    f"line {lineno}: unknown sweep measures {sorted(bad)}"
                )
        t_sf = None
        if "t_sf" in entries:
            value, lineno = entries.pop("t_sf")
            t_sf = _parse_float(value, "t_sf", lineno)
        elif config.times:
            t_sf = max(config.times)
        else:
            raise ValidationError("sweep needs t_sf or a time grid")
        axes = []
        for param, vals in sweep_axes:
            if param in _CONFIG_INT_KEYS:
                vals = tuple(int(v) for v in vals)
            axes.append((param, vals))
        sweep = SweepGrid(base=config, axes=tuple(axes),
                          measures=sweep_measures, t_sf=t_sf)
    else:
        if "sweep_measure" in entries:
            raise ValidationError("sweep_measure given without sweep axes")
        if "t_sf" in entries:
            raise ValidationError("t_sf given without sweep axes")

    if entries:
        key, (_, lineno) = next(iter(entries.items()))
        raise ValidationError(f"line {lineno}: key {key!r} not applicable here")

    return RunManifest(config=config, measures=measures, units=units,
                       output=output, workers=workers, desk=desk,
                       sweep=sweep, preset_name=preset_name, trace=trace)


def _fmt_num(x) -> str:
    return repr(float(x)) if not float(x).is_integer() else str(int(x))


def render(manifest: RunManifest) -> str:
    """Render a manifest to the flat schema; parse_config inverts it."""
    cfg = manifest.config
    lines = []
    for key in _CONFIG_INT_KEYS:
        lines.append(f"{key}={getattr(cfg, key)}")
    for key in _CONFIG_FLOAT_KEYS:
        lines.append(f"{key}={_fmt_num(getattr(cfg, key))}")
    if cfg.times:
        times = np.asarray(cfg.times)
        uniform = times[0] == 0.0 and (
            len(times) < 3 or np.allclose(np.diff(times), np.diff(times)[0],
                                          rtol=0, atol=1e-12))
        if not uniform:
            raise ValidationError("only uniform-from-zero grids can be rendered")
        lines.append(f"t_max={_fmt_num(times[-1])}")
        lines.append(f"n_times={len(times)}")
    lines.append(f"measures={','.join(manifest.measures)}")
    lines.append(f"units={manifest.units}")
    if manifest.output:
        lines.append(f"output={manifest.output}")
    lines.append(f"workers={manifest.workers}")
    lines.append(f"desk={'true' if manifest.desk else 'false'}")
    if manifest.sweep is not None:
        for param, vals in manifest.sweep.axes:
            lines.append(f"sweep.{param}.values={','.join(_fmt_num(v) for v in vals)}")
        lines.append(f"sweep_measure={','.join(manifest.sweep.measures)}")
        lines.append(f"t_sf={_fmt_num(manifest.sweep.t_sf)}")
    return "\n".join(lines) + "\n"
