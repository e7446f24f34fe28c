"""Command-line interface.

Subcommands:

  run <config>        time series from a key=value config file -> CSV
  sweep <config>      parameter sweep from a config file with sweep.* keys
  preset <name>       run a named figure preset (--desk default, --full)
  oracle              randomized Gaussian-vs-dense equivalence suite
  spectrum <config>   quasiparticle energies and MZM splitting

Exit codes: 0 success, 1 validation error, 2 numerical-consistency error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .csvio import write_series_csv, write_sweep_csv
from .errors import NumericalConsistencyError, ValidationError
from .experiments import run_sweep, run_time_series
from .manifest import parse_config
from .model import build_hamiltonian, mzm_splitting, single_particle_spectrum
from .presets import PRESET_NAMES, preset
from .verify import RNG_ALGORITHM, equivalence_suite

ORACLE_TOLERANCE = 1e-8


def _load_manifest(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}")
    return parse_config(text)


def _default_out(path: str, suffix: str) -> str:
    base = os.path.splitext(os.path.basename(path))[0]
    return f"{base}{suffix}.csv"


def _cmd_run(args) -> int:
    manifest = _load_manifest(args.config)
    if manifest.sweep is not None:
        raise ValidationError("config defines a sweep; use the `sweep` subcommand")
    record = run_time_series(manifest.config, manifest.measures)
    out = args.out or manifest.output or _default_out(args.config, "")
    write_series_csv(record, out, units=manifest.units)
    print(f"wrote {out} ({len(record.series.times)} times)")
    for key in ("dS_P_plateau", "dI_plateau", "onset_time"):
        if key in record.derived and record.derived[key] is not None:
            value = record.derived[key]
            if key != "onset_time" and manifest.units == "log2":
                value = value / np.log(2)
            print(f"  {key} = {value:.6g}")
    return 0


def _cmd_sweep(args) -> int:
    manifest = _load_manifest(args.config)
    if manifest.sweep is None:
        raise ValidationError("config defines no sweep.* axes; use `run`")
    table = run_sweep(manifest.sweep, workers=manifest.workers)
    out = args.out or manifest.output or _default_out(args.config, "")
    write_sweep_csv(table, manifest.sweep.base, out, units=manifest.units)
    failed = sum(1 for e in table.errors if e)
    print(f"wrote {out} ({len(table.rows)} points, {failed} failed)")
    return 0


def _cmd_preset(args) -> int:
    plan = preset(args.name, desk=not args.full)
    outdir = args.outdir
    os.makedirs(outdir, exist_ok=True)
    written = []
    for run in plan.series_runs:
        record = run_time_series(run.config, run.measures)
        out = os.path.join(outdir, f"{plan.name}-{run.label}.csv")
        write_series_csv(record, out, units=args.units)
        written.append(out)
    for k, grid in enumerate(plan.sweeps):
        table = run_sweep(grid, workers=args.workers)
        suffix = f"-sweep{k + 1}" if len(plan.sweeps) > 1 else "-sweep"
        out = os.path.join(outdir, f"{plan.name}{suffix}.csv")
        write_sweep_csv(table, grid.base, out, units=args.units)
        written.append(out)
    for out in written:
        print(f"wrote {out}")
    return 0


def _cmd_oracle(args) -> int:
    report = equivalence_suite(sizes=tuple(args.n), n_configs=args.seeds,
                               seed=args.seed)
    print(f"# rng={RNG_ALGORITHM} seed={args.seed} configs={report.n_configs} "
          f"sizes={','.join(str(n) for n in args.n)}")
    print(f"max |S_gaussian - S_dense|      = {report.max_entropy_deviation:.3e}")
    print(f"max |I_gaussian - I_dense|      = {report.max_mi_deviation:.3e}")
    print(f"max ground-energy deviation     = {report.max_energy_deviation:.3e}")
    print(f"max thermal entropy deviation   = {report.max_thermal_deviation:.3e}")
    print(f"toy-state MI deviation          = {report.toy_mi_deviation:.3e}")
    if report.max_deviation < ORACLE_TOLERANCE:
        print(f"PASS (< {ORACLE_TOLERANCE:.0e})")
        return 0
    print(f"FAIL (>= {ORACLE_TOLERANCE:.0e})")
    raise NumericalConsistencyError(
        f"oracle deviation {report.max_deviation:.3e} exceeds {ORACLE_TOLERANCE:.0e}"
    )


def _cmd_spectrum(args) -> int:
    manifest = _load_manifest(args.config)
    config = manifest.config
    for phase in ("initial", "final"):
        spec = single_particle_spectrum(build_hamiltonian(config, phase))
        e = spec.energies
        head = ", ".join(f"{x:.6g}" for x in e[:6])
        print(f"{phase}: {len(e)} modes, lowest energies [{head}{', ...' if len(e) > 6 else ''}]")
    try:
        split = mzm_splitting(config)
        print(f"MZM splitting (isolated final Q block): {split:.6e}")
    except ValidationError as exc:
        print(f"MZM splitting: n/a ({exc})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quenchprobe",
        description="Quench-probe entanglement dynamics in free-fermion chains",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a time series from a config file")
    p.add_argument("config")
    p.add_argument("--out", default="")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("sweep", help="run a parameter sweep from a config file")
    p.add_argument("config")
    p.add_argument("--out", default="")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("preset", help="run a named figure preset")
    p.add_argument("name", help=f"one of: {', '.join(PRESET_NAMES)}")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--desk", action="store_true", default=True,
                       help="desk-sized variant (default)")
    group.add_argument("--full", action="store_true",
                       help="full figure-note sizes (slow)")
    p.add_argument("--outdir", default=".")
    p.add_argument("--units", choices=("log2", "nats"), default="log2")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=_cmd_preset)

    p = sub.add_parser("oracle", help="run the dense-oracle equivalence suite")
    p.add_argument("--n", type=int, nargs="+", default=[4, 6, 8])
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("spectrum", help="quasiparticle energies and MZM splitting")
    p.add_argument("config")
    p.set_defaults(func=_cmd_spectrum)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalConsistencyError as exc:
        print(f"numerical-consistency error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
