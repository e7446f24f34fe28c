"""Protocol layer: quench pipelines, sweeps, plateau/onset extraction, fits.

A time-series run follows the quench protocol end to end: build the initial
Hamiltonian, prepare its ground (or thermal) state, build the final
Hamiltonian, propagate the covariance matrix, and record the requested
entanglement measures on the configured time grid.  Entropy differences use
the protocol baselines Delta S(t) = S(t) - S(0) and
Delta I(t) = I(t) - I(t0).

All series values are stored in nats; unit conversion happens at output.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.signal import savgol_filter

from .covariance import BoundEvolution, CovarianceMatrix, ground_state, make_propagator, thermal_state
from .errors import ValidationError
from .model import SetupConfig, build_hamiltonian, mzm_splitting
from . import entanglement

__all__ = [
    "MEASURES",
    "SWEEP_MEASURES",
    "EntanglementSeries",
    "TimeSeriesRecord",
    "SweepGrid",
    "SweepTable",
    "PlateauResult",
    "FitResult",
    "run_time_series",
    "extract_plateau",
    "detect_onset",
    "smooth",
    "fit_power_law",
    "fit_log_law",
    "run_sweep",
]

# canonical column order for series output
MEASURES = ("S_Q", "S_X", "S_P", "S_QP", "I", "S2_Q", "S2_X", "S2_P", "S2_QP", "I2")
SWEEP_MEASURES = ("I", "dI", "S_P", "dS_P", "I2", "dI2", "S2_P", "dS2_P",
                  "splitting")

DEFAULT_MEASURES = ("S_Q", "S_P", "S_QP", "I")

MAX_SWEEP_POINTS = 10_000
MAX_SWEEP_N = 2000


@dataclass(frozen=True)
class EntanglementSeries:
    """Per-time values of the requested measures (nats)."""

    times: np.ndarray
    values: dict
    units: str = "nats"

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.size and not (np.diff(t) > 0).all():
            raise ValidationError("series times must be strictly increasing")
        for key, arr in self.values.items():
            if np.asarray(arr).shape != t.shape:
                raise ValidationError(f"measure {key} length mismatch")
            if np.asarray(arr).size and np.asarray(arr).min() < -1e-12:
                raise ValidationError(f"negative entropy in measure {key}")


@dataclass(frozen=True)
class TimeSeriesRecord:
    """One completed quench run: series, protocol baselines, derived scalars."""

    config: SetupConfig
    series: EntanglementSeries
    baselines: dict
    derived: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PlateauResult:
    value: float
    spread: float
    window: tuple


@dataclass(frozen=True)
class FitResult:
    model: str
    amplitude: float
    exponent: float
    offset: float
    window: tuple
    residual: float


class _MeasureEvaluator:
    """Evaluates the requested measures on blocks of M(t).

    One Q u P submatrix per time covers S_Q, S_P, S_QP and I (the Q and P
    blocks are its leading/trailing principal blocks); runs that only need
    one region pull just that block.  S_X needs its own block.
    """

    def __init__(self, config: SetupConfig, bound: BoundEvolution, measures):
        unknown = set(measures) - set(MEASURES)
        if unknown:
            raise ValidationError(f"unknown measures: {sorted(unknown)}")
        self.measures = tuple(measures)
        self.bound = bound
        self.nq = 2 * config.l
        want = set(measures)
        self.want_union = bool({"S_QP", "I", "S2_QP", "I2"} & want)
        self.want_q = bool({"S_Q", "S2_Q"} & want)
        self.want_p = bool({"S_P", "S2_P"} & want)
        self.want_x = bool({"S_X", "S2_X"} & want)
        self.idx_qp = config.region_qp().majorana_indices()
        self.idx_q = config.region_q().majorana_indices()
        self.idx_p = config.region_p().majorana_indices()
        self.idx_x = config.region_x().majorana_indices() if config.d else None
        self.need_vn = any(not m.startswith("S2") and m != "I2" for m in measures)
        self.need_q2 = any(m.startswith("S2") or m == "I2" for m in measures)

    def _entropies(self, sub: np.ndarray) -> tuple:
        # one eigvalsh serves both entropy families
        sv = entanglement._paired_singular_values(CovarianceMatrix(sub).m_matrix)
        s_vn = float(0.5 * entanglement._binary_entropy(sv).sum()) if self.need_vn else None
        s_2 = float(-0.5 * np.log((1.0 + sv**2) / 2.0).sum()) if self.need_q2 else None
        return s_vn, s_2

    def __call__(self, t: float) -> dict:
        out = {}
        nq = self.nq
        parts = {}
        if self.want_union:
            blk = self.bound.submatrix(t, self.idx_qp)
            parts["Q"] = blk[:nq, :nq]
            parts["P"] = blk[nq:, nq:]
            parts["QP"] = blk
        else:
            if self.want_q:
                parts["Q"] = self.bound.submatrix(t, self.idx_q)
            if self.want_p:
                parts["P"] = self.bound.submatrix(t, self.idx_p)
        if self.want_x and self.idx_x is not None:
            parts["X"] = self.bound.submatrix(t, self.idx_x)

        vn, r2 = {}, {}
        for name, sub in parts.items():
            vn[name], r2[name] = self._entropies(sub)
        if self.want_x and self.idx_x is None:
            vn["X"] = 0.0
            r2["X"] = 0.0
        for region in ("Q", "X", "P", "QP"):
            if region in vn:
                if self.need_vn:
                    out[f"S_{region}"] = vn[region]
                if self.need_q2:
                    out[f"S2_{region}"] = r2[region]
        if self.want_union:
            if self.need_vn:
                out["I"] = vn["Q"] + vn["P"] - vn["QP"]
            if self.need_q2:
                out["I2"] = r2["Q"] + r2["P"] - r2["QP"]
        return {m: out[m] for m in self.measures}


# the Hamiltonian pair ignores times/t0/d, so sweeps over those axes reuse
# one prepared state; keep the cache tiny, entries hold O((2N)^2) floats
_PREPARE_CACHE: dict = {}
_PREPARE_CACHE_SIZE = 3


def _physics_key(config: SetupConfig) -> tuple:
    return (config.n_total, config.l, config.mu_i, config.tau_i, config.delta_i,
            config.mu_f, config.tau_f, config.delta_f, config.mu_p, config.tau_p,
            config.tau_t, config.tau_gg, config.temperature)


def _prepare(config: SetupConfig):
    key = _physics_key(config)
    bound = _PREPARE_CACHE.get(key)
    if bound is None:
        h_i = build_hamiltonian(config, "initial")
        h_f = build_hamiltonian(config, "final")
        if config.temperature > 0:
            m0 = thermal_state(h_i, config.temperature)
        else:
            m0 = ground_state(h_i)
        bound = make_propagator(h_f).bind(m0)
        while len(_PREPARE_CACHE) >= _PREPARE_CACHE_SIZE:
            _PREPARE_CACHE.pop(next(iter(_PREPARE_CACHE)))
        _PREPARE_CACHE[key] = bound
    return bound


def run_time_series(config: SetupConfig, measures=DEFAULT_MEASURES) -> TimeSeriesRecord:
    """Run the full quench pipeline on the config's time grid.

    Baselines S_*(0) and I(t0) are evaluated exactly (not interpolated from
    the grid).  Derived scalars: plateau means of Delta S_P and Delta I over
    the default window, and the onset time of I (or S_P when I is not
    requested).
    """
    if not config.times:
        raise ValidationError("config.times is empty")
    bound = _prepare(config)
    evaluator = _MeasureEvaluator(config, bound, measures)

    rows = [evaluator(t) for t in config.times]
    values = {m: np.array([r[m] for r in rows]) for m in measures}
    series = EntanglementSeries(times=np.asarray(config.times), values=values)

    at0 = evaluator(0.0)
    att0 = evaluator(config.t0) if config.t0 > 0 else at0
    baselines = {f"{m}(0)": at0[m] for m in measures}
    baselines.update({f"{m}(t0)": att0[m] for m in measures})

    derived = {}
    times = series.times
    if "S_P" in values:
        dsp = values["S_P"] - at0["S_P"]
        p = extract_plateau(times, dsp)
        derived["dS_P_plateau"] = p.value
        derived["dS_P_plateau_spread"] = p.spread
        derived["plateau_window"] = p.window
    if "I" in values:
        di = values["I"] - att0["I"]
        p = extract_plateau(times, di)
        derived["dI_plateau"] = p.value
        derived["dI_plateau_spread"] = p.spread
        derived["plateau_window"] = p.window
    onset_key = "I" if "I" in values else ("S_P" if "S_P" in values else None)
    if onset_key and len(times) >= 15:
        derived["onset_time"] = detect_onset(times, values[onset_key])
        derived["onset_measure"] = onset_key
    return TimeSeriesRecord(config=config, series=series,
                            baselines=baselines, derived=derived)


def extract_plateau(times, values, window=None) -> PlateauResult:
    """Mean and max-deviation of `values` over a time window.

    `window` is (t_a, t_b); the default is the last 20% of the series.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if window is None:
        t_a = times[-1] - 0.2 * (times[-1] - times[0])
        window = (t_a, times[-1])
    t_a, t_b = window
    mask = (times >= t_a) & (times <= t_b)
    if not mask.any():
        raise ValidationError(f"empty plateau window {window}")
    sel = values[mask]
    mean = float(sel.mean())
    return PlateauResult(value=mean, spread=float(np.abs(sel - mean).max()),
                         window=(float(t_a), float(t_b)))


def smooth(values, window_length: int, poly_order: int = 3) -> np.ndarray:
    """Savitzky-Golay smoothing; polynomials up to poly_order are exact."""
    values = np.asarray(values, dtype=float)
    if window_length % 2 == 0 or window_length < poly_order + 2:
        raise ValidationError(
            f"smoothing window must be odd and >= poly_order + 2, got {window_length}"
        )
    if values.size < window_length:
        raise ValidationError("series shorter than smoothing window")
    return savgol_filter(values, window_length, poly_order, mode="interp")


def detect_onset(times, values, slope_threshold: float = 5e-4,
                 smooth_window: int | None = None, poly_order: int = 3,
                 t_min: float = 0.0):
    """First time the (optionally smoothed) slope exceeds the threshold.

    Returns None when the threshold is never exceeded (a distinguished
    no-onset result, not an error).  The threshold is in nats per unit time.
    `t_min` restricts the search: right after the quench the mutual
    information goes through damped switch-on oscillations whose slope can
    exceed the threshold; the physical onset search starts after they have
    decayed.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    keep = times >= t_min
    times, values = times[keep], values[keep]
    if smooth_window is not None:
        values = smooth(values, smooth_window, poly_order)
    slope = np.gradient(values, times)
    above = np.nonzero(slope > slope_threshold)[0]
    if above.size == 0:
        return None
    return float(times[above[0]])


def _fit_window_mask(x, window):
    x = np.asarray(x, dtype=float)
    if window is None:
        return x, np.ones_like(x, dtype=bool), (float(x.min()), float(x.max()))
    a, b = window
    mask = (x >= a) & (x <= b)
    if mask.sum() < 2:
        raise ValidationError(f"fit window {window} selects fewer than 2 points")
    return x, mask, (float(a), float(b))


def fit_power_law(x, y, window=None) -> FitResult:
    """Least squares of log y vs log x: y = amplitude * x**exponent."""
    x, mask, window = _fit_window_mask(x, window)
    y = np.asarray(y, dtype=float)
    xs, ys = x[mask], y[mask]
    if (xs <= 0).any() or (ys <= 0).any():
        raise ValidationError("power-law fit needs positive data in the window")
    coef, res = np.polyfit(np.log(xs), np.log(ys), 1, full=True)[:2]
    residual = float(np.sqrt(res[0])) if len(res) else 0.0
    return FitResult(model="power", amplitude=float(np.exp(coef[1])),
                     exponent=float(coef[0]), offset=0.0,
                     window=window, residual=residual)


def fit_log_law(x, y, window=None) -> FitResult:
    """Least squares of y vs log x: y = exponent * log(x) + offset."""
    x, mask, window = _fit_window_mask(x, window)
    y = np.asarray(y, dtype=float)
    xs, ys = x[mask], y[mask]
    if (xs <= 0).any():
        raise ValidationError("log-law fit needs positive x in the window")
    coef, res = np.polyfit(np.log(xs), ys, 1, full=True)[:2]
    residual = float(np.sqrt(res[0])) if len(res) else 0.0
    return FitResult(model="log", amplitude=0.0, exponent=float(coef[0]),
                     offset=float(coef[1]), window=window, residual=residual)


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepGrid:
    """Cartesian grid over SetupConfig fields (plus the pseudo-axis "t").

    `measures` are evaluated per point at time t_sf (or at the grid's own
    "t" value when "t" is an axis).  dI/dI2 subtract I(t0); dS_P/dS2_P
    subtract the value at t = 0.
    """

    base: SetupConfig
    axes: tuple          # ((name, (values...)), ...)
    measures: tuple = ("dI",)
    t_sf: float = None

    def __post_init__(self):
        if not self.axes:
            raise ValidationError("sweep needs at least one axis")
        for name, vals in self.axes:
            if len(vals) == 0:
                raise ValidationError(f"sweep axis {name} is empty")
        unknown = set(self.measures) - set(SWEEP_MEASURES)
        if unknown:
            raise ValidationError(f"unknown sweep measures: {sorted(unknown)}")
        n_points = int(np.prod([len(v) for _, v in self.axes]))
        if n_points > MAX_SWEEP_POINTS:
            raise ValidationError(
                f"sweep budget exceeded: {n_points} > {MAX_SWEEP_POINTS} points"
            )
        if self.base.n_total > MAX_SWEEP_N:
            raise ValidationError(
                f"per-point cap exceeded: n_total {self.base.n_total} > {MAX_SWEEP_N}"
            )

    def point_count(self) -> int:
        return int(np.prod([len(v) for _, v in self.axes]))


@dataclass(frozen=True)
class SweepTable:
    axis_names: tuple
    rows: tuple          # ((axis values..., measure values... or None), ...)
    measures: tuple
    errors: tuple        # error message per row, "" if ok


def _sweep_point(base: SetupConfig, axis_names, axis_values, measures, t_sf):
    overrides = {}
    t_eval = t_sf
    for name, value in zip(axis_names, axis_values):
        if name == "t":
            t_eval = float(value)
        elif name in ("l", "d", "n_total"):
            overrides[name] = int(value)
        else:
            overrides[name] = float(value)
    config = replace(base, times=(), t0=base.t0, **overrides)

    needed = set()
    for m in measures:
        if m != "splitting":
            needed.add(m.lstrip("d"))
    series_measures = []
    if "I" in needed:
        series_measures += ["S_Q", "S_P", "S_QP", "I"]
    elif "S_P" in needed:
        series_measures += ["S_P"]
    if "I2" in needed:
        series_measures += ["S2_Q", "S2_P", "S2_QP", "I2"]
    elif "S2_P" in needed:
        series_measures += ["S2_P"]

    bound = evaluator = at_t = None
    if series_measures:
        bound = _prepare(config)
        evaluator = _MeasureEvaluator(config, bound, tuple(series_measures))
        at_t = evaluator(t_eval)
    at0 = evaluator(0.0) if any(m.startswith("dS") for m in measures) else None
    att0 = evaluator(config.t0) if any(m in ("dI", "dI2") for m in measures) else None

    out = []
    for m in measures:
        if m == "I":
            out.append(at_t["I"])
        elif m == "dI":
            out.append(at_t["I"] - att0["I"])
        elif m == "S_P":
            out.append(at_t["S_P"])
        elif m == "dS_P":
            out.append(at_t["S_P"] - at0["S_P"])
        elif m == "I2":
            out.append(at_t["I2"])
        elif m == "dI2":
            out.append(at_t["I2"] - att0["I2"])
        elif m == "S2_P":
            out.append(at_t["S2_P"])
        elif m == "dS2_P":
            out.append(at_t["S2_P"] - at0["S2_P"])
        elif m == "splitting":
            out.append(mzm_splitting(config))
    return tuple(out)


def _sweep_worker(args):
    base, axis_names, axis_values, measures, t_sf = args
    try:
        return _sweep_point(base, axis_names, axis_values, measures, t_sf), ""
    except Exception as exc:  # error rows keep the sweep going
        return None, f"{type(exc).__name__}: {exc}"


def default_workers() -> int:
    env = os.environ.get("QUENCHPROBE_WORKERS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def run_sweep(grid: SweepGrid, workers: int | None = None) -> SweepTable:
    """Evaluate the grid; rows come out in lexicographic axis order.

    Points are independent; with workers > 1 they run in a process pool,
    and the merged table is identical to a serial run.
    """
    if workers is None:
        workers = default_workers()
    axis_names = tuple(name for name, _ in grid.axes)
    value_lists = [tuple(v) for _, v in grid.axes]
    t_sf = grid.t_sf if grid.t_sf is not None else (
        max(grid.base.times) if grid.base.times else None)
    if t_sf is None:
        raise ValidationError("sweep needs t_sf (or a base config with times)")

    points = []
    index = [0] * len(value_lists)
    while True:
        points.append(tuple(value_lists[k][index[k]] for k in range(len(index))))
        for k in reversed(range(len(index))):
            index[k] += 1
            if index[k] < len(value_lists[k]):
                break
            index[k] = 0
        else:
            break

    tasks = [(grid.base, axis_names, pt, grid.measures, t_sf) for pt in points]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_worker, tasks))
    else:
        results = [_sweep_worker(t) for t in tasks]

    rows = []
    errors = []
    for pt, (vals, err) in zip(points, results):
        rows.append(pt + (vals if vals is not None else (None,) * len(grid.measures)))
        errors.append(err)
    return SweepTable(axis_names=axis_names, rows=tuple(rows),
                      measures=grid.measures, errors=tuple(errors))
