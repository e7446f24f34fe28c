import numpy as np
import pytest

from quenchprobe import ValidationError, preset
from quenchprobe.presets import PRESET_NAMES


def test_all_presets_materialize_both_variants():
    for name in PRESET_NAMES:
        for desk in (True, False):
            plan = preset(name, desk=desk)
            assert plan.series_runs or plan.sweeps


def test_unknown_preset():
    with pytest.raises(ValidationError, match="unknown preset"):
        preset("fig99")


def test_fig1_note_parameters_verbatim():
    plan = preset("fig1")
    mzm = {r.label: r for r in plan.series_runs}["mzm"]
    cfg = mzm.config
    assert (cfg.n_total, cfg.l, cfg.d) == (500, 4, 100)
    assert cfg.mu_f == 0.0 and cfg.tau_f == cfg.delta_f == 11.76
    assert cfg.tau_i == cfg.delta_i == 1.0
    assert cfg.tau_t == 1.0 and cfg.t0 == 10.0
    assert cfg.mu_p == 0.0
    bulk = {r.label: r for r in plan.series_runs}["bulk"]
    assert bulk.config.mu_p == 11.76  # coupled to the bulk flat band


def test_fig2_note_parameters():
    plan = preset("fig2", desk=False)
    grid = plan.sweeps[0]
    assert grid.base.n_total == 700 and grid.base.l == 35 and grid.base.d == 100
    assert grid.t_sf == 1100.0
    assert grid.base.mu_i == 20.0 and grid.base.tau_f == 20.0


def test_fig2_desk_contains_acceptance_samples():
    grid = preset("fig2", desk=True).sweeps[0]
    mu_vals = dict(grid.axes)["mu_f"]
    delta_vals = dict(grid.axes)["delta_f"]
    for mu_f, delta_f in ((0.0, 20.0), (5.0, 15.0), (10.0, 20.0)):
        assert mu_f in mu_vals and delta_f in delta_vals


def test_fig3_variants():
    full = preset("fig3", desk=False).sweeps[0]
    assert full.base.n_total == 2000 and full.t_sf == 3000.0
    assert full.base.t0 == 80.0
    desk = preset("fig3", desk=True).sweeps[0]
    assert desk.base.n_total == 800 and desk.t_sf == 1200.0
    assert desk.base.l == full.base.l and desk.base.d == full.base.d


def test_fig4_note_parameters():
    grid = preset("fig4").sweeps[0]
    assert grid.base.n_total == 350 and grid.base.l == 100
    assert grid.base.tau_f == 11.76
    assert dict(grid.axes)["t"][-1] == 250.0
    assert len(grid.axes[0][1]) == 20 and len(grid.axes[1][1]) == 20


def test_sm_renyi_parameters():
    plan = preset("smE-renyi")
    labels = {r.label: r.config.mu_p for r in plan.series_runs}
    assert labels == {"mzm": 0.0, "bulk": 20.0}
    cfg = plan.series_runs[0].config
    assert (cfg.n_total, cfg.l, cfg.d) == (500, 4, 100)
    assert any(m.startswith("S2") for m in plan.series_runs[0].measures)


def test_time_grids_are_reflection_safe():
    # horizon must stay below the time at which quasiparticles reflected at
    # the right end can exit the probe again: d + 2 (N - l - d)
    for name in PRESET_NAMES:
        for run in preset(name).series_runs:
            cfg = run.config
            if not cfg.times:
                continue
            exit_time = cfg.d + 2 * (cfg.n_total - cfg.l - cfg.d)
            assert max(cfg.times) <= exit_time, (name, run.label)


def test_smd_interplay_is_topological_with_tiny_splitting():
    from quenchprobe import mzm_splitting

    cfg = preset("smD-interplay").series_runs[0].config
    assert abs(cfg.mu_f) < cfg.tau_f
    assert mzm_splitting(cfg) < 1e-6
