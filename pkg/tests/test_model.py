import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quenchprobe import (
    Region,
    SetupConfig,
    ValidationError,
    build_hamiltonian,
    mzm_splitting,
    single_particle_spectrum,
)
from quenchprobe.model import QuadraticHamiltonian, _kitaev_block


def make_config(**kw):
    base = dict(n_total=12, l=3, d=2, mu_i=4.0, tau_i=1.0, delta_i=1.0,
                mu_f=0.0, tau_f=2.0, delta_f=2.0, mu_p=0.0, tau_t=1.0,
                times=(0.0, 1.0, 2.0))
    base.update(kw)
    return SetupConfig(**base)


class TestConfigValidation:
    def test_valid_config(self):
        make_config()

    @pytest.mark.parametrize("kw,fragment", [
        (dict(l=0), "l"),
        (dict(d=-1), "d"),
        (dict(l=6, d=6), "P is empty"),
        (dict(tau_p=0.0), "tau_p"),
        (dict(tau_gg=-0.1), "tau_gg"),
        (dict(temperature=-1.0), "temperature"),
        (dict(times=(0.0, 1.0, 1.0)), "increasing"),
        (dict(times=(-1.0, 1.0)), ">= 0"),
        (dict(t0=5.0), "t0"),
    ])
    def test_invalid_configs_name_the_invariant(self, kw, fragment):
        with pytest.raises(ValidationError, match=fragment):
            make_config(**kw)

    def test_regions_partition_chain(self):
        cfg = make_config()
        q, x, p = cfg.region_q(), cfg.region_x(), cfg.region_p()
        assert q.sites == (1, 2, 3)
        assert x.sites == (4, 5)
        assert p.sites == tuple(range(6, 13))
        assert sorted(q.sites + x.sites + p.sites) == list(range(1, 13))

    def test_region_bounds(self):
        with pytest.raises(ValidationError):
            Region((0,), 4)
        with pytest.raises(ValidationError):
            Region((5,), 4)
        with pytest.raises(ValidationError):
            Region((1, 1), 4)


class TestHamiltonianStructure:
    def test_antisymmetry_exact(self):
        cfg = make_config(mu_i=1.3, tau_i=0.7, delta_i=0.4, mu_p=0.2, tau_gg=0.05)
        a = build_hamiltonian(cfg, "initial").a_matrix
        assert np.array_equal(a, -a.T)

    @given(mu=st.floats(-3, 3), tau=st.floats(-2, 2), delta=st.floats(-2, 2),
           mu_p=st.floats(-1.5, 1.5))
    @settings(max_examples=25, deadline=None)
    def test_spectral_pairing(self, mu, tau, delta, mu_p):
        cfg = make_config(n_total=8, l=3, d=2, mu_f=mu, tau_f=tau, delta_f=delta,
                          mu_p=mu_p)
        lam = np.linalg.eigvalsh(1j * build_hamiltonian(cfg, "final").a_matrix)
        assert np.abs(lam + lam[::-1]).max() < 1e-10

    def test_phase_selects_q_parameters(self):
        cfg = make_config(mu_i=4.0, mu_f=0.0)
        a_i = build_hamiltonian(cfg, "initial").a_matrix
        a_f = build_hamiltonian(cfg, "final").a_matrix
        assert not np.array_equal(a_i, a_f)
        # probe part identical in both phases
        sl = slice(2 * 3, None)
        assert np.array_equal(a_i[sl, sl], a_f[sl, sl])

    def test_invalid_phase(self):
        with pytest.raises(ValidationError, match="phase"):
            build_hamiltonian(make_config(), "both")


class TestSpectrum:
    def test_zero_matrix(self):
        h = QuadraticHamiltonian.from_a_matrix(np.zeros((8, 8)))
        assert np.array_equal(single_particle_spectrum(h).energies, np.zeros(4))

    def test_tss_block_zero_mode_and_flat_band(self):
        h = _kitaev_block(0.0, 1.0, 1.0, 4)
        e = single_particle_spectrum(h).energies
        assert abs(e[0]) < 1e-10
        assert np.abs(e[1:] - 1.0).max() < 1e-10

    def test_single_site_energy_is_mu(self):
        h = QuadraticHamiltonian(1)
        h.add_onsite(0, 2.0)
        e = single_particle_spectrum(h).energies
        assert np.allclose(e, [2.0])

    def test_probe_dispersion_open_chain(self):
        # 40-site decoupled probe: energies must equal |mu_p + tau_p cos k_m|
        # over the open-chain momenta k_m = pi m / 41
        n, mu_p = 40, 0.3
        h = QuadraticHamiltonian(n)
        for s in range(n):
            h.add_onsite(s, mu_p)
        for s in range(n - 1):
            h.add_hopping(s, 1.0)
        e = np.sort(single_particle_spectrum(h).energies)
        k = np.pi * np.arange(1, n + 1) / (n + 1)
        expected = np.sort(np.abs(mu_p + np.cos(k)))
        assert np.abs(e - expected).max() < 1e-10

    def test_trivial_phase_is_gapped(self):
        h = _kitaev_block(30.0, 20.0, 20.0, 8)
        e = single_particle_spectrum(h).energies
        assert e[0] > 5.0

    def test_reconstruction_accuracy(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal((20, 20))
        h = QuadraticHamiltonian.from_a_matrix(x - x.T)
        spec = single_particle_spectrum(h)
        assert len(spec.energies) == 10
        assert (spec.energies >= 0).all()


class TestMzmSplitting:
    def test_tss_exact_zero(self):
        cfg = make_config(mu_f=0.0, tau_f=2.0, delta_f=2.0)
        assert mzm_splitting(cfg) < 1e-12

    def test_splitting_mu15(self):
        # quoted alongside the TSS-deviation figure: ~1e-3 tau_p
        cfg = make_config(n_total=40, l=34, d=2, mu_f=15.0, tau_f=20.0, delta_f=20.0)
        assert 8e-4 < mzm_splitting(cfg) < 1.3e-3

    def test_splitting_mu165(self):
        # ~0.018 tau_p at mu_f = 16.5
        cfg = make_config(n_total=40, l=34, d=2, mu_f=16.5, tau_f=20.0, delta_f=20.0)
        assert 0.014 < mzm_splitting(cfg) < 0.023

    def test_requires_topological_phase(self):
        cfg = make_config(mu_f=30.0, tau_f=20.0, delta_f=20.0)
        with pytest.raises(ValidationError, match="topological"):
            mzm_splitting(cfg)
