import numpy as np
import pytest

from quenchprobe import (
    CovarianceMatrix,
    DegenerateGroundStateError,
    Region,
    SetupConfig,
    ValidationError,
    build_hamiltonian,
    canonical_form,
    evolve,
    ground_state,
    make_propagator,
    reduce,
    thermal_state,
)
from quenchprobe.covariance import _state_from_occupations
from quenchprobe.model import QuadraticHamiltonian, _kitaev_block


def toy_chain_hamiltonian():
    """H = -(c1^dag c2 + h.c.) + c3^dag c3; ground state (|100> + |010>)/sqrt(2)."""
    h = QuadraticHamiltonian(3)
    h.add_hopping(0, -2.0)
    h.add_onsite(2, 1.0)
    return h


def random_gapped(seed, n=5):
    rng = np.random.default_rng(seed)
    cfg = SetupConfig(n_total=n, l=2, d=1,
                      mu_i=float(rng.uniform(2, 4)), tau_i=1.0, delta_i=0.8,
                      mu_f=0.0, tau_f=2.0, delta_f=2.0,
                      mu_p=float(rng.uniform(-0.5, 0.5)), tau_t=0.7,
                      times=(1.0,))
    return build_hamiltonian(cfg, "initial")


class TestCanonicalForm:
    @pytest.mark.parametrize("seed,n", [(0, 10), (1, 31), (2, 64)])
    def test_reconstruction(self, seed, n):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal((2 * n, 2 * n))
        a = x - x.T
        r, eps = canonical_form(a)
        b = np.zeros_like(a)
        b[0::2, 1::2] = np.diag(-np.zeros(n))
        for m, e in enumerate(eps):
            b[2 * m, 2 * m + 1] = e
            b[2 * m + 1, 2 * m] = -e
        assert np.abs(r @ r.T - np.eye(2 * n)).max() < 1e-12
        assert np.abs(r @ b @ r.T - a).max() < 1e-10 * max(1, np.abs(a).max())
        assert (eps >= 0).all()

    def test_degenerate_flat_band(self):
        r, eps = canonical_form(_kitaev_block(0.0, 1.0, 1.0, 6).a_matrix)
        assert np.abs(r @ r.T - np.eye(12)).max() < 1e-12
        assert sorted(np.round(eps, 12)) == [0.0] + [1.0] * 5


class TestGroundState:
    def test_single_site_empty_orbital(self):
        h = QuadraticHamiltonian(1)
        h.add_onsite(0, 2.0)
        m = ground_state(h)
        # <i gamma_1 gamma_2> = 1 - 2 <c^dag c> = +1 for the empty site
        assert abs(m.m_matrix[0, 1] - 1.0) < 1e-12

    def test_toy_chain_site_entropies(self):
        from quenchprobe import von_neumann

        m = ground_state(toy_chain_hamiltonian())
        s1 = von_neumann(reduce(m, Region((1,), 3)))
        s2 = von_neumann(reduce(m, Region((2,), 3)))
        s3 = von_neumann(reduce(m, Region((3,), 3)))
        assert abs(s1 - np.log(2)) < 1e-12
        assert abs(s2 - np.log(2)) < 1e-12
        assert s3 < 1e-12

    @pytest.mark.parametrize("seed", range(4))
    def test_purity(self, seed):
        m = ground_state(random_gapped(seed))
        assert m.purity_defect() < 1e-8

    def test_degenerate_raises(self):
        with pytest.raises(DegenerateGroundStateError, match="degenerate"):
            ground_state(_kitaev_block(0.0, 1.0, 1.0, 4))


class TestThermalState:
    def test_infinite_temperature_is_maximally_mixed(self):
        m = thermal_state(random_gapped(1), 1e9)
        assert np.abs(m.m_matrix).max() < 1e-8

    def test_zero_temperature_matches_ground_state(self):
        h = random_gapped(2)
        m0 = ground_state(h)
        mt = thermal_state(h, 0.0)
        assert np.abs(m0.m_matrix - mt.m_matrix).max() < 1e-12

    def test_single_mode_tanh(self):
        h = QuadraticHamiltonian(1)
        h.add_onsite(0, 1.0)
        m = thermal_state(h, 0.5)
        assert abs(m.m_matrix[0, 1] - np.tanh(1.0)) < 1e-12

    def test_zero_modes_maximally_mixed_at_finite_t(self):
        m = thermal_state(_kitaev_block(0.0, 1.0, 1.0, 4), 0.3)
        sv = np.linalg.svd(m.m_matrix, compute_uv=False)
        assert sv.min() < 1e-12  # the end-Majorana pair stays at nu = 0

    def test_negative_temperature(self):
        with pytest.raises(ValidationError):
            thermal_state(random_gapped(0), -0.1)


class TestEvolution:
    def setup_method(self):
        cfg = SetupConfig(n_total=6, l=2, d=1, mu_i=4.0, tau_i=1.0, delta_i=1.0,
                          mu_f=0.0, tau_f=2.0, delta_f=2.0, mu_p=0.3,
                          tau_t=0.8, times=(1.0,))
        self.h_f = build_hamiltonian(cfg, "final")
        self.m0 = ground_state(build_hamiltonian(cfg, "initial"))
        self.prop = make_propagator(self.h_f)

    def test_identity_at_t0(self):
        m = evolve(self.m0, self.prop, 0.0)
        assert np.abs(m.m_matrix - self.m0.m_matrix).max() < 1e-12

    def test_purity_preserved(self):
        for t in (0.7, 3.1, 19.0):
            assert evolve(self.m0, self.prop, t).purity_defect() < 1e-8

    def test_spectrum_preserved(self):
        sv0 = np.sort(np.linalg.svd(self.m0.m_matrix, compute_uv=False))
        for t in (0.4, 6.0):
            sv = np.sort(np.linalg.svd(evolve(self.m0, self.prop, t).m_matrix,
                                       compute_uv=False))
            assert np.abs(sv - sv0).max() < 1e-9

    def test_energy_conserved(self):
        a_f = self.h_f.a_matrix

        def energy(m):
            return -0.25 * np.trace(a_f @ m.m_matrix)

        e0 = energy(evolve(self.m0, self.prop, 0.0))
        for t in (0.9, 4.2, 11.0):
            e = energy(evolve(self.m0, self.prop, t))
            assert abs(e - e0) < 1e-8 * max(1.0, abs(e0))

    def test_group_property(self):
        t1, t2 = 0.8, 2.3
        o1 = self.prop.rotation(t1)
        o2 = self.prop.rotation(t2)
        o12 = self.prop.rotation(t1 + t2)
        assert np.abs(o12 - o2 @ o1).max() < 1e-9

    def test_rotation_orthogonal(self):
        for t in (0.0, 1.7, 40.0):
            o = self.prop.rotation(t)
            assert np.abs(o @ o.T - np.eye(o.shape[0])).max() < 1e-10

    def test_bound_submatrix_matches_full(self):
        bound = self.prop.bind(self.m0)
        idx = np.array([0, 1, 6, 7, 8, 9])
        for t in (0.5, 2.2):
            full = evolve(self.m0, self.prop, t).m_matrix[np.ix_(idx, idx)]
            sub = bound.submatrix(t, idx)
            assert np.abs(full - sub).max() < 1e-12


class TestReduce:
    def test_full_region_identity(self):
        m = ground_state(toy_chain_hamiltonian())
        r = reduce(m, Region((1, 2, 3), 3))
        assert np.abs(r.m_matrix - m.m_matrix).max() < 1e-15

    def test_product_state_reduction_stays_pure(self):
        h = QuadraticHamiltonian(4)
        for s in range(4):
            h.add_onsite(s, 1.0 + 0.3 * s)
        m = ground_state(h)
        assert reduce(m, Region((2, 3), 4)).purity_defect() < 1e-10

    def test_toy_chain_site1_maximally_mixed(self):
        m = ground_state(toy_chain_hamiltonian())
        sub = reduce(m, Region((1,), 3))
        assert np.abs(sub.m_matrix).max() < 1e-12  # nu = 0

    def test_out_of_bounds(self):
        m = ground_state(toy_chain_hamiltonian())
        with pytest.raises(ValidationError):
            reduce(m, Region((1, 4), 4))


def test_state_from_occupations_layout():
    r = np.eye(4)
    m = _state_from_occupations(r, np.array([0.25, 1.0]))
    assert m.m_matrix[0, 1] == -0.25
    assert m.m_matrix[2, 3] == -1.0
