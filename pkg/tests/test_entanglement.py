import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quenchprobe import (
    CovarianceMatrix,
    NumericalConsistencyError,
    Region,
    ValidationError,
    ground_state,
    mode_spectrum,
    mutual_information,
    reduce,
    renyi,
    to_log2,
    von_neumann,
)
from quenchprobe.entanglement import LN2
from quenchprobe.model import QuadraticHamiltonian


def state_with_nus(nus):
    """Block-diagonal covariance with prescribed mode eigenvalues."""
    n = len(nus)
    m = np.zeros((2 * n, 2 * n))
    for k, nu in enumerate(nus):
        m[2 * k, 2 * k + 1] = nu
        m[2 * k + 1, 2 * k] = -nu
    return CovarianceMatrix(m)


def binary_entropy(nu):
    p, q = (1 + nu) / 2, (1 - nu) / 2
    out = 0.0
    for w in (p, q):
        if w > 0:
            out -= w * np.log(w)
    return out


class TestModeSpectrum:
    def test_pure_single_mode(self):
        assert np.allclose(mode_spectrum(state_with_nus([1.0])).nus, [1.0])

    def test_mixed_single_mode(self):
        assert np.allclose(mode_spectrum(state_with_nus([0.0])).nus, [0.0])

    def test_count_equals_sites(self):
        nus = mode_spectrum(state_with_nus([0.2, 0.7, 1.0])).nus
        assert len(nus) == 3
        assert np.allclose(np.sort(nus), [0.2, 0.7, 1.0])

    def test_overlarge_singular_value_raises(self):
        m = CovarianceMatrix(np.array([[0.0, 1.1], [-1.1, 0.0]]))
        with pytest.raises(NumericalConsistencyError):
            mode_spectrum(m)

    def test_slightly_over_one_is_clipped(self):
        nu = 1.0 + 5e-10
        m = CovarianceMatrix(np.array([[0.0, nu], [-nu, 0.0]]))
        assert np.allclose(mode_spectrum(m).nus, [1.0])


class TestVonNeumann:
    def test_maximally_mixed_mode(self):
        assert abs(von_neumann(state_with_nus([0.0])) - np.log(2)) < 1e-14

    def test_pure_mode(self):
        assert von_neumann(state_with_nus([1.0])) == 0.0

    def test_half_nu(self):
        # closed form: -(3/4)ln(3/4) - (1/4)ln(1/4) = 0.562335 nats
        assert abs(von_neumann(state_with_nus([0.5])) - 0.5623351446188083) < 1e-12

    def test_additive_over_modes(self):
        nus = [0.1, 0.6, 0.95]
        expected = sum(binary_entropy(v) for v in nus)
        assert abs(von_neumann(state_with_nus(nus)) - expected) < 1e-12


class TestRenyi:
    def test_q2_maximally_mixed(self):
        assert abs(renyi(state_with_nus([0.0]), 2) - np.log(2)) < 1e-14

    def test_q2_pure(self):
        assert abs(renyi(state_with_nus([1.0]), 2)) < 1e-14

    @pytest.mark.parametrize("q", [0.0, -1.0, 1.0])
    def test_invalid_order(self, q):
        with pytest.raises(ValidationError):
            renyi(state_with_nus([0.5]), q)

    @given(st.lists(st.floats(0.01, 0.99), min_size=1, max_size=5))
    @settings(max_examples=30, deadline=None)
    def test_q_to_one_limit_is_von_neumann(self, nus):
        m = state_with_nus(nus)
        s = von_neumann(m)
        assert abs(renyi(m, 1 + 1e-6) - s) < 1e-4
        assert abs(renyi(m, 1 - 1e-6) - s) < 1e-4

    @given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=6))
    @settings(max_examples=30, deadline=None)
    def test_renyi2_below_von_neumann(self, nus):
        m = state_with_nus(nus)
        assert renyi(m, 2) <= von_neumann(m) + 1e-12


class TestMutualInformation:
    def toy_state(self):
        h = QuadraticHamiltonian(3)
        h.add_hopping(0, -2.0)
        h.add_onsite(2, 1.0)
        return ground_state(h)

    def test_product_state_zero(self):
        h = QuadraticHamiltonian(4)
        for s in range(4):
            h.add_onsite(s, 2.0)
        m = ground_state(h)
        i = mutual_information(m, Region((1, 2), 4), Region((3,), 4))
        assert abs(i) < 1e-10

    def test_shared_fermion_gives_two_log_two(self):
        m = self.toy_state()
        i = mutual_information(m, Region((1,), 3), Region((2,), 3))
        assert abs(i - 2 * np.log(2)) < 1e-12

    def test_overlap_rejected(self):
        m = self.toy_state()
        with pytest.raises(ValidationError, match="disjoint"):
            mutual_information(m, Region((1, 2), 3), Region((2, 3), 3))

    def test_order_insensitive(self):
        m = self.toy_state()
        a, b = Region((1,), 3), Region((2, 3), 3)
        assert abs(mutual_information(m, a, b) - mutual_information(m, b, a)) < 1e-12

    def test_renyi_mi(self):
        m = self.toy_state()
        i2 = mutual_information(m, Region((1,), 3), Region((2,), 3), q=2)
        assert i2 > 0


class TestGlobalProperties:
    def gapped_state(self, seed=0, n=6):
        rng = np.random.default_rng(seed)
        h = QuadraticHamiltonian(n)
        for s in range(n):
            h.add_onsite(s, float(rng.uniform(1.0, 2.0)))
        for s in range(n - 1):
            h.add_hopping(s, float(rng.uniform(-0.5, 0.5)))
            h.add_pairing(s, float(rng.uniform(-0.5, 0.5)))
        return ground_state(h)

    @pytest.mark.parametrize("seed", range(3))
    def test_pure_state_complement_symmetry(self, seed):
        m = self.gapped_state(seed)
        r = Region((1, 2), 6)
        rbar = Region((3, 4, 5, 6), 6)
        assert abs(von_neumann(reduce(m, r)) - von_neumann(reduce(m, rbar))) < 1e-8

    def test_additivity_on_uncoupled_chains(self):
        # two decoupled halves: entropy of a split region is the sum
        h = QuadraticHamiltonian(6)
        for s in range(6):
            h.add_onsite(s, 1.5)
        h.add_hopping(0, 0.8)
        h.add_pairing(0, 0.5)
        h.add_hopping(3, 0.8)
        h.add_pairing(3, 0.5)  # no bond between sites 3 and 4 (1-based 3-4)
        m = ground_state(h)
        s_union = von_neumann(reduce(m, Region((1, 4), 6)))
        s_a = von_neumann(reduce(m, Region((1,), 6)))
        s_b = von_neumann(reduce(m, Region((4,), 6)))
        assert abs(s_union - s_a - s_b) < 1e-10

    @pytest.mark.parametrize("seed", range(3))
    def test_non_negative(self, seed):
        m = self.gapped_state(seed)
        for a in range(1, 7):
            for b in range(a, 7):
                s = von_neumann(reduce(m, Region(tuple(range(a, b + 1)), 6)))
                assert s >= -1e-10

    def test_log2_units_exact(self):
        values = np.array([0.0, np.log(2), 1.234567])
        assert np.array_equal(to_log2(values), values / LN2)
        assert to_log2(float(np.log(2))) == np.log(2) / LN2
