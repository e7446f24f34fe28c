"""Randomized cross-validation of the Gaussian formalism against the dense oracle.

Draws small gapped configurations, then compares ground-state and
time-evolved entanglement between the covariance-matrix pipeline and the
2^N Fock-space oracle: entropies of every contiguous region, the mutual
information I(Q, P), ground-state energies, thermal entropies, and the
exact toy-state values.  The random generator is numpy's PCG64; the seed
fully determines the configurations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covariance import ground_state, make_propagator, reduce, thermal_state
from .entanglement import mutual_information, von_neumann
from .errors import DegenerateGroundStateError
from .model import Region, SetupConfig, build_hamiltonian, single_particle_spectrum
from . import oracle

__all__ = ["EquivalenceReport", "random_gapped_config", "equivalence_suite"]

RNG_ALGORITHM = "PCG64"


@dataclass(frozen=True)
class EquivalenceReport:
    max_entropy_deviation: float
    max_mi_deviation: float
    max_energy_deviation: float
    max_thermal_deviation: float
    toy_mi_deviation: float
    n_configs: int

    @property
    def max_deviation(self) -> float:
        return max(self.max_entropy_deviation, self.max_mi_deviation,
                   self.max_thermal_deviation, self.toy_mi_deviation)


def random_gapped_config(rng: np.random.Generator, n: int) -> SetupConfig:
    """A random small config whose initial Hamiltonian is safely gapped."""
    for _ in range(200):
        l = int(rng.integers(1, max(2, n - 1)))
        d = int(rng.integers(0, max(1, n - l)))
        if l + d >= n:
            continue
        cfg = SetupConfig(
            n_total=n, l=l, d=d,
            mu_i=float(rng.uniform(1.5, 3.5)),
            tau_i=float(rng.uniform(0.3, 1.2)),
            delta_i=float(rng.uniform(0.3, 1.2)),
            mu_f=float(rng.uniform(-0.5, 0.5)),
            tau_f=float(rng.uniform(0.8, 2.5)),
            delta_f=float(rng.uniform(0.5, 2.5)),
            mu_p=float(rng.uniform(-0.6, 0.6)),
            tau_p=1.0,
            tau_t=float(rng.uniform(0.3, 1.2)),
            times=(0.5, 1.5),
        )
        spec_i = single_particle_spectrum(build_hamiltonian(cfg, "initial"))
        if spec_i.energies.min() > 0.05:
            return cfg
    raise RuntimeError("could not draw a gapped configuration")


def _contiguous_regions(n: int):
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            yield Region(tuple(range(a, b + 1)), n)


def _compare_config(cfg: SetupConfig, times) -> tuple:
    n = cfg.n_total
    h_i = build_hamiltonian(cfg, "initial")
    h_f = build_hamiltonian(cfg, "final")
    m0 = ground_state(h_i)
    prop = make_propagator(h_f)
    bound = prop.bind(m0)

    dh_i = oracle.build_dense(cfg, "initial")
    dh_f = oracle.build_dense(cfg, "final")
    psi0 = oracle.dense_ground_state(dh_i)

    # ground-state energy: dense E0 vs -(1/4) Tr(A M) + Tr(H)/2^N
    a_i = h_i.a_matrix
    e_gauss = -0.25 * np.trace(a_i @ m0.m_matrix) + np.trace(dh_i.matrix).real / 2**n
    w0 = np.linalg.eigvalsh(dh_i.matrix)[0]
    dev_energy = abs(e_gauss - w0)

    dev_entropy = 0.0
    dev_mi = 0.0
    region_q = cfg.region_q()
    region_p = cfg.region_p()
    states = [(0.0, m0, psi0)]
    for t in times:
        mt = bound.full(t)
        psit = oracle.dense_evolve(psi0, dh_f, t)
        states.append((t, mt, psit))
    for _, mt, psit in states:
        for region in _contiguous_regions(n):
            s_g = von_neumann(reduce(mt, region))
            s_d = oracle.dense_entropy(psit, region)
            dev_entropy = max(dev_entropy, abs(s_g - s_d))
        i_g = mutual_information(mt, region_q, region_p)
        i_d = oracle.dense_mutual_information(psit, region_q, region_p)
        dev_mi = max(dev_mi, abs(i_g - i_d))
    return dev_entropy, dev_mi, dev_energy


def _thermal_check(seed: int) -> float:
    rng = np.random.default_rng(seed)
    cfg = random_gapped_config(rng, 6)
    h_i = build_hamiltonian(cfg, "initial")
    dh_i = oracle.build_dense(cfg, "initial")
    dev = 0.0
    for temperature in (0.3, 1.0, 3.0):
        m_th = thermal_state(h_i, temperature)
        rho = oracle.dense_thermal_density(dh_i, temperature)
        for region in _contiguous_regions(6):
            s_g = von_neumann(reduce(m_th, region))
            s_d = oracle.dense_entropy_rho(rho, 6, region)
            dev = max(dev, abs(s_g - s_d))
        i_g = mutual_information(m_th, cfg.region_q(), cfg.region_p())
        i_d = oracle.dense_mutual_information_rho(rho, 6, cfg.region_q(), cfg.region_p())
        dev = max(dev, abs(i_g - i_d))
    return dev


def _toy_check() -> float:
    psi_f, psi_m = oracle.toy_states()
    r1 = Region((1,), 3)
    r2 = Region((2,), 3)
    i_f = oracle.dense_mutual_information(psi_f, r1, r2)
    i_m = oracle.dense_mutual_information(psi_m, r1, r2)
    return max(abs(i_f - 2 * np.log(2)), abs(i_m - np.log(2)))


def equivalence_suite(sizes=(4, 6, 8), n_configs: int = 10, seed: int = 7,
                      n_times: int = 20, t_max: float = 4.0) -> EquivalenceReport:
    """Run the full randomized equivalence suite; deterministic in `seed`."""
    rng = np.random.default_rng(seed)
    times = np.linspace(t_max / n_times, t_max, n_times)
    dev_s = dev_i = dev_e = 0.0
    for k in range(n_configs):
        n = sizes[k % len(sizes)]
        for _ in range(50):
            cfg = random_gapped_config(rng, n)
            try:
                ds, di, de = _compare_config(cfg, times)
                break
            except DegenerateGroundStateError:
                continue
        dev_s, dev_i, dev_e = max(dev_s, ds), max(dev_i, di), max(dev_e, de)
    return EquivalenceReport(
        max_entropy_deviation=dev_s,
        max_mi_deviation=dev_i,
        max_energy_deviation=dev_e,
        max_thermal_deviation=_thermal_check(seed + 1),
        toy_mi_deviation=_toy_check(),
        n_configs=n_configs,
    )
