"""Three-region chain model and its quadratic Majorana-basis Hamiltonian.

The chain has N sites split into three consecutive regions:

  Q = sites 1..l          Kitaev chain, quenched at t = 0,
  X = sites l+1..l+d      separation layer (tight-binding, static),
  P = sites l+d+1..N      probe (tight-binding, static).

Any quadratic Hamiltonian is stored as the real antisymmetric matrix A of

  H = (i/4) sum_jk A_jk gamma_j gamma_k,

with two Majorana operators per site in interleaved order,

  gamma_{2j-1} = i (c_j^dag - c_j),   gamma_{2j} = c_j + c_j^dag,

so that c_j = (i gamma_{2j-1} + gamma_{2j}) / 2.  With this normalization the
quasiparticle energies (eigenvalues of iA) of a decoupled probe chain equal
|mu_p + tau_p cos k| over the open-chain momenta k = pi m / (n + 1), which
pins the overall scale of A.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np

from .errors import ValidationError

__all__ = [
    "SetupConfig",
    "Region",
    "QuadraticHamiltonian",
    "SpectrumResult",
    "build_hamiltonian",
    "single_particle_spectrum",
    "mzm_splitting",
]


@dataclass(frozen=True)
class SetupConfig:
    """All physical and numerical parameters of one quench-probe run.

    Energies are in units of tau_p, times in units of 1/tau_p.

    Parameters
    ----------
    n_total : int
        Total number of sites N.
    l : int
        Sites in the quenched region Q.
    d : int
        Sites in the separation layer X (0 allowed).
    mu_i, tau_i, delta_i : float
        Kitaev-chain parameters of Q before the quench.
    mu_f, tau_f, delta_f : float
        Kitaev-chain parameters of Q after the quench.
    mu_p : float
        Chemical potential of the X and P regions.
    tau_p : float
        Hopping of the X and P regions; sets the energy unit (> 0).
    tau_t : float
        Tunneling amplitude on the Q-X bond (present in both phases).
    tau_gg : float
        Direct hybridization between the two end Majoranas of Q (>= 0,
        0 disables the term).
    temperature : float
        Temperature of the initial state (0 means ground state).
    t0 : float
        Baseline time for mutual-information differences.
    times : tuple of float
        Strictly increasing evaluation grid.
    """

    n_total: int
    l: int
    d: int
    mu_i: float
    tau_i: float
    delta_i: float
    mu_f: float
    tau_f: float
    delta_f: float
    mu_p: float = 0.0
    tau_p: float = 1.0
    tau_t: float = 1.0
    tau_gg: float = 0.0
    temperature: float = 0.0
    t0: float = 0.0
    times: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        if self.n_total < 2:
            raise ValidationError(f"n_total must be >= 2, got {self.n_total}")
        if self.l < 1:
            raise ValidationError(f"l must be >= 1, got {self.l}")
        if self.d < 0:
            raise ValidationError(f"d must be >= 0, got {self.d}")
        if self.l + self.d >= self.n_total:
            raise ValidationError(
                f"region P is empty: l + d = {self.l + self.d} must be < n_total = {self.n_total}"
            )
        if not self.tau_p > 0:
            raise ValidationError(f"tau_p must be > 0, got {self.tau_p}")
        if self.tau_gg < 0:
            raise ValidationError(f"tau_gg must be >= 0, got {self.tau_gg}")
        if self.temperature < 0:
            raise ValidationError(f"temperature must be >= 0, got {self.temperature}")
        if self.t0 < 0:
            raise ValidationError(f"t0 must be >= 0, got {self.t0}")
        if self.times:
            arr = np.asarray(self.times)
            if (arr < 0).any():
                raise ValidationError("all times must be >= 0")
            if not (np.diff(arr) > 0).all():
                raise ValidationError("times must be strictly increasing")
            if self.t0 >= arr.max():
                raise ValidationError(
                    f"t0 = {self.t0} must be < max(times) = {arr.max()}"
                )

    # -- canonical regions ------------------------------------------------

    def region_q(self) -> "Region":
        return Region(tuple(range(1, self.l + 1)), self.n_total)

    def region_x(self) -> "Region":
        return Region(tuple(range(self.l + 1, self.l + self.d + 1)), self.n_total)

    def region_p(self) -> "Region":
        return Region(tuple(range(self.l + self.d + 1, self.n_total + 1)), self.n_total)

    def region_qp(self) -> "Region":
        return Region(self.region_q().sites + self.region_p().sites, self.n_total)

    def with_times(self, times: Iterable[float]) -> "SetupConfig":
        return replace(self, times=tuple(times))


@dataclass(frozen=True)
class Region:
    """Ordered set of 1-based site indices within a chain of n_total sites."""

    sites: tuple
    n_total: int

    def __post_init__(self):
        object.__setattr__(self, "sites", tuple(int(s) for s in self.sites))
        if len(set(self.sites)) != len(self.sites):
            raise ValidationError("region sites must be unique")
        for s in self.sites:
            if not 1 <= s <= self.n_total:
                raise ValidationError(
                    f"site {s} out of bounds [1, {self.n_total}]"
                )

    def __len__(self):
        return len(self.sites)

    def majorana_indices(self) -> np.ndarray:
        """0-based Majorana indices (two per site, interleaved order)."""
        out = np.empty(2 * len(self.sites), dtype=np.intp)
        for k, s in enumerate(self.sites):
            out[2 * k] = 2 * (s - 1)
            out[2 * k + 1] = 2 * (s - 1) + 1
        return out

    def union(self, other: "Region") -> "Region":
        if self.n_total != other.n_total:
            raise ValidationError("regions live on chains of different length")
        return Region(self.sites + other.sites, self.n_total)

    def is_disjoint(self, other: "Region") -> bool:
        return not set(self.sites) & set(other.sites)


class QuadraticHamiltonian:
    """Real antisymmetric matrix A with H = (i/4) sum A_jk gamma_j gamma_k.

    Only the strictly-upper triangle is accumulated during construction; the
    lower triangle is mirrored once at the end, so A = -A^T holds exactly.
    """

    def __init__(self, n_sites: int):
        self.n_sites = n_sites
        self._upper = np.zeros((2 * n_sites, 2 * n_sites))
        self._a = None

    def add_onsite(self, site: int, mu: float):
        """mu c^dag c on a 0-based site."""
        self._check_open()
        self._upper[2 * site, 2 * site + 1] += -mu

    def add_hopping(self, site: int, tau: float):
        """(tau/2)(c_s^dag c_{s+1} + h.c.) on the bond (site, site+1)."""
        self._check_open()
        s = site
        self._upper[2 * s, 2 * s + 3] += -tau / 2
        self._upper[2 * s + 1, 2 * s + 2] += tau / 2

    def add_pairing(self, site: int, delta: float):
        """(delta/2)(c_s c_{s+1} + h.c.) on the bond (site, site+1)."""
        self._check_open()
        s = site
        self._upper[2 * s, 2 * s + 3] += delta / 2
        self._upper[2 * s + 1, 2 * s + 2] += delta / 2

    def add_majorana_coupling(self, index_a: int, index_b: int, amp: float):
        """i * amp * gamma_a gamma_b for 0-based Majorana indices a < b."""
        self._check_open()
        if not index_a < index_b:
            raise ValidationError("majorana coupling requires index_a < index_b")
        self._upper[index_a, index_b] += 2 * amp

    def _check_open(self):
        if self._a is not None:
            raise ValidationError("hamiltonian already finalized")

    @property
    def a_matrix(self) -> np.ndarray:
        if self._a is None:
            self._a = self._upper - self._upper.T
            self._a.setflags(write=False)
        return self._a

    @classmethod
    def from_a_matrix(cls, a: np.ndarray) -> "QuadraticHamiltonian":
        a = np.asarray(a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2:
            raise ValidationError("A must be square with even dimension")
        if not np.array_equal(a, -a.T):
            raise ValidationError("A must be exactly antisymmetric")
        h = cls(a.shape[0] // 2)
        h._a = a.copy()
        h._a.setflags(write=False)
        return h


@dataclass(frozen=True)
class SpectrumResult:
    """Non-negative quasiparticle energies of iA with paired eigenvectors.

    `energies` is sorted ascending, one entry per fermionic mode (N values
    for N sites).  `modes` holds the corresponding complex eigenvectors of
    iA (columns), one per positive-energy branch.
    """

    energies: np.ndarray
    modes: np.ndarray


def build_hamiltonian(config: SetupConfig, phase: str) -> QuadraticHamiltonian:
    """Assemble A for H = H^Q + H^XP + H^T + H_gg in the requested phase.

    `phase` selects the Kitaev parameters of region Q: "initial" uses
    (mu_i, tau_i, delta_i), "final" uses (mu_f, tau_f, delta_f).  The
    X/P part, the tunneling bond and the Majorana hybridization are the
    same in both phases.
    """
    if phase not in ("initial", "final"):
        raise ValidationError(f"phase must be 'initial' or 'final', got {phase!r}")
    if phase == "initial":
        mu, tau, delta = config.mu_i, config.tau_i, config.delta_i
    else:
        mu, tau, delta = config.mu_f, config.tau_f, config.delta_f

    n, l = config.n_total, config.l
    h = QuadraticHamiltonian(n)
    for s in range(l):
        h.add_onsite(s, mu)
    for s in range(l - 1):
        h.add_hopping(s, tau)
        h.add_pairing(s, delta)
    for s in range(l, n):
        h.add_onsite(s, config.mu_p)
    for s in range(l, n - 1):
        h.add_hopping(s, config.tau_p)
    if config.tau_t != 0.0:
        h.add_hopping(l - 1, config.tau_t)
    if config.tau_gg != 0.0:
        if l < 2:
            raise ValidationError("tau_gg > 0 requires l >= 2")
        # couples gamma_1 and gamma_{2l} (end Majoranas of region Q)
        h.add_majorana_coupling(0, 2 * l - 1, config.tau_gg)
    return h


def _kitaev_block(mu: float, tau: float, delta: float, l: int,
                  tau_gg: float = 0.0) -> QuadraticHamiltonian:
    h = QuadraticHamiltonian(l)
    for s in range(l):
        h.add_onsite(s, mu)
    for s in range(l - 1):
        h.add_hopping(s, tau)
        h.add_pairing(s, delta)
    if tau_gg != 0.0 and l >= 2:
        h.add_majorana_coupling(0, 2 * l - 1, tau_gg)
    return h


def single_particle_spectrum(h: QuadraticHamiltonian) -> SpectrumResult:
    """Diagonalize iA and return the non-negative branch.

    Eigenvalues of iA come in +/- pairs; the N non-negative ones are the
    quasiparticle energies.  Reconstruction accuracy is checked against
    ||iA - V diag V^dag|| < 1e-10 ||A||.
    """
    a = h.a_matrix
    lam, vec = np.linalg.eigh(1j * a)
    order = np.argsort(lam)
    lam, vec = lam[order], vec[:, order]
    n = h.n_sites
    energies = lam[n:]
    # exact zeros may straddle the cut with tiny negative parts
    energies = np.where(np.abs(energies) < 1e-12 * max(1.0, np.abs(a).max()),
                        0.0, energies)
    recon = vec @ (lam[:, None] * vec.conj().T)
    scale = max(np.abs(a).max(), 1e-300)
    if np.abs(recon - 1j * a).max() > 1e-10 * scale:
        from .errors import NumericalConsistencyError

        raise NumericalConsistencyError("eigh reconstruction of iA failed")
    return SpectrumResult(energies=energies, modes=vec[:, n:])


def mzm_splitting(config: SetupConfig) -> float:
    """Energy splitting of the two end Majoranas of the isolated final Q block.

    The Q block is evaluated with tau_t = 0 (decoupled from X) but keeps
    H_gg, since that term acts within Q.  The two hybridized Majorana
    levels sit at +/- eps_0 in the quasiparticle spectrum; their splitting
    2 eps_0 is returned, which is the quantity quoted alongside the figures
    (e.g. ~1e-3 tau_p at mu_f = 15, tau_f = delta_f = 20, l = 34).
    """
    if not (abs(config.mu_f) < config.tau_f and config.delta_f != 0.0):
        raise ValidationError(
            "mzm_splitting requires the final Q block in the topological "
            f"regime (|mu_f| < tau_f, delta_f != 0); got mu_f={config.mu_f}, "
            f"tau_f={config.tau_f}, delta_f={config.delta_f}"
        )
    block = _kitaev_block(config.mu_f, config.tau_f, config.delta_f,
                          config.l, config.tau_gg)
    energies = single_particle_spectrum(block).energies
    return 2.0 * float(energies[0])
