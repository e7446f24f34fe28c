"""Brute-force many-body oracle on the full 2^N Fock space (N <= 10).

Everything the Gaussian formalism computes is recomputed here from dense
matrices: Hamiltonians are assembled term by term with explicit fermionic
signs, states are 2^N amplitude vectors over the occupation basis
|n_1 ... n_N> (site 1 is the most significant bit; a creation operator on
site j carries the string sign (-1)^(n_1 + ... + n_{j-1})), and entropies
come from exact reduced-density-matrix eigenvalues.

Partial traces are taken over contiguous site ranges.  The one
non-contiguous region the protocol needs, Q u P, is handled by reordering
the fermionic modes from (Q, X, P) to (Q, P, X): moving the occupied P
modes past the occupied X modes multiplies each basis amplitude by
(-1)^(N_X * N_P), after which X is a trailing contiguous block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .errors import OracleSizeError, ValidationError
from .model import Region, SetupConfig

__all__ = [
    "DenseState",
    "DenseHamiltonian",
    "build_dense",
    "toy_states",
    "dense_ground_state",
    "dense_thermal_density",
    "dense_evolve",
    "dense_entropy",
    "dense_mutual_information",
    "dense_entropy_rho",
    "dense_mutual_information_rho",
    "annihilation_ops",
    "majorana_ops",
]

SIZE_CAP = 10


@dataclass(frozen=True)
class DenseState:
    """Normalized state vector over the 2^N occupation basis."""

    amplitudes: np.ndarray
    n_sites: int

    def __post_init__(self):
        psi = np.asarray(self.amplitudes)
        if psi.shape != (2**self.n_sites,):
            raise ValidationError("amplitude vector has wrong length")
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > 1e-12:
            raise ValidationError(f"state not normalized: |psi| = {norm}")


@dataclass(frozen=True)
class DenseHamiltonian:
    """Hermitian 2^N x 2^N matrix over the occupation basis."""

    matrix: np.ndarray
    n_sites: int


def annihilation_ops(n: int) -> list:
    """Dense matrices of c_1 .. c_n with Jordan-Wigner string signs."""
    dim = 2**n
    ops = []
    for j in range(n):
        c = np.zeros((dim, dim))
        bit = 1 << (n - 1 - j)
        for b in range(dim):
            if b & bit:
                sign = -1.0 if bin(b >> (n - j)).count("1") % 2 else 1.0
                c[b ^ bit, b] = sign
        ops.append(c)
    return ops


def majorana_ops(n: int) -> list:
    """gamma_1 .. gamma_2n with gamma_{2j-1} = i(c_j^dag - c_j), gamma_{2j} = c_j + c_j^dag."""
    cs = annihilation_ops(n)
    out = []
    for c in cs:
        out.append(1j * (c.T - c))
        out.append(c.T + c)
    return out


def build_dense(config: SetupConfig, phase: str) -> DenseHamiltonian:
    """Oracle twin of build_hamiltonian on the full Fock space."""
    n = config.n_total
    if n > SIZE_CAP:
        raise OracleSizeError(f"dense oracle capped at N = {SIZE_CAP}, got {n}")
    if phase not in ("initial", "final"):
        raise ValidationError(f"phase must be 'initial' or 'final', got {phase!r}")
    if phase == "initial":
        mu, tau, delta = config.mu_i, config.tau_i, config.delta_i
    else:
        mu, tau, delta = config.mu_f, config.tau_f, config.delta_f

    cs = annihilation_ops(n)
    l = config.l
    h = np.zeros((2**n, 2**n), dtype=complex)

    def onsite(s, mu_s):
        return mu_s * (cs[s].T @ cs[s])

    def hop(s, amp):
        return (amp / 2.0) * (cs[s].T @ cs[s + 1] + cs[s + 1].T @ cs[s])

    def pair(s, amp):
        return (amp / 2.0) * (cs[s] @ cs[s + 1] + cs[s + 1].T @ cs[s].T)

    for s in range(l):
        h += onsite(s, mu)
    for s in range(l - 1):
        h += hop(s, tau) + pair(s, delta)
    for s in range(l, n):
        h += onsite(s, config.mu_p)
    for s in range(l, n - 1):
        h += hop(s, config.tau_p)
    if config.tau_t != 0.0:
        h += hop(l - 1, config.tau_t)
    if config.tau_gg != 0.0:
        g1 = 1j * (cs[0].T - cs[0])
        g2l = cs[l - 1] + cs[l - 1].T
        h = h + 1j * config.tau_gg * (g1 @ g2l)
    return DenseHamiltonian(matrix=h, n_sites=n)


def toy_states() -> tuple:
    """The 3-site toy states psi_F and psi_M (shared fermion / shared Majorana)."""
    psi_f = np.zeros(8)
    psi_f[0b100] = psi_f[0b010] = 1.0 / np.sqrt(2.0)
    psi_m = np.zeros(8)
    psi_m[0b100] = psi_m[0b010] = psi_m[0b001] = psi_m[0b111] = 0.5
    return DenseState(psi_f, 3), DenseState(psi_m, 3)


def dense_ground_state(h: DenseHamiltonian) -> DenseState:
    w, v = np.linalg.eigh(h.matrix)
    return DenseState(v[:, 0], h.n_sites)


def dense_thermal_density(h: DenseHamiltonian, temperature: float) -> np.ndarray:
    """Gibbs density matrix exp(-H/T)/Z."""
    if temperature <= 0:
        raise ValidationError("dense thermal oracle needs temperature > 0")
    w, v = np.linalg.eigh(h.matrix)
    weights = np.exp(-(w - w[0]) / temperature)
    weights /= weights.sum()
    return (v * weights) @ v.conj().T


def dense_evolve(state: DenseState, h: DenseHamiltonian, t: float) -> DenseState:
    """exp(-iHt)|psi> via full diagonalization."""
    w, v = np.linalg.eigh(h.matrix)
    psi = v @ (np.exp(-1j * w * t) * (v.conj().T @ state.amplitudes))
    psi /= np.linalg.norm(psi)
    return DenseState(psi, state.n_sites)


def _contiguous_bounds(region: Region) -> tuple:
    sites = sorted(region.sites)
    if not sites:
        raise ValidationError("empty region")
    if sites[-1] - sites[0] + 1 != len(sites):
        raise ValidationError(f"oracle region must be contiguous, got {sites}")
    return sites[0] - 1, sites[-1]  # 0-based [a, b)


def _rdm_pure(psi: np.ndarray, n: int, a: int, b: int) -> np.ndarray:
    t = psi.reshape(2**a, 2 ** (b - a), 2 ** (n - b))
    return np.einsum("arb,asb->rs", t, t.conj())


def _rdm_mixed(rho: np.ndarray, n: int, a: int, b: int) -> np.ndarray:
    shape = (2**a, 2 ** (b - a), 2 ** (n - b)) * 2
    return np.einsum("arbasb->rs", rho.reshape(shape))


def _spectrum_entropy(rdm: np.ndarray) -> float:
    lam = np.clip(np.linalg.eigvalsh(rdm).real, 0.0, 1.0)
    return float(-xlogy(lam, lam).sum())


def dense_entropy(state: DenseState, region: Region) -> float:
    """Von Neumann entropy (nats) of a contiguous region of a pure state."""
    a, b = _contiguous_bounds(region)
    return _spectrum_entropy(_rdm_pure(state.amplitudes, state.n_sites, a, b))


def dense_entropy_rho(rho: np.ndarray, n: int, region: Region) -> float:
    a, b = _contiguous_bounds(region)
    return _spectrum_entropy(_rdm_mixed(rho, n, a, b))


def _two_block_permutation(n: int, a_end: int, b_start: int) -> tuple:
    """Mode reorder (A, X, B, Z) -> (A, B, X, Z) as (index map, signs).

    A = sites [0, a_end), X = [a_end, b_start), B = [b_start, n); a trailing
    block Z after B is not supported (B must reach the last site).  Moving
    the B-block creation operators left past the X block gives the sign
    (-1)^(N_X * N_B) per basis state.
    """
    nx = b_start - a_end
    nb = n - b_start
    dim = 2**n
    perm = np.empty(dim, dtype=np.intp)
    sign = np.empty(dim)
    mask_b = (1 << nb) - 1
    mask_x = (1 << nx) - 1
    for bidx in range(dim):
        bbits = bidx & mask_b
        xbits = (bidx >> nb) & mask_x
        head = bidx >> (nb + nx)
        perm[bidx] = (head << (nb + nx)) | (bbits << nx) | xbits
        odd = (bin(xbits).count("1") * bin(bbits).count("1")) % 2
        sign[bidx] = -1.0 if odd else 1.0
    return perm, sign


def _union_entropy_pure(psi: np.ndarray, n: int, a: Region, b: Region) -> float:
    a0, a1 = _contiguous_bounds(a)
    b0, b1 = _contiguous_bounds(b)
    if a0 > b0:
        a0, a1, b0, b1 = b0, b1, a0, a1
    if a1 > b0:
        raise ValidationError("regions overlap")
    if a1 == b0:  # adjacent: union already contiguous
        return _spectrum_entropy(_rdm_pure(psi, n, a0, b1))
    if b1 != n:
        raise ValidationError(
            "oracle union regions must be (prefix block, suffix block)"
        )
    perm, sign = _two_block_permutation(n, a1, b0)
    psi2 = np.zeros_like(psi)
    psi2[perm] = sign * psi
    # after reorder the union occupies [a0, a1 + (b1 - b0))
    return _spectrum_entropy(_rdm_pure(psi2, n, a0, a1 + (b1 - b0)))


def _union_entropy_rho(rho: np.ndarray, n: int, a: Region, b: Region) -> float:
    a0, a1 = _contiguous_bounds(a)
    b0, b1 = _contiguous_bounds(b)
    if a0 > b0:
        a0, a1, b0, b1 = b0, b1, a0, a1
    if a1 > b0:
        raise ValidationError("regions overlap")
    if a1 == b0:
        return _spectrum_entropy(_rdm_mixed(rho, n, a0, b1))
    if b1 != n:
        raise ValidationError(
            "oracle union regions must be (prefix block, suffix block)"
        )
    perm, sign = _two_block_permutation(n, a1, b0)
    rho2 = np.zeros_like(rho)
    rho2[np.ix_(perm, perm)] = (sign[:, None] * sign[None, :]) * rho
    return _spectrum_entropy(_rdm_mixed(rho2, n, a0, a1 + (b1 - b0)))


def dense_mutual_information(state: DenseState, a: Region, b: Region) -> float:
    """I = S(a) + S(b) - S(a u b) for two disjoint contiguous blocks."""
    return (dense_entropy(state, a) + dense_entropy(state, b)
            - _union_entropy_pure(state.amplitudes, state.n_sites, a, b))


def dense_mutual_information_rho(rho: np.ndarray, n: int, a: Region, b: Region) -> float:
    return (dense_entropy_rho(rho, n, a) + dense_entropy_rho(rho, n, b)
            - _union_entropy_rho(rho, n, a, b))
