"""Gaussian states as Majorana covariance matrices, and their exact evolution.

A Gaussian state of N fermionic modes is fully described by the real
antisymmetric 2N x 2N matrix

  M_jk = i (<gamma_j gamma_k> - delta_jk).

Ground and thermal states of a quadratic Hamiltonian are built from the
real canonical form of its A matrix,

  A = R B R^T,   B = blockdiag([[0, eps_m], [-eps_m, 0]]),  eps_m >= 0,

with R real orthogonal.  Heisenberg evolution of the Majorana operators
under H is gamma(t) = exp(A t) gamma(0), so the state evolves as
M(t) = O(t) M(0) O(t)^T with O(t) = R G(t) R^T and G(t) the block-diagonal
rotation by angles eps_m t.  Each requested t is evaluated directly from
the cached canonical form; there is no step-wise integrator error.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla

from .errors import DegenerateGroundStateError, NumericalConsistencyError, ValidationError
from .model import QuadraticHamiltonian, Region

__all__ = [
    "CovarianceMatrix",
    "canonical_form",
    "ground_state",
    "thermal_state",
    "Propagator",
    "make_propagator",
    "evolve",
    "reduce",
]

# singular values of M may exceed 1 by at most this much before we abort
SV_SLACK = 1e-9
# quasiparticle energies below this (relative) threshold count as zero modes
DEGENERACY_TOL = 1e-10


class CovarianceMatrix:
    """Real antisymmetric covariance matrix of a Gaussian state.

    The stored matrix is antisymmetrized on construction, so
    ``m.m_matrix == -m.m_matrix.T`` holds exactly.
    """

    def __init__(self, m: np.ndarray):
        m = np.asarray(m, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise ValidationError("covariance matrix must be square with even dimension")
        m = (m - m.T) / 2.0
        m.setflags(write=False)
        self.m_matrix = m

    @property
    def n_sites(self) -> int:
        return self.m_matrix.shape[0] // 2

    def purity_defect(self) -> float:
        """max |M M^T - 1|; ~0 for pure states."""
        m = self.m_matrix
        return float(np.abs(m @ m.T - np.eye(m.shape[0])).max())

    def is_pure(self, tol: float = 1e-8) -> bool:
        return self.purity_defect() < tol

    def submatrix(self, majorana_indices: np.ndarray) -> np.ndarray:
        idx = np.asarray(majorana_indices)
        return self.m_matrix[np.ix_(idx, idx)]


def canonical_form(a: np.ndarray) -> tuple:
    """Canonical form of a real antisymmetric matrix.

    Returns (R, eps) with A = R @ B @ R.T where B is block diagonal with
    2x2 blocks [[0, eps_m], [-eps_m, 0]], eps_m >= 0, and R is real
    orthogonal with columns ordered pairwise (y_1, x_1, y_2, x_2, ...).

    The eigenvectors of the real symmetric A^T A give the invariant planes;
    eps and the in-plane orientation are then fixed by a small real Schur
    decomposition per (possibly degenerate) eigenvalue cluster, so tiny
    splittings are resolved to machine precision rather than to the
    precision of sqrt(eig(A^T A)).
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    scale = max(np.abs(a).max(), 1e-300)
    w, v = np.linalg.eigh(a.T @ a)
    splits = np.nonzero(np.diff(w) > 1e-10 * scale**2 * n)[0] + 1
    groups = np.split(np.arange(n), splits)
    cols, eps, zero_cols = [], [], []
    for g in groups:
        vc = v[:, g]
        b = vc.T @ a @ vc
        b = (b - b.T) / 2.0
        if len(g) == 1:
            zero_cols.append(vc[:, 0])
            continue
        t, z = sla.schur(b, output="real")
        wc = vc @ z
        i, k = 0, len(g)
        while i < k:
            if i + 1 < k and abs(t[i + 1, i]) > 1e-13 * scale:
                e = t[i, i + 1]
                if e >= 0:
                    cols.append(wc[:, i])
                    cols.append(wc[:, i + 1])
                else:
                    e = -e
                    cols.append(wc[:, i + 1])
                    cols.append(wc[:, i])
                eps.append(e)
                i += 2
            else:
                zero_cols.append(wc[:, i])
                i += 1
    if len(zero_cols) % 2:
        raise NumericalConsistencyError("odd number of zero modes in canonical form")
    for j in range(0, len(zero_cols), 2):
        cols.append(zero_cols[j])
        cols.append(zero_cols[j + 1])
        eps.append(0.0)
    r = np.column_stack(cols)
    return r, np.asarray(eps)


def _state_from_occupations(r: np.ndarray, nu: np.ndarray) -> CovarianceMatrix:
    """Assemble M = R blockdiag([[0, -nu], [nu, 0]]) R^T."""
    n2 = r.shape[0]
    b = np.zeros((n2, n2))
    b[0::2, 1::2] = np.diag(-nu)
    b[1::2, 0::2] = np.diag(nu)
    return CovarianceMatrix(r @ b @ r.T)


def ground_state(h: QuadraticHamiltonian,
                 degeneracy_tol: float = DEGENERACY_TOL) -> CovarianceMatrix:
    """Covariance matrix of the many-body ground state of h.

    Raises
    ------
    DegenerateGroundStateError
        If the smallest quasiparticle energy is below `degeneracy_tol`
        (relative to the matrix scale): the ground state is then not
        unique and the caller must lift the degeneracy.
    """
    a = h.a_matrix
    r, eps = canonical_form(a)
    scale = max(np.abs(a).max(), 1.0)
    if eps.size and eps.min() < degeneracy_tol * scale:
        raise DegenerateGroundStateError(
            f"degenerate ground state: smallest quasiparticle energy "
            f"{eps.min():.3e} below tolerance {degeneracy_tol * scale:.3e}"
        )
    return _state_from_occupations(r, np.ones_like(eps))


def thermal_state(h: QuadraticHamiltonian, temperature: float,
                  degeneracy_tol: float = DEGENERACY_TOL) -> CovarianceMatrix:
    """Gibbs state exp(-H/T)/Z of h; T = 0 falls back to ground_state.

    In the quasiparticle eigenbasis each mode carries covariance eigenvalue
    nu_m = tanh(eps_m / 2T); zero modes at T > 0 get nu = 0.
    """
    if temperature < 0:
        raise ValidationError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0.0:
        return ground_state(h, degeneracy_tol)
    r, eps = canonical_form(h.a_matrix)
    return _state_from_occupations(r, np.tanh(eps / (2.0 * temperature)))


class Propagator:
    """Cached canonical form of A_final; evaluates O(t) = exp(A t) exactly.

    Immutable after construction; `evolve` and `bind` may be called
    concurrently from multiple threads.
    """

    def __init__(self, h: QuadraticHamiltonian):
        self.r, self.eps = canonical_form(h.a_matrix)
        self.r.setflags(write=False)
        self.eps.setflags(write=False)

    def rotation(self, t: float) -> np.ndarray:
        """The orthogonal matrix O(t) rotating the Majorana operators."""
        rg = self._rotate_pair_columns(self.r, t)
        return rg @ self.r.T

    def _rotate_pair_columns(self, w: np.ndarray, t: float) -> np.ndarray:
        """Right-multiply W by the block rotation G(t) (cheap, O(len(W)*N))."""
        c = np.cos(self.eps * t)
        s = np.sin(self.eps * t)
        out = np.empty_like(w)
        y, x = w[:, 0::2], w[:, 1::2]
        out[:, 0::2] = y * c - x * s
        out[:, 1::2] = y * s + x * c
        return out

    def evolve(self, m: CovarianceMatrix, t: float) -> CovarianceMatrix:
        o = self.rotation(t)
        return CovarianceMatrix(o @ m.m_matrix @ o.T)

    def bind(self, m: CovarianceMatrix) -> "BoundEvolution":
        """Precompute R^T M R once for repeated block evaluation over t."""
        return BoundEvolution(self, m)


class BoundEvolution:
    """One initial state attached to a propagator.

    Evaluating a principal submatrix of M(t) costs two slim matrix products
    per time instead of a full O(t) M O(t)^T sandwich:

      M(t)[rows, rows] = (W G(t)) C (W G(t))^T,
      W = R[rows, :],  C = R^T M(0) R.
    """

    def __init__(self, propagator: Propagator, m: CovarianceMatrix):
        self.propagator = propagator
        self._c = propagator.r.T @ m.m_matrix @ propagator.r

    def submatrix(self, t: float, majorana_indices: np.ndarray) -> np.ndarray:
        idx = np.asarray(majorana_indices)
        w = self.propagator.r[idx, :]
        wg = self.propagator._rotate_pair_columns(w, t)
        return wg @ self._c @ wg.T

    def full(self, t: float) -> CovarianceMatrix:
        wg = self.propagator._rotate_pair_columns(self.propagator.r, t)
        return CovarianceMatrix(wg @ self._c @ wg.T)


def make_propagator(h: QuadraticHamiltonian) -> Propagator:
    return Propagator(h)


def evolve(m: CovarianceMatrix, propagator: Propagator, t: float) -> CovarianceMatrix:
    """M(t) = O(t) M O(t)^T for the quench generated by the propagator."""
    return propagator.evolve(m, t)


def reduce(m: CovarianceMatrix, region: Region) -> CovarianceMatrix:
    """Principal submatrix of M over the Majorana indices of a site region."""
    if 2 * region.n_total != m.m_matrix.shape[0]:
        raise ValidationError(
            f"region defined on {region.n_total} sites, state has {m.n_sites}"
        )
    return CovarianceMatrix(m.submatrix(region.majorana_indices()))
