"""Entanglement measures of Gaussian states from reduced covariance matrices.

A reduced covariance matrix M of r sites has r pairs of singular values
nu_m in [0, 1] (the covariance eigenvalues); every entropy is a sum of
single-mode contributions in nu_m.  Internally everything is in nats; the
log-2 unit used on all reported axes is nats / ln 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .covariance import CovarianceMatrix, SV_SLACK
from .errors import NumericalConsistencyError, ValidationError
from .model import Region

__all__ = [
    "ModeSpectrum",
    "mode_spectrum",
    "von_neumann",
    "renyi",
    "mutual_information",
    "LN2",
    "to_log2",
]

LN2 = float(np.log(2.0))
# nu within this of 1 counts as an exactly pure mode (zero entropy)
PURE_MODE_TOL = 1e-12


def to_log2(value):
    """Convert entropies from nats to multiples of log(2)."""
    return np.asarray(value) / LN2 if np.ndim(value) else float(value) / LN2


@dataclass(frozen=True)
class ModeSpectrum:
    """Covariance eigenvalues nu_m of a reduced state, one per mode."""

    nus: np.ndarray


def _paired_singular_values(m: np.ndarray) -> np.ndarray:
    """All 2r singular values of the reduced M (each nu appears twice)."""
    lam = np.linalg.eigvalsh(m.T @ m)
    if lam.size and lam.max() > (1.0 + SV_SLACK) ** 2:
        raise NumericalConsistencyError(
            f"covariance singular value {np.sqrt(lam.max()):.12f} exceeds 1 + {SV_SLACK}"
        )
    return np.sqrt(np.clip(lam, 0.0, 1.0))


def mode_spectrum(m_reduced: CovarianceMatrix) -> ModeSpectrum:
    """Per-mode covariance eigenvalues, clipped to [0, 1].

    Raises NumericalConsistencyError if any singular value exceeds
    1 + 1e-9 before clipping.
    """
    sv = np.sort(_paired_singular_values(m_reduced.m_matrix))
    # each value appears twice; average the pairs for stability
    return ModeSpectrum(nus=0.5 * (sv[0::2] + sv[1::2]))


def _binary_entropy(nu: np.ndarray) -> np.ndarray:
    p = (1.0 + nu) / 2.0
    q = (1.0 - nu) / 2.0
    s = -(xlogy(p, p) + xlogy(q, q))
    s[nu >= 1.0 - PURE_MODE_TOL] = 0.0
    return s


def von_neumann(m_reduced: CovarianceMatrix) -> float:
    """Von Neumann entropy (nats) of the reduced state."""
    sv = _paired_singular_values(m_reduced.m_matrix)
    return float(0.5 * _binary_entropy(sv).sum())


def renyi(m_reduced: CovarianceMatrix, q: float) -> float:
    """Renyi entropy S_q (nats), q > 0 and q != 1.

    S_q = 1/(1-q) * sum_m ln[((1+nu)/2)^q + ((1-nu)/2)^q]; q = 2 is the
    (negative log) quantum purity, -sum ln[(1 + nu^2)/2].
    """
    if not (q > 0) or q == 1:
        raise ValidationError(f"renyi order must be > 0 and != 1, got {q}")
    sv = _paired_singular_values(m_reduced.m_matrix)
    p = (1.0 + sv) / 2.0
    r = (1.0 - sv) / 2.0
    if q == 2:
        terms = np.log((1.0 + sv**2) / 2.0)
    else:
        terms = np.log(p**q + r**q)
    return float(0.5 * terms.sum() / (1.0 - q))


def _region_entropy(m_full: CovarianceMatrix, region: Region, q) -> float:
    sub = CovarianceMatrix(m_full.submatrix(region.majorana_indices()))
    if q == "vn":
        return von_neumann(sub)
    return renyi(sub, q)


def mutual_information(m_full: CovarianceMatrix, a: Region, b: Region,
                       q="vn") -> float:
    """I = S(a) + S(b) - S(a u b) in nats; q is "vn" or a Renyi order."""
    if not a.is_disjoint(b):
        raise ValidationError("mutual information requires disjoint regions")
    return (_region_entropy(m_full, a, q)
            + _region_entropy(m_full, b, q)
            - _region_entropy(m_full, a.union(b), q))
