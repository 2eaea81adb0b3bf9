"""Spectrum of the chopped correlation matrix, entanglement energies and entropy.

Two routes are provided. ``c_spectrum_via_commutant`` diagonalises the
well-conditioned tridiagonal commutant and reads off the eigenvalues of C as
Rayleigh quotients on the shared eigenvectors. ``c_spectrum_direct`` is the
dense eigendecomposition of C itself, kept as an oracle and as the fallback
when the commutant is unusable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import entr

from .errors import CommutationError, NumericalError
from .ground_state import CorrelationChopped
from .heun import CommutantT, commutator_residual
from .spectral import (
    Spectrum,
    SymmetricTridiagonal,
    eig_dense_hermitian,
    eig_tridiagonal,
    gauge_to_real,
)

__all__ = [
    "Method",
    "EntanglementReport",
    "c_spectrum_direct",
    "c_spectrum_via_commutant",
    "entanglement_hamiltonian_spectrum",
    "von_neumann_entropy",
    "nats_to_bits",
]

CLAMP_EPS = 1e-15
RANGE_TOL = 1e-9
DEGENERACY_TOL = 1e-12


class Method(str, Enum):
    VIA_COMMUTANT = "via_commutant"
    DIRECT = "direct"


@dataclass(frozen=True)
class EntanglementReport:
    """Eigenvalues ``nu`` of C (ascending, clamped to [0, 1]) and derived data.

    ``commutator_residual`` is NaN for the direct route, where it does not
    apply. ``clamped`` marks modes whose entanglement energy hit the clamp.
    """

    nu: np.ndarray
    epsilon: np.ndarray
    entropy: float
    method: Method
    residuals: np.ndarray
    commutator_residual: float
    clamped: np.ndarray
    range_deviation: float

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals)) if self.residuals.size else 0.0


def entanglement_hamiltonian_spectrum(nu, clamp_eps: float = CLAMP_EPS, return_clamped: bool = False):
    """Single-particle entanglement energies ``log((1 - nu) / nu)``.

    ``nu`` is clamped to ``[clamp_eps, 1 - clamp_eps]`` first, so fully
    occupied or empty modes map to about -+34.5 instead of infinity.
    """
    nu = np.asarray(nu, dtype=float)
    lo, hi = clamp_eps, 1.0 - clamp_eps
    clamped = (nu < lo) | (nu > hi)
    x = np.clip(nu, lo, hi)
    eps = np.log1p(-x) - np.log(x)
    if return_clamped:
        return eps, clamped
    return eps


def von_neumann_entropy(nu) -> float:
    """Sum of binary entropies of the occupation eigenvalues, in nats."""
    nu = np.clip(np.asarray(nu, dtype=float), 0.0, 1.0)
    return float(np.sum(entr(nu) + entr(1.0 - nu)))


def nats_to_bits(value: float) -> float:
    return value / math.log(2.0)


def _finish(nu, vectors, c, method, comm, clamp_eps):
    cm = np.asarray(c.entries)
    order = np.argsort(nu, kind="stable")
    nu = nu[order]
    vectors = vectors[:, order]
    residuals = np.linalg.norm(cm @ vectors - vectors * nu[None, :], axis=0)
    deviation = float(max(0.0, -nu.min(), nu.max() - 1.0))
    if deviation > RANGE_TOL:
        raise NumericalError(f"eigenvalues of C leave [0, 1] by {deviation:.3e}")
    nu = np.clip(nu, 0.0, 1.0)
    eps, clamped = entanglement_hamiltonian_spectrum(nu, clamp_eps, return_clamped=True)
    return EntanglementReport(
        nu=nu,
        epsilon=eps,
        entropy=von_neumann_entropy(nu),
        method=method,
        residuals=residuals,
        commutator_residual=comm,
        clamped=clamped,
        range_deviation=deviation,
    )


def c_spectrum_direct(c: CorrelationChopped, clamp_eps: float = CLAMP_EPS) -> EntanglementReport:
    spec = eig_dense_hermitian(c.entries)
    return _finish(spec.values.copy(), spec.vectors, c, Method.DIRECT, math.nan, clamp_eps)


def _commutant_spectrum(t: CommutantT) -> Spectrum:
    if isinstance(t.matrix, SymmetricTridiagonal):
        return eig_tridiagonal(t.matrix)
    real, phases = gauge_to_real(t.matrix)
    spec = eig_tridiagonal(real)
    return Spectrum(spec.values, phases[:, None] * spec.vectors)


def _split_clusters(vectors, values, cm, scale):
    # Near-degenerate eigenvalues of T leave the basis of their common
    # eigenspace undetermined; diagonalise C inside each such cluster.
    vectors = vectors.copy()
    gaps = np.diff(values)
    start = 0
    for k in range(1, values.size + 1):
        if k == values.size or gaps[k - 1] > DEGENERACY_TOL * scale:
            if k - start > 1:
                w = vectors[:, start:k]
                small = w.conj().T @ cm @ w
                _, rot = np.linalg.eigh(0.5 * (small + small.conj().T))
                q, _ = np.linalg.qr(w @ rot)
                vectors[:, start:k] = q
            start = k
    return vectors


def c_spectrum_via_commutant(
    t: CommutantT,
    c: CorrelationChopped,
    commutator_tol: float = 1e-8,
    residual_tol: float = 1e-8,
    clamp_eps: float = CLAMP_EPS,
) -> EntanglementReport:
    """Eigenvalues of C from the eigenvectors of its tridiagonal commutant.

    Raises :class:`CommutationError` when T does not commute with C within
    ``commutator_tol``, when T is near-reducible, or when any Rayleigh
    residual ``||C v - nu v||`` exceeds ``residual_tol``. In all three cases
    the direct route is the one to use.
    """
    if t.matrix.size != c.size:
        raise ValueError(f"size mismatch: T has {t.matrix.size} rows, C has {c.size}")
    if t.near_reducible:
        raise CommutationError("commutant has a vanishing off-diagonal entry; use the direct route")
    comm = commutator_residual(t, c)
    if not comm <= commutator_tol:
        raise CommutationError(
            f"commutator residual {comm:.3e} exceeds {commutator_tol:.1e}; use the direct route"
        )
    cm = np.asarray(c.entries)
    spec = _commutant_spectrum(t)
    vectors = _split_clusters(spec.vectors, spec.values, cm, t.matrix.norm())
    nu = np.real(np.einsum("nk,nm,mk->k", vectors.conj(), cm, vectors))
    report = _finish(nu, vectors, c, Method.VIA_COMMUTANT, comm, clamp_eps)
    if report.max_residual > residual_tol:
        raise CommutationError(
            f"Rayleigh residual {report.max_residual:.3e} exceeds {residual_tol:.1e}; "
            "use the direct route"
        )
    return report
