"""Hermitian and tridiagonal spectral kernels.

All norms used for tolerances are the max row sum (infinity norm), so every
threshold in the package scales with the matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConvergenceError

__all__ = [
    "HermitianTridiagonal",
    "SymmetricTridiagonal",
    "Spectrum",
    "gauge_to_real",
    "eig_tridiagonal",
    "eig_dense_hermitian",
    "row_sum_norm",
]


def row_sum_norm(a) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(a), axis=1)))


@dataclass(frozen=True)
class HermitianTridiagonal:
    """Hermitian tridiagonal matrix.

    ``off[j]`` is the (j, j+1) entry; the (j+1, j) entry is its conjugate.
    """

    diag: np.ndarray
    off: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float).reshape(-1)
        off = np.asarray(self.off, dtype=complex).reshape(-1)
        if diag.size == 0:
            raise ValueError("empty tridiagonal matrix")
        if off.size != diag.size - 1:
            raise ValueError(
                f"off-diagonal length {off.size} != diagonal length {diag.size} - 1"
            )
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "off", off)

    @property
    def size(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        a = np.diag(self.diag.astype(complex))
        idx = np.arange(self.size - 1)
        a[idx, idx + 1] = self.off
        a[idx + 1, idx] = self.off.conj()
        return a

    def norm(self) -> float:
        return row_sum_norm(self.to_dense())


@dataclass(frozen=True)
class SymmetricTridiagonal:
    """Real symmetric tridiagonal matrix with diagonal ``diag`` and off-diagonal ``off``."""

    diag: np.ndarray
    off: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float).reshape(-1)
        off = np.asarray(self.off, dtype=float).reshape(-1)
        if diag.size == 0:
            raise ValueError("empty tridiagonal matrix")
        if off.size != diag.size - 1:
            raise ValueError(
                f"off-diagonal length {off.size} != diagonal length {diag.size} - 1"
            )
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "off", off)

    @property
    def size(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)

    def as_hermitian(self) -> HermitianTridiagonal:
        return HermitianTridiagonal(self.diag, self.off.astype(complex))

    def norm(self) -> float:
        a = np.abs(self.diag).copy()
        a[:-1] += np.abs(self.off)
        a[1:] += np.abs(self.off)
        return float(a.max())


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues and the matching orthonormal eigenvectors.

    ``vectors[:, k]`` belongs to ``values[k]``; read as a table,
    ``vectors[n, k]`` is the amplitude of mode k on site n.
    """

    values: np.ndarray
    vectors: np.ndarray

    @property
    def size(self) -> int:
        return self.values.size

    @property
    def gaps(self) -> np.ndarray:
        return np.diff(self.values)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # first component of largest modulus made positive real
    idx = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    phase = pivots / np.abs(pivots)
    if np.iscomplexobj(vectors):
        return vectors * phase.conj()[None, :]
    return vectors * np.sign(phase)[None, :]


def gauge_to_real(m: HermitianTridiagonal) -> tuple[SymmetricTridiagonal, np.ndarray]:
    """Remove the hopping phases with a diagonal unitary gauge.

    Returns ``(real_matrix, phases)`` where, with ``D = diag(phases)``,
    ``D^H M D`` equals the real matrix and has non-negative off-diagonal.
    An eigenvector ``w`` of the real matrix maps back to ``D @ w``.
    """
    off = m.off
    mod = np.abs(off)
    phases = np.ones(m.size, dtype=complex)
    for j in range(off.size):
        if mod[j] > 0:
            phases[j + 1] = phases[j] * np.conj(off[j]) / mod[j]
        else:
            phases[j + 1] = phases[j]
    return SymmetricTridiagonal(m.diag, mod), phases


def eig_tridiagonal(m: SymmetricTridiagonal) -> Spectrum:
    """Full eigendecomposition of a real symmetric tridiagonal matrix.

    Eigenvectors are normalised and oriented so that their first entry of
    largest magnitude is positive.
    """
    if m.size == 1:
        return Spectrum(m.diag.copy(), np.ones((1, 1)))
    try:
        values, vectors = scipy.linalg.eigh_tridiagonal(m.diag, m.off, lapack_driver="stev")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceError(f"tridiagonal eigensolver failed: {exc}") from exc
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]
    return Spectrum(values, _fix_signs(vectors))


def eig_dense_hermitian(a, tol: float = 1e-12) -> Spectrum:
    """Dense Hermitian eigendecomposition.

    This is the direct route for correlation-matrix spectra and the oracle
    for the tridiagonal path. ``a`` must be Hermitian to ``tol`` in max norm.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    asym = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if asym > tol:
        raise ValueError(f"matrix is not Hermitian (max asymmetry {asym:.3e})")
    if not np.iscomplexobj(a) or not np.any(a.imag):
        a = np.real(a)
    sym = 0.5 * (a + a.conj().T)
    try:
        values, vectors = scipy.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"dense eigensolver failed: {exc}") from exc
    return Spectrum(values, _fix_signs(vectors))
