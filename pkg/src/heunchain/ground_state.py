"""Fermi sea filling and ground-state correlation matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateGroundStateError, EmptyGroundStateError, FullGroundStateError
from .models import ChainSpec, build_hamiltonian
from .spectral import Spectrum, eig_tridiagonal, gauge_to_real

__all__ = [
    "FermiData",
    "CorrelationFull",
    "CorrelationChopped",
    "fermi_index",
    "full_correlation",
    "chop",
    "projector_identity_check",
    "hamiltonian_spectrum",
]


@dataclass(frozen=True)
class FermiData:
    """Filled modes are ``0..K``; ``omega_K < 0 < omega_K1``."""

    K: int
    omega_K: float
    omega_K1: float
    ground_energy: float


@dataclass(frozen=True)
class CorrelationFull:
    entries: np.ndarray

    @property
    def sites(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class CorrelationChopped:
    entries: np.ndarray
    ell: int

    @property
    def size(self) -> int:
        return self.ell + 1


def hamiltonian_spectrum(chain: ChainSpec) -> Spectrum:
    """Spectrum of the chain's one-particle Hamiltonian, eigenvectors in the original gauge."""
    real, phases = gauge_to_real(build_hamiltonian(chain))
    spec = eig_tridiagonal(real)
    if np.all(phases == 1):
        return spec
    return Spectrum(spec.values, phases[:, None] * spec.vectors)


def fermi_index(spec, zero_tol: Optional[float] = None) -> FermiData:
    """Fill every negative-energy mode.

    ``spec`` is a :class:`Spectrum` or an ascending array of energies.
    ``zero_tol`` defaults to ``1e-10 * max|omega|``; any mode that close to
    zero makes the ground state degenerate and is rejected.
    """
    omega = np.asarray(spec.values if isinstance(spec, Spectrum) else spec, dtype=float)
    if omega.size == 0:
        raise ValueError("empty spectrum")
    if np.any(np.diff(omega) < 0):
        raise ValueError("energies must be ascending")
    if zero_tol is None:
        zero_tol = 1e-10 * float(np.max(np.abs(omega)))
    zeros = np.flatnonzero(np.abs(omega) <= zero_tol)
    if zeros.size:
        raise DegenerateGroundStateError(
            f"mode {int(zeros[0])} has energy {omega[zeros[0]]:.3e} (|omega| <= {zero_tol:.3e}); "
            "shift the uniform field b to lift the zero mode"
        )
    neg = omega < 0
    if not neg.any():
        raise EmptyGroundStateError("all mode energies are positive: the ground state is empty")
    if neg.all():
        raise FullGroundStateError("all mode energies are negative: the ground state is full")
    K = int(np.flatnonzero(neg)[-1])
    return FermiData(K, float(omega[K]), float(omega[K + 1]), float(np.sum(omega[: K + 1])))


def full_correlation(spec: Spectrum, fd: FermiData) -> CorrelationFull:
    """Projector onto the filled modes, ``sum_{k<=K} v_k v_k^H``.

    Entry (m, n) is ``phi_m(k) conj(phi_n(k))`` summed over filled k, i.e. the
    expectation value <c_n^dag c_m>. For real chains this is symmetric and the
    orientation does not matter; for complex hoppings this is the orientation
    that commutes with the Heun operator.
    """
    if not 0 <= fd.K < spec.size:
        raise ValueError(f"Fermi index {fd.K} outside 0..{spec.size - 1}")
    filled = spec.vectors[:, : fd.K + 1]
    entries = filled @ filled.conj().T
    if not np.iscomplexobj(entries) or not np.any(entries.imag):
        entries = np.real(entries)
    return CorrelationFull(entries)


def chop(cf: CorrelationFull, ell: int) -> CorrelationChopped:
    """Leading ``(ell+1)`` block: correlations restricted to sites ``0..ell``."""
    ell = int(ell)
    if not 0 <= ell < cf.sites:
        raise ValueError(f"ell={ell} outside 0..{cf.sites - 1}")
    return CorrelationChopped(cf.entries[: ell + 1, : ell + 1].copy(), ell)


def projector_identity_check(cf: CorrelationFull, cc: CorrelationChopped) -> float:
    """Max deviation between ``pi1 C pi1`` (leading block) and the chopped matrix."""
    pi1 = np.zeros((cf.sites, cf.sites))
    pi1[np.arange(cc.ell + 1), np.arange(cc.ell + 1)] = 1.0
    compressed = pi1 @ cf.entries @ pi1
    block = compressed[: cc.ell + 1, : cc.ell + 1]
    outside = np.abs(compressed).copy()
    outside[: cc.ell + 1, : cc.ell + 1] = 0.0
    return float(max(np.max(np.abs(block - cc.entries)), np.max(outside)))
