"""Brute-force Fock-space oracle for small chains.

Builds the many-body Hamiltonian on the full ``2**sites`` dimensional space
through a Jordan-Wigner representation, finds its ground state by dense
diagonalisation and traces out the sites beyond ``ell``. Nothing here uses
the correlation-matrix machinery, so it independently checks both the
Gaussian-state entropy formula and the correlation matrix itself.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

from .models import ChainSpec, build_hamiltonian

__all__ = ["annihilators", "manybody_hamiltonian", "ground_state", "reduced_density_matrix",
           "entanglement_entropy", "correlation_expectations"]

MAX_SITES = 12

_A = np.array([[0.0, 1.0], [0.0, 0.0]])  # |1> -> |0>, basis (|0>, |1>)
_Z = np.diag([1.0, -1.0])
_I = np.eye(2)


def annihilators(sites: int) -> list[np.ndarray]:
    if sites > MAX_SITES:
        raise ValueError(f"Fock space oracle limited to {MAX_SITES} sites")
    ops = []
    for n in range(sites):
        factors = [_Z] * n + [_A] + [_I] * (sites - n - 1)
        ops.append(reduce(np.kron, factors))
    return ops


def manybody_hamiltonian(chain: ChainSpec) -> np.ndarray:
    h = build_hamiltonian(chain).to_dense()
    c = annihilators(chain.sites)
    dim = 2**chain.sites
    out = np.zeros((dim, dim), dtype=complex)
    for m in range(chain.sites):
        for n in range(chain.sites):
            if h[m, n] != 0:
                out += h[m, n] * (c[m].T @ c[n])
    return out.real if not np.any(out.imag) else out


def ground_state(chain: ChainSpec) -> tuple[float, np.ndarray]:
    """Many-body ground energy and state vector."""
    values, vectors = np.linalg.eigh(manybody_hamiltonian(chain))
    if values.size > 1 and values[1] - values[0] < 1e-9 * max(1.0, abs(values[0])):
        raise ValueError("many-body ground state is degenerate")
    return float(values[0]), vectors[:, 0]


def reduced_density_matrix(psi: np.ndarray, sites: int, ell: int) -> np.ndarray:
    """Density matrix of sites ``0..ell``; site 0 is the leading tensor factor."""
    a = psi.reshape(2 ** (ell + 1), 2 ** (sites - ell - 1))
    return a @ a.conj().T


def entanglement_entropy(chain: ChainSpec, ell: int) -> float:
    _, psi = ground_state(chain)
    rho = reduced_density_matrix(psi, chain.sites, ell)
    p = np.linalg.eigvalsh(rho)
    p = p[p > 1e-300]
    return float(-np.sum(p * np.log(p)))


def correlation_expectations(chain: ChainSpec) -> np.ndarray:
    """Matrix of ``<c_m^dag c_n>`` in the many-body ground state."""
    _, psi = ground_state(chain)
    c = annihilators(chain.sites)
    g = np.empty((chain.sites, chain.sites), dtype=complex)
    for m in range(chain.sites):
        for n in range(chain.sites):
            g[m, n] = psi.conj() @ (c[m].T @ (c[n] @ psi))
    return g.real if not np.any(np.abs(g.imag) > 1e-14) else g
