"""Algebraic Heun operator and the tridiagonal commutant of the chopped correlation matrix.

For a chain Hamiltonian ``H`` and its diagonal partner ``X = diag(lambda)``
the Heun operator is

    T_hat = {X, H} + tau [X, H] + mu X + nu H,

tridiagonal in both the site and the momentum basis. With ``tau = 0``,
``mu = -(omega_K + omega_{K+1})`` and ``nu = -(lambda_ell + lambda_{ell+1})``
it leaves both the subsystem and the Fermi sea invariant, so its leading
``(ell+1)`` block commutes with the chopped correlation matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .ground_state import CorrelationChopped, FermiData
from .models import BispectralData, ChainSpec, SoQ3Params, Su11Params, Su2Params, build_hamiltonian
from .spectral import HermitianTridiagonal, Spectrum, SymmetricTridiagonal

__all__ = [
    "reference_scale",
    "HeunParams",
    "HeunOperator",
    "CommutantT",
    "heun_full",
    "commuting_params",
    "commutant_matrix",
    "closed_form_T",
    "commutator_residual",
    "momentum_coupling",
    "NEAR_REDUCIBLE_TOL",
]

NEAR_REDUCIBLE_TOL = 1e-12


@dataclass(frozen=True)
class HeunParams:
    tau: float
    mu: float
    nu: float


@dataclass(frozen=True)
class HeunOperator:
    """Tridiagonal ``T_hat`` on the whole chain.

    ``upper[m]`` is entry (m, m+1) and ``lower[m]`` entry (m+1, m). With
    ``tau != 0`` the operator is not Hermitian, hence the separate bands.
    """

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    def to_dense(self) -> np.ndarray:
        a = np.diag(self.diag.astype(complex))
        i = np.arange(self.diag.size - 1)
        a[i, i + 1] = self.upper
        a[i + 1, i] = self.lower
        if not np.any(a.imag):
            a = a.real
        return a

    def scale(self) -> float:
        return float(
            max(np.max(np.abs(self.diag)), np.max(np.abs(self.upper), initial=0.0),
                np.max(np.abs(self.lower), initial=0.0))
        )

    def as_hermitian(self) -> HermitianTridiagonal:
        if np.max(np.abs(self.lower - self.upper.conj()), initial=0.0) > 0:
            raise ValueError("Heun operator is not Hermitian (tau != 0)")
        return HermitianTridiagonal(np.real(self.diag), self.upper)


@dataclass(frozen=True)
class CommutantT:
    """Leading ``(ell+1)`` block of the commuting Heun operator.

    ``matrix`` is real symmetric for real chains and Hermitian tridiagonal
    when the hoppings are complex.
    """

    matrix: Union[SymmetricTridiagonal, HermitianTridiagonal]
    params: HeunParams
    ell: int

    @property
    def t(self) -> np.ndarray:
        return self.matrix.off

    @property
    def d(self) -> np.ndarray:
        return self.matrix.diag

    @property
    def near_reducible(self) -> bool:
        t = np.abs(self.t)
        if t.size == 0:
            return False
        top = float(t.max())
        return top == 0.0 or bool(np.any(t <= NEAR_REDUCIBLE_TOL * top))

    def to_dense(self) -> np.ndarray:
        return self.matrix.to_dense()


def heun_full(bd: BispectralData, c: ChainSpec, hp: HeunParams) -> HeunOperator:
    lam = bd.lambda_extended
    if lam.size < c.sites + 1:
        raise ValueError("lambda must cover sites 0..N+1")
    lam = lam[: c.sites + 1]
    B, J = c.fields_B, c.hoppings_J
    tau, mu, nu = hp.tau, hp.mu, hp.nu
    lo, hi = lam[:-2], lam[1:-1]
    upper = J * ((lo * (1 + tau) + hi * (1 - tau)) + nu)
    lower = np.conj(J) * ((lo * (1 - tau) + hi * (1 + tau)) + nu)
    diag = mu * lam[:-1] - 2 * B * lam[:-1] - nu * B
    return HeunOperator(lower, diag, upper)


def reference_scale(bd: BispectralData, c: ChainSpec) -> float:
    """``max|lambda| * ||H||``, the natural size of the bilinear operator.

    Used as a floor when relative errors of T are measured, since T and even
    the full Heun operator can vanish identically (two sites, ell=0).
    """
    lam = bd.lambda_extended[: c.sites + 1]
    return float(np.max(np.abs(lam)) * build_hamiltonian(c).norm())


def commuting_params(fd: FermiData, bd: BispectralData, ell: int) -> HeunParams:
    lam = bd.lambda_extended
    if not 0 <= ell < lam.size - 1:
        raise ValueError(f"ell={ell} outside 0..{lam.size - 2}")
    return HeunParams(0.0, -(fd.omega_K + fd.omega_K1), -(lam[ell] + lam[ell + 1]))


def _wrap(diag, off, params, ell) -> CommutantT:
    off = np.asarray(off)
    if np.iscomplexobj(off) and np.any(off.imag):
        mat = HermitianTridiagonal(diag, off)
    else:
        mat = SymmetricTridiagonal(diag, np.real(off))
    return CommutantT(mat, params, int(ell))


def commutant_matrix(model: tuple[ChainSpec, BispectralData], fd: FermiData, ell: int) -> CommutantT:
    """Chopped commutant from the generic entry formulas.

    ``t_n = J_n (lambda_n + lambda_{n+1} - lambda_ell - lambda_{ell+1})`` and
    ``d_n = -B_n (2 lambda_n - lambda_ell - lambda_{ell+1}) - lambda_n (omega_K + omega_{K+1})``.
    """
    chain, bd = model
    ell = int(ell)
    if not 0 <= ell < chain.sites:
        raise ValueError(f"ell={ell} outside 0..{chain.sites - 1}")
    lam = bd.lambda_extended
    edge = lam[ell] + lam[ell + 1]
    fermi = fd.omega_K + fd.omega_K1
    n = np.arange(ell + 1)
    t = chain.hoppings_J[:ell] * ((lam[n[:-1]] + lam[n[:-1] + 1]) - edge)
    d = -chain.fields_B[n] * (2 * lam[n] - edge) - lam[n] * fermi
    return _wrap(d, t, HeunParams(0.0, -fermi, -edge), ell)


def _su2_T(p: Su2Params, K: int, ell: int):
    s, two_s = p.s, p.two_s
    n = np.arange(ell + 1)
    m = n[:-1]
    t = math.sin(p.theta) * (m - ell) * np.sqrt((m + 1) * (two_s - m))
    d = (math.cos(p.theta) * (n - s) + p.b) * (2 * n - 2 * ell - 1) + (s - n) * (
        2 * s - 2 * K + 2 * p.b - 1
    )
    return d, t


def _su11_T(p: Su11Params, K: int, ell: int):
    kappa = p.kappa
    n = np.arange(ell + 1)
    m = n[:-1]
    t = -math.sinh(p.theta) * (m - ell) * np.sqrt((m + 1) * (kappa + m))
    d = (math.cosh(p.theta) * (n + kappa / 2) + p.b) * (2 * n - 2 * ell - 1) - (n + kappa / 2) * (
        kappa + 2 * K + 2 * p.b + 1
    )
    return d, t


def _soq3_T(p: SoQ3Params, K: int, ell: int):
    big, dd = p.root_order, p.rep_dim
    n = np.arange(ell + 1)
    m = n[:-1]
    c0 = 2 * math.cos(math.pi / (2 * big))
    root = np.sqrt(
        np.sin(np.pi * (m + 1) / big) * np.sin(np.pi * (dd - m) / big)
        / (np.cos(np.pi * (dd - 2 * m - 2) / (2 * big)) * np.cos(np.pi * (dd - 2 * m) / (2 * big)))
    )
    t = c0 * np.sin(np.pi * (ell - m) / (2 * big)) * np.cos(np.pi * (ell + m - dd + 1) / (2 * big)) * root
    d = -c0 * (
        p.b * math.sin(math.pi * (2 * ell - dd + 1) / (2 * big))
        + np.sin(np.pi * (2 * n - dd) / (2 * big)) * math.sin(math.pi * (2 * K - dd + 1) / (2 * big))
    )
    return d, t


def closed_form_T(model_params, fd: FermiData, ell: int) -> CommutantT:
    """Commutant from the per-model closed forms (independent of the generic path)."""
    ell = int(ell)
    if isinstance(model_params, Su2Params):
        sites = model_params.two_s + 1
        d, t = _su2_T(model_params, fd.K, ell)
        nu = -(model_params.two_s - 2 * ell - 1)
    elif isinstance(model_params, Su11Params):
        sites = None
        d, t = _su11_T(model_params, fd.K, ell)
        nu = -(2 * ell + 1 + model_params.kappa)
    elif isinstance(model_params, SoQ3Params):
        sites = model_params.rep_dim + 1
        d, t = _soq3_T(model_params, fd.K, ell)
        big, dd = model_params.root_order, model_params.rep_dim
        nu = -2 * math.cos(math.pi / (2 * big)) * math.sin(math.pi * (2 * ell + 1 - dd) / (2 * big))
    else:
        raise TypeError(f"no closed form for {type(model_params).__name__}")
    if ell < 0 or (sites is not None and ell >= sites):
        raise ValueError(f"ell={ell} outside the chain")
    return _wrap(d, t, HeunParams(0.0, -(fd.omega_K + fd.omega_K1), float(nu)), ell)


def commutator_residual(t: CommutantT, c: CorrelationChopped) -> float:
    """``||TC - CT||_F / (||T||_F ||C||_F + tiny)``."""
    tm = t.to_dense()
    cm = np.asarray(c.entries)
    if tm.shape != cm.shape:
        raise ValueError(f"size mismatch: T is {tm.shape}, C is {cm.shape}")
    comm = tm @ cm - cm @ tm
    denom = np.linalg.norm(tm) * np.linalg.norm(cm) + np.finfo(float).tiny
    return float(np.linalg.norm(comm) / denom)


def momentum_coupling(op: HeunOperator, spec: Spectrum, K: int) -> float:
    """Magnitude of the (K, K+1) entry of ``T_hat`` in the momentum basis."""
    v = spec.vectors
    a = op.to_dense()
    return float(abs(v[:, K].conj() @ a @ v[:, K + 1]))
