"""Free-fermion chain models and their bispectral partners.

A chain is given by on-site fields ``B_n`` and hoppings ``J_n``. The
one-particle Hamiltonian carries ``-B_n`` on its diagonal and ``J_n`` on the
(n, n+1) entry. Each built-in model also supplies the diagonal partner
operator (eigenvalues ``lambda_n``), the analytic spectrum when known, and the
partner's coefficients in the momentum basis (``dual_B``, ``dual_J``).

Three families are built in:

* ``su2_chain``: spin-s representation, finite chain of 2s+1 sites;
* ``su11_chain``: discrete series representation, semi-infinite chain
  truncated to a finite window;
* ``soq3_chain``: q-deformed so(3) at a root of unity; the uniform chain is
  the special case ``rep_dim = root_order - 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import ConfigError
from .spectral import HermitianTridiagonal, Spectrum

__all__ = [
    "ChainSpec",
    "BispectralData",
    "Su2Params",
    "Su11Params",
    "SoQ3Params",
    "TruncationConfig",
    "su2_chain",
    "su11_chain",
    "soq3_chain",
    "custom_chain",
    "build_model",
    "build_hamiltonian",
    "verify_bispectral",
    "BispectralReport",
]


@dataclass(frozen=True)
class ChainSpec:
    sites: int
    fields_B: np.ndarray
    hoppings_J: np.ndarray

    def __post_init__(self):
        if int(self.sites) < 1:
            raise ValueError("a chain needs at least one site")
        b = np.asarray(self.fields_B, dtype=float).reshape(-1)
        j = np.asarray(self.hoppings_J).reshape(-1)
        j = j.astype(complex) if np.iscomplexobj(j) else j.astype(float)
        if b.size != self.sites or j.size != self.sites - 1:
            raise ValueError(
                f"expected {self.sites} fields and {self.sites - 1} hoppings, "
                f"got {b.size} and {j.size}"
            )
        object.__setattr__(self, "sites", int(self.sites))
        object.__setattr__(self, "fields_B", b)
        object.__setattr__(self, "hoppings_J", j)

    @property
    def irreducible(self) -> bool:
        return bool(np.all(np.abs(self.hoppings_J) > 0))


@dataclass(frozen=True)
class BispectralData:
    """Diagonal partner eigenvalues plus optional analytic and dual data.

    ``lam`` has ``sites`` entries; ``lambda_next`` continues the model formula
    one site past the end, which the commutant needs when the subsystem is the
    whole chain.
    """

    lam: np.ndarray
    lambda_next: float
    analytic_omega: Optional[np.ndarray] = None
    dual_B: Optional[np.ndarray] = None
    dual_J: Optional[np.ndarray] = None

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float).reshape(-1)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "lambda_next", float(self.lambda_next))
        for name in ("analytic_omega", "dual_B", "dual_J"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, np.asarray(v, dtype=float).reshape(-1))
        if self.analytic_omega is not None and np.any(np.diff(self.analytic_omega) <= 0):
            raise ValueError("analytic spectrum must be strictly ascending")

    @property
    def lambda_extended(self) -> np.ndarray:
        """``lambda_0 .. lambda_sites`` (one slot past the last site)."""
        return np.append(self.lam, self.lambda_next)

    def min_lambda_gap(self) -> float:
        if self.lam.size < 2:
            return math.inf
        s = np.sort(self.lam)
        return float(np.min(np.diff(s)))


@dataclass(frozen=True)
class TruncationConfig:
    initial_size: int = 64
    growth_factor: float = 2.0
    window_tol: float = 1e-10
    max_size: int = 8192

    def __post_init__(self):
        if self.initial_size < 1 or self.max_size < 1:
            raise ValueError("truncation sizes must be positive")
        if self.initial_size > self.max_size:
            raise ValueError("initial_size exceeds max_size")
        if not self.growth_factor > 1:
            raise ValueError("growth_factor must exceed 1")
        if not self.window_tol > 0:
            raise ValueError("window_tol must be positive")

    def sizes(self):
        m = self.initial_size
        while m <= self.max_size:
            yield m
            nxt = int(math.ceil(m * self.growth_factor))
            m = max(nxt, m + 1)


@dataclass(frozen=True)
class Su2Params:
    two_s: int
    theta: float
    b: float

    def __post_init__(self):
        if int(self.two_s) != self.two_s or self.two_s < 1:
            raise ValueError("two_s must be a positive integer")

    @property
    def s(self) -> float:
        return self.two_s / 2


@dataclass(frozen=True)
class Su11Params:
    kappa: float
    theta: float
    b: float
    truncation: TruncationConfig = field(default_factory=TruncationConfig)

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")


@dataclass(frozen=True)
class SoQ3Params:
    root_order: int
    rep_dim: int
    b: float

    def __post_init__(self):
        if self.root_order < 2:
            raise ValueError("root_order must be at least 2")
        if not 1 <= self.rep_dim <= self.root_order - 1:
            raise ValueError("rep_dim must lie in 1 .. root_order - 1")
        # validates the square-root arguments eagerly
        _soq3_hopping_magnitude(self.root_order, self.rep_dim)

    @property
    def uniform(self) -> bool:
        return self.rep_dim == self.root_order - 2


ModelParams = Union[Su2Params, Su11Params, SoQ3Params]


def su2_chain(p: Su2Params) -> tuple[ChainSpec, BispectralData]:
    two_s, s = p.two_s, p.s
    n = np.arange(two_s + 1)
    c, si = math.cos(p.theta), math.sin(p.theta)
    fields = c * (n - s) + p.b
    root = np.sqrt((n[:-1] + 1) * (two_s - n[:-1]))
    hop = -0.5 * si * root
    lam = s - n
    data = BispectralData(
        lam=lam,
        lambda_next=s - (two_s + 1),
        analytic_omega=n - s - p.b,
        dual_B=-c * (n - s),
        dual_J=0.5 * si * root,
    )
    return ChainSpec(two_s + 1, fields, hop), data


def su11_chain(p: Su11Params, size: Optional[int] = None) -> tuple[ChainSpec, BispectralData]:
    """Truncated semi-infinite chain with ``size`` sites.

    ``size`` defaults to ``p.truncation.initial_size``. The analytic spectrum
    refers to the untruncated operator; only its lowest entries are
    reproduced by the finite window.
    """
    m = p.truncation.initial_size if size is None else int(size)
    if m < 1:
        raise ValueError("truncation size must be positive")
    kappa = p.kappa
    n = np.arange(m)
    ch, sh = math.cosh(p.theta), math.sinh(p.theta)
    lam = n + kappa / 2
    fields = -ch * lam - p.b
    root = np.sqrt((n[:-1] + 1) * (kappa + n[:-1]))
    data = BispectralData(
        lam=lam,
        lambda_next=m + kappa / 2,
        analytic_omega=n + kappa / 2 + p.b,
        dual_B=-ch * lam,
        dual_J=0.5 * sh * root,
    )
    return ChainSpec(m, fields, -0.5 * sh * root), data


def _soq3_hopping_magnitude(root_order: int, d: int) -> np.ndarray:
    big = root_order
    n = np.arange(d)
    num = np.sin(np.pi * (n + 1) / big) * np.sin(np.pi * (d - n) / big)
    den = np.cos(np.pi * (d - 2 * n - 2) / (2 * big)) * np.cos(np.pi * (d - 2 * n) / (2 * big))
    if np.any(np.abs(den) < 1e-300):
        raise ConfigError(f"vanishing cosine factor for root_order={root_order}, rep_dim={d}")
    ratio = num / den
    if np.any(ratio <= 0):
        raise ConfigError(
            f"non-positive square-root argument for root_order={root_order}, rep_dim={d}"
        )
    return np.sqrt(ratio)


def soq3_lambda(root_order: int, d: int, n) -> np.ndarray:
    return np.sin(np.pi * (2 * np.asarray(n, dtype=float) - d) / (2 * root_order))


def soq3_chain(p: SoQ3Params) -> tuple[ChainSpec, BispectralData]:
    d = p.rep_dim
    n = np.arange(d + 1)
    if p.uniform:
        mag = np.full(d, 1.0)
    else:
        mag = _soq3_hopping_magnitude(p.root_order, d)
    lam = soq3_lambda(p.root_order, d, n)
    data = BispectralData(
        lam=lam,
        lambda_next=float(soq3_lambda(p.root_order, d, d + 1)),
        analytic_omega=lam + p.b,
        dual_B=np.zeros(d + 1),
        dual_J=0.5 * mag,
    )
    return ChainSpec(d + 1, np.full(d + 1, -p.b), -0.5 * mag), data


def custom_chain(fields_B, hoppings_J, lam) -> tuple[ChainSpec, BispectralData]:
    """User-defined chain; ``lam`` must hold ``sites + 1`` partner eigenvalues."""
    chain = ChainSpec(len(fields_B), fields_B, hoppings_J)
    lam = np.asarray(lam, dtype=float)
    if lam.size != chain.sites + 1:
        raise ConfigError(
            f"custom model needs {chain.sites + 1} lambda values (one past the last site), "
            f"got {lam.size}"
        )
    return chain, BispectralData(lam=lam[:-1], lambda_next=lam[-1])


def build_model(params, size: Optional[int] = None) -> tuple[ChainSpec, BispectralData]:
    if isinstance(params, Su2Params):
        return su2_chain(params)
    if isinstance(params, Su11Params):
        return su11_chain(params, size)
    if isinstance(params, SoQ3Params):
        return soq3_chain(params)
    raise TypeError(f"unknown model parameters {type(params).__name__}")


def build_hamiltonian(c: ChainSpec) -> HermitianTridiagonal:
    return HermitianTridiagonal(-c.fields_B, c.hoppings_J)


@dataclass(frozen=True)
class BispectralReport:
    recurrence_residual: float
    difference_residual: float
    n_modes_checked: int


def verify_bispectral(
    c: ChainSpec,
    bd: BispectralData,
    spec: Spectrum,
    modes: Optional[int] = None,
) -> BispectralReport:
    """Residuals of the two three-term relations obeyed by the wavefunctions.

    The site recurrence uses ``(B, J)`` and the momentum-index recurrence uses
    ``(dual_B, dual_J)``. Both are scaled by the norm of the operator they
    represent. Eigenvector signs are free, so modes are re-signed in sequence
    to match the signs of ``dual_J`` before the second relation is checked.

    ``modes`` restricts both relations to the lowest modes and sites; for a
    truncated semi-infinite chain only those are converged.
    """
    if bd.dual_B is None or bd.dual_J is None:
        raise ValueError("dual couplings are required for the bispectral check")
    size = c.sites
    if size == 1:
        return BispectralReport(0.0, 0.0, 1)
    phi = np.array(spec.vectors, dtype=complex)
    omega = spec.values
    B, J = c.fields_B, c.hoppings_J.astype(complex)
    dB, dJ = bd.dual_B[:size], bd.dual_J[: size - 1].astype(complex)
    lam = bd.lam
    kmax = size if modes is None else min(int(modes), size)

    # site recurrence: omega_k phi_n = J_n phi_{n+1} - B_n phi_n + J*_{n-1} phi_{n-1}
    rhs = -B[:, None] * phi
    rhs[:-1] += J[:, None] * phi[1:]
    rhs[1:] += J.conj()[:, None] * phi[:-1]
    r1 = np.abs(omega[None, :] * phi - rhs)[:kmax, :kmax]
    h_scale = max(float(np.max(np.abs(B[:kmax]))) + 2 * float(np.max(np.abs(J[:kmax]), initial=0)), 1.0)

    # momentum recurrence, after fixing the relative sign of consecutive modes
    xk = phi.conj().T @ (lam[:, None] * phi)
    for k in range(size - 1):
        target = dJ[k]
        got = xk[k, k + 1]
        if abs(target) > 0 and abs(got) > 0:
            phase = (target / abs(target)) / (got / abs(got))
            phi[:, k + 1] *= phase
            xk[:, k + 1] *= phase
            xk[k + 1, :] *= np.conj(phase)
    # lambda_n phi_n(k) = dJ*_k phi_n(k+1) - dB_k phi_n(k) + dJ_{k-1} phi_n(k-1)
    rhs2 = -dB[None, :] * phi
    rhs2[:, :-1] += dJ.conj()[None, :] * phi[:, 1:]
    rhs2[:, 1:] += dJ[None, :] * phi[:, :-1]
    r2 = np.abs(lam[:, None] * phi - rhs2)[:kmax, :kmax]
    x_scale = max(float(np.max(np.abs(dB[:kmax]))) + 2 * float(np.max(np.abs(dJ[:kmax]), initial=0)), 1.0)
    return BispectralReport(float(r1.max()) / h_scale, float(r2.max()) / x_scale, kmax)
