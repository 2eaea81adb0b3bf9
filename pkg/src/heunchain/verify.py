"""Invariant checks for one configured model, used by ``heunchain verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import CustomModel, RunConfig
from .entanglement import c_spectrum_direct, c_spectrum_via_commutant
from .errors import CommutationError
from .ground_state import chop, fermi_index, full_correlation, hamiltonian_spectrum, projector_identity_check
from .heun import (
    closed_form_T,
    commutant_matrix,
    commutator_residual,
    heun_full,
    momentum_coupling,
    reference_scale,
)
from .manybody import entanglement_entropy
from .models import Su11Params, verify_bispectral
from .pipeline import instantiate

__all__ = ["Check", "verify_config", "relative_entry_gap"]

MANYBODY_MAX_SITES = 8


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.threshold)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: {self.value:.3e} (<= {self.threshold:.1e})"


def relative_entry_gap(a, b, floor: float = 0.0) -> float:
    """Largest entrywise difference of two commutants, relative to their largest entry.

    ``floor`` bounds the scale from below, so a block that vanishes (as T can,
    for ell=0 at half filling) is compared against the operator it came from.
    """
    da, db = a.to_dense(), b.to_dense()
    scale = max(np.max(np.abs(da)), np.max(np.abs(db)), floor, np.finfo(float).tiny)
    return float(np.max(np.abs(da - db)) / scale)


def verify_config(cfg: RunConfig, seed: Optional[int] = None, extra_ells: int = 3) -> list[Check]:
    model = cfg.model
    semi_infinite = isinstance(model, Su11Params)
    size = None
    if semi_infinite:
        size = max(model.truncation.initial_size, 4 * (max(cfg.ells()) + 1), 256)
    chain, bd = instantiate(model, size)
    spec = hamiltonian_spectrum(chain)
    fd = fermi_index(spec, cfg.tolerances.zero_tol)
    cf = full_correlation(spec, fd)
    checks = []

    window = chain.sites // 8 if semi_infinite else chain.sites
    if bd.analytic_omega is not None:
        dev = np.max(np.abs(spec.values[:window] - bd.analytic_omega[:window]))
        checks.append(Check("analytic spectrum", float(dev), 1e-10 if not semi_infinite else 1e-8))
    if bd.dual_B is not None:
        rep = verify_bispectral(chain, bd, spec, modes=window if semi_infinite else None)
        checks.append(Check("site recurrence residual", rep.recurrence_residual, 1e-10))
        checks.append(Check("momentum recurrence residual", rep.difference_residual, 1e-10))
    repeats = np.sum(np.diff(np.sort(bd.lam)) <= 0)
    checks.append(Check("repeated lambda values", float(repeats), 0.0))

    ells = set(cfg.ells(None if semi_infinite else chain.sites))
    if seed is not None:
        rng = np.random.default_rng(seed)
        top = window // 4 if semi_infinite else chain.sites
        ells.update(int(x) for x in rng.integers(0, max(top, 1), size=extra_ells))
    fd_t = fermi_index(bd.analytic_omega, cfg.tolerances.zero_tol) if semi_infinite else fd
    comm_tol = 1e-8 if semi_infinite or isinstance(model, CustomModel) else 1e-12
    for ell in sorted(ells):
        cc = chop(cf, ell)
        tag = f"[ell={ell}]"
        checks.append(Check(f"projector identity {tag}", projector_identity_check(cf, cc), 0.0))
        T = commutant_matrix((chain, bd), fd_t, ell)
        checks.append(Check(f"commutator residual {tag}", commutator_residual(T, cc), comm_tol))
        full = heun_full(bd, chain, T.params)
        scale = max(full.scale(), reference_scale(bd, chain))
        if ell + 1 < chain.sites:
            checks.append(Check(f"block invariance, site basis {tag}",
                                abs(full.upper[ell]) / scale, 1e-14))
        if not semi_infinite:
            checks.append(Check(f"block invariance, momentum basis {tag}",
                                momentum_coupling(full, spec, fd.K) / scale, 1e-10))
        if not isinstance(model, CustomModel):
            cf_T = closed_form_T(model, fd_t, ell)
            checks.append(Check(f"closed form vs generic T {tag}", relative_entry_gap(cf_T, T, scale), 1e-12))
        direct = c_spectrum_direct(cc)
        try:
            via = c_spectrum_via_commutant(T, cc, 1e-8)
        except CommutationError:
            checks.append(Check(f"commutant route usable {tag}", math.inf, 0.0))
        else:
            checks.append(Check(f"nu agreement {tag}", float(np.max(np.abs(via.nu - direct.nu))), 1e-8))
            checks.append(Check(f"S1 agreement {tag}", abs(via.entropy - direct.entropy), 1e-8))
        if chain.sites <= MANYBODY_MAX_SITES:
            mb = entanglement_entropy(chain, ell)
            checks.append(Check(f"many-body entropy {tag}", abs(mb - direct.entropy), 1e-9))
    return checks
