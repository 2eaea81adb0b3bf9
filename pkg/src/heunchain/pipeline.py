"""End-to-end computations driven by a :class:`~heunchain.config.RunConfig`.

chain -> spectrum -> Fermi filling -> correlation matrix -> chop ->
commutant -> spectrum of C -> entropy, for each requested ``ell`` and method.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import CustomModel, RunConfig, Tolerances
from .entanglement import (
    EntanglementReport,
    c_spectrum_direct,
    c_spectrum_via_commutant,
    nats_to_bits,
)
from .errors import CommutationError, ConfigError, HeunChainError, NonConvergenceError
from .ground_state import CorrelationChopped, chop, fermi_index, full_correlation, hamiltonian_spectrum
from .heun import CommutantT, HeunParams, commutant_matrix, commutator_residual
from .models import BispectralData, ChainSpec, SoQ3Params, Su11Params, build_model
from .results import ResultRow
from .spectral import SymmetricTridiagonal, eig_tridiagonal

__all__ = [
    "instantiate",
    "evaluate",
    "run",
    "converge_su11",
    "ConvergenceStep",
    "bench_conditioning",
    "BenchReport",
    "S1_DISCREPANCY_TOL",
]

log = logging.getLogger(__name__)

S1_DISCREPANCY_TOL = 1e-6
EDGE_TOL = 1e-12


def instantiate(model, size: Optional[int] = None) -> tuple[ChainSpec, BispectralData]:
    if isinstance(model, CustomModel):
        return model.chain, model.data
    return build_model(model, size)


def _fermi_for_commutant(model, bd, fd, zero_tol):
    # the truncated su(1,1) window uses the exact energies of the infinite chain
    if isinstance(model, Su11Params):
        return fermi_index(bd.analytic_omega, zero_tol)
    return fd


@dataclass
class Evaluation:
    """Everything computed for one chain and one subsystem size."""

    ell: int
    K: int
    sites: int
    correlation: CorrelationChopped
    commutant: Optional[CommutantT]
    reports: dict = field(default_factory=dict)
    times_ms: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)


def evaluate(model, ell: int, methods=("via_commutant",), tol: Tolerances = Tolerances(),
             size: Optional[int] = None) -> Evaluation:
    chain, bd = instantiate(model, size)
    if not 0 <= ell < chain.sites:
        raise ConfigError(f"ell={ell} outside 0..{chain.sites - 1}")
    t0 = time.perf_counter()
    spec = hamiltonian_spectrum(chain)
    fd = fermi_index(spec, tol.zero_tol)
    cc = chop(full_correlation(spec, fd), ell)
    shared_ms = (time.perf_counter() - t0) * 1e3
    ev = Evaluation(ell, fd.K, chain.sites, cc, None)
    if isinstance(model, Su11Params):
        fa = _fermi_for_commutant(model, bd, fd, tol.zero_tol)
        if fa.K != fd.K:
            ev.flags.setdefault("all", []).append(f"fermi_index_mismatch:{fd.K}!={fa.K}")
    for method in methods:
        flags = []
        t1 = time.perf_counter()
        if method == "via_commutant":
            ev.commutant = commutant_matrix((chain, bd), _fermi_for_commutant(model, bd, fd, tol.zero_tol), ell)
            try:
                rep = c_spectrum_via_commutant(ev.commutant, cc, tol.commutator_tol, tol.commutator_tol,
                                               tol.clamp_eps)
            except CommutationError as exc:
                log.warning("ell=%d: commutant refused (%s); falling back to direct", ell, exc)
                flags.append("commutant_refused")
                rep = c_spectrum_direct(cc, tol.clamp_eps)
        else:
            rep = c_spectrum_direct(cc, tol.clamp_eps)
        ev.reports[method] = rep
        ev.times_ms[method] = shared_ms + (time.perf_counter() - t1) * 1e3
        ev.flags[method] = flags + ev.flags.get("all", [])
    return ev


def _row(ev: Evaluation, method: str, cfg: RunConfig, uniform: bool) -> ResultRow:
    rep: EntanglementReport = ev.reports[method]
    s1 = nats_to_bits(rep.entropy) if cfg.bits else rep.entropy
    comm = None if math.isnan(rep.commutator_residual) else float(rep.commutator_residual)
    return ResultRow(
        ell=ev.ell,
        K=ev.K,
        S1=float(s1),
        commutator_residual=comm,
        max_rayleigh_residual=float(rep.max_residual),
        method=rep.method.value,
        wall_time_ms=float(ev.times_ms[method]),
        entropy_unit="bits" if cfg.bits else "nats",
        sites=ev.sites,
        uniform_chain=uniform,
        flags=list(ev.flags.get(method, [])),
        nu=[float(x) for x in rep.nu] if cfg.include_spectra else None,
        epsilon=[float(x) for x in rep.epsilon] if cfg.include_spectra else None,
    )


def _methods(cfg: RunConfig):
    return ("via_commutant", "direct") if cfg.method == "both" else (cfg.method,)


def run(cfg: RunConfig) -> list[ResultRow]:
    """Result rows in ascending ``ell``, via-commutant before direct."""
    model = cfg.model
    uniform = isinstance(model, SoQ3Params) and model.uniform
    methods = _methods(cfg)
    rows = []
    if isinstance(model, Su11Params):
        sites = None
        ells = cfg.ells()
    else:
        sites = instantiate(model)[0].sites
        ells = cfg.ells(sites)
    for ell in ells:
        try:
            if isinstance(model, Su11Params):
                _, trace = converge_su11(model, ell, tol=cfg.tolerances)
                ev = evaluate(model, ell, methods, cfg.tolerances, size=trace[-1].size)
            else:
                ev = evaluate(model, ell, methods, cfg.tolerances)
        except HeunChainError as exc:
            exc.args = (f"{exc} [model={model!r}, ell={ell}]",) + exc.args[1:]
            raise
        batch = [_row(ev, m, cfg, uniform) for m in methods]
        if len(batch) == 2:
            gap = abs(batch[0].S1 - batch[1].S1)
            if gap > S1_DISCREPANCY_TOL:
                for r in batch:
                    r.flags.append(f"s1_discrepancy:{gap!r}")
        rows.extend(batch)
    return rows


@dataclass(frozen=True)
class ConvergenceStep:
    size: int
    S1: float
    commutator_residual: float
    window_change: float
    S1_change: float


def converge_su11(p: Su11Params, ell: int, tol: Tolerances = Tolerances()):
    """Grow the su(1,1) truncation until the ``ell`` window of C and S1 settle.

    Returns ``(row, trace)`` where ``trace`` lists one :class:`ConvergenceStep`
    per truncation size tried. Convergence is declared at the first size whose
    window and entropy both moved by at most ``window_tol`` from the previous
    size; the first size therefore never converges on its own.
    """
    trunc = p.truncation
    if ell < 0 or 4 * (ell + 1) > trunc.initial_size:
        raise ConfigError(
            f"su(1,1) needs ell+1 <= initial_size/4 (ell={ell}, initial_size={trunc.initial_size})"
        )
    # empty/full/degenerate sea is decided by the exact energies before any work
    _, bd = build_model(p, trunc.initial_size)
    fermi_index(bd.analytic_omega, tol.zero_tol)
    trace: list[ConvergenceStep] = []
    prev_window = prev_s1 = None
    for m in trunc.sizes():
        ev = evaluate(p, ell, ("via_commutant",), tol, size=m)
        rep = ev.reports["via_commutant"]
        comm = commutator_residual(ev.commutant, ev.correlation)
        window = ev.correlation.entries
        if prev_window is None:
            dw = ds = math.inf
        else:
            dw = float(np.max(np.abs(window - prev_window)))
            ds = abs(rep.entropy - prev_s1)
        trace.append(ConvergenceStep(m, rep.entropy, comm, dw, ds))
        log.debug("su11 M=%d S1=%.17g comm=%.3e dC=%.3e dS=%.3e", m, rep.entropy, comm, dw, ds)
        mismatch = any(f.startswith("fermi_index_mismatch") for f in ev.flags["via_commutant"])
        if dw <= trunc.window_tol and ds <= trunc.window_tol and not mismatch:
            cfg = RunConfig(model=p, ell=ell, method="via_commutant", tolerances=tol)
            return _row(ev, "via_commutant", cfg, False), trace
        prev_window, prev_s1 = window, rep.entropy
    raise NonConvergenceError(
        f"su(1,1) window did not converge up to size {trunc.max_size}", trace
    )


@dataclass(frozen=True)
class BenchReport:
    sites: int
    ell: int
    K: int
    direct_edge_count: int
    direct_min_gap: float
    commutant_edge_count: int
    commutant_min_gap: float
    commutant_min_gap_rel: float
    commutant_norm: float
    commutator_residual: float
    max_rayleigh_residual: float
    direct_time_ms: float
    commutant_time_ms: float
    valid: bool
    nu_direct: np.ndarray
    nu_commutant: np.ndarray
    t_eigenvalues: np.ndarray

    def summary(self) -> dict:
        out = {}
        for k, v in self.__dict__.items():
            if isinstance(v, np.ndarray):
                continue
            out[k] = v.item() if isinstance(v, np.generic) else v
        return out

    def to_csv(self) -> str:
        lines = ["k,nu_direct,nu_via_commutant,edge_distance_direct,edge_distance_via_commutant,t_eigenvalue"]
        for k in range(self.nu_direct.size):
            a, b = float(self.nu_direct[k]), float(self.nu_commutant[k])
            lines.append(
                f"{k},{a!r},{b!r},{min(a, 1 - a)!r},{min(b, 1 - b)!r},{float(self.t_eigenvalues[k])!r}"
            )
        return "\n".join(lines) + "\n"


def _edge_count(nu) -> int:
    return int(np.sum(np.minimum(np.abs(nu), np.abs(1 - nu)) <= EDGE_TOL))


def bench_conditioning(model, ell: int, mu_shift: float = 0.0, tol: Tolerances = Tolerances(),
                       rayleigh_tol: float = 1e-6) -> BenchReport:
    """Compare the direct and the via-commutant spectra of C.

    ``mu_shift`` perturbs the Fermi-level parameter of the Heun operator; any
    nonzero value breaks commutation and serves as a negative control. The
    commutant result is computed regardless and the run is marked invalid
    when its largest Rayleigh residual exceeds ``rayleigh_tol``.
    """
    if isinstance(model, Su11Params):
        raise ConfigError("conditioning benchmark needs a finite exact model")
    chain, bd = instantiate(model)
    spec = hamiltonian_spectrum(chain)
    fd = fermi_index(spec, tol.zero_tol)
    cc = chop(full_correlation(spec, fd), ell)

    t0 = time.perf_counter()
    direct = c_spectrum_direct(cc, tol.clamp_eps)
    t_direct = (time.perf_counter() - t0) * 1e3

    t0 = time.perf_counter()
    T = commutant_matrix((chain, bd), fd, ell)
    if mu_shift:
        T = _shift_mu(T, bd, mu_shift)
    via = c_spectrum_via_commutant(T, cc, math.inf, math.inf, tol.clamp_eps)
    t_via = (time.perf_counter() - t0) * 1e3

    if isinstance(T.matrix, SymmetricTridiagonal):
        tvals = eig_tridiagonal(T.matrix).values
    else:
        tvals = np.linalg.eigvalsh(T.to_dense())
    tnorm = T.matrix.norm()
    tgap = float(np.min(np.diff(tvals))) if tvals.size > 1 else math.inf
    dvals = np.sort(direct.nu)
    dd = np.diff(dvals)
    dd = dd[dd > 0]
    return BenchReport(
        sites=chain.sites,
        ell=ell,
        K=fd.K,
        direct_edge_count=_edge_count(direct.nu),
        direct_min_gap=float(dd.min()) if dd.size else 0.0,
        commutant_edge_count=_edge_count(via.nu),
        commutant_min_gap=tgap,
        commutant_min_gap_rel=tgap / tnorm if tnorm > 0 else math.inf,
        commutant_norm=tnorm,
        commutator_residual=via.commutator_residual,
        max_rayleigh_residual=via.max_residual,
        direct_time_ms=t_direct,
        commutant_time_ms=t_via,
        valid=bool(via.max_residual <= rayleigh_tol and not T.near_reducible),
        nu_direct=direct.nu,
        nu_commutant=via.nu,
        t_eigenvalues=tvals,
    )


def _shift_mu(T: CommutantT, bd: BispectralData, shift: float) -> CommutantT:
    # mu enters the diagonal as mu * lambda_n
    lam = bd.lam[: T.ell + 1]
    mat = type(T.matrix)(T.matrix.diag + shift * lam, T.matrix.off)
    p = T.params
    return CommutantT(mat, HeunParams(p.tau, p.mu + shift, p.nu), T.ell)
