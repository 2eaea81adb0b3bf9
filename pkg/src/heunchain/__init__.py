"""heunchain
=========

Entanglement spectra of inhomogeneous free-fermion chains through a
tridiagonal matrix that commutes with the chopped correlation matrix.

The chopped correlation matrix C of a free-fermion ground state has
eigenvalues piling up exponentially close to 0 and 1, which makes its direct
diagonalisation delicate. When the chain Hamiltonian has a diagonal
bispectral partner, the algebraic Heun operator built from the pair yields a
well-conditioned tridiagonal T with [T, C] = 0; diagonalising T gives the
eigenvectors of C.

Modules
-------
spectral
    Hermitian / symmetric tridiagonal eigensolvers and the dense oracle.
models
    su(2), su(1,1) and so_q(3) chains with their bispectral data.
ground_state
    Fermi filling, full and chopped correlation matrices.
heun
    Heun operator and the chopped commutant T.
entanglement
    Spectrum of C via T or directly, entanglement energies, entropy.
pipeline, config, results, cli
    Configuration-driven runs, su(1,1) truncation studies, benchmarks.
manybody
    Fock-space oracle for small chains.

Quick start::

    >>> import heunchain as hc
    >>> chain, data = hc.su2_chain(hc.Su2Params(two_s=2, theta=1.5707963267948966, b=0.5))
    >>> spec = hc.hamiltonian_spectrum(chain)
    >>> fd = hc.fermi_index(spec)
    >>> C = hc.chop(hc.full_correlation(spec, fd), 1)
    >>> T = hc.commutant_matrix((chain, data), fd, 1)
    >>> report = hc.c_spectrum_via_commutant(T, C)
"""

from .entanglement import (
    EntanglementReport,
    Method,
    c_spectrum_direct,
    c_spectrum_via_commutant,
    entanglement_hamiltonian_spectrum,
    nats_to_bits,
    von_neumann_entropy,
)
from .config import RunConfig, Tolerances, load_config, parse_config
from .errors import (
    CommutationError,
    ConfigError,
    ConvergenceError,
    DegenerateGroundStateError,
    EmptyGroundStateError,
    FullGroundStateError,
    HeunChainError,
    NonConvergenceError,
    NumericalError,
    PhysicsError,
)
from .ground_state import (
    CorrelationChopped,
    CorrelationFull,
    FermiData,
    chop,
    fermi_index,
    full_correlation,
    hamiltonian_spectrum,
    projector_identity_check,
)
from .heun import (
    CommutantT,
    HeunOperator,
    HeunParams,
    closed_form_T,
    commutant_matrix,
    commutator_residual,
    commuting_params,
    heun_full,
    momentum_coupling,
)
from .models import (
    BispectralData,
    ChainSpec,
    SoQ3Params,
    Su11Params,
    Su2Params,
    TruncationConfig,
    build_hamiltonian,
    build_model,
    custom_chain,
    soq3_chain,
    su2_chain,
    su11_chain,
    verify_bispectral,
)
from .pipeline import bench_conditioning, converge_su11, evaluate, run
from .results import ResultRow, rows_to_csv, rows_to_json
from .spectral import (
    HermitianTridiagonal,
    Spectrum,
    SymmetricTridiagonal,
    eig_dense_hermitian,
    eig_tridiagonal,
    gauge_to_real,
)

__version__ = "0.1.0"
