"""Determinant-based entanglement measure for two qubits.

``pi(rho) = 2 |det rho^T_B|^(1/4)`` when the partial transpose has negative
determinant and 0 otherwise, together with concurrence, tangle, singlet
fraction and the identities that tie them together.
"""
from .config import Tolerances, get_tolerances, use_tolerances
from .measures import (
    LambdaSpectrum,
    MeasureReport,
    NumericalError,
    concurrence,
    concurrence_assist,
    det_pt,
    eof_bounds,
    lambda_spectrum,
    measure_report,
    pi_hat,
    pi_measure,
    pi_one_vs_two,
    singlet_fraction,
    spin_flip,
    tangle,
)
from .qmat import (
    ConvergenceError,
    DensityMatrix,
    InvalidStateError,
    PureState,
    determinant,
    eig_general,
    eig_hermitian,
    kron,
    partial_trace,
    partial_transpose,
    sqrt_psd,
)
from .relations import (
    MonogamyReport,
    c_from_pi_tau,
    channel_closed_forms,
    channel_pipeline,
    ckw_check,
    factorization_check_mixed,
    factorization_check_pure,
    fidelity_relation,
    geometric_mean_check,
    monogamy_report,
    pi_from_c_tau,
    pi_monogamy_check,
    tangle_from_determinants,
)
from .states import (
    AcinParams,
    PQChannel,
    RngStream,
    acin_state,
    bell_diagonal,
    bell_state,
    dilate,
    haar_unitary,
    local_filter,
    pq_unitary,
    random_density,
)

__version__ = "0.1.0"
