"""Numerical tolerances shared by every module.

All thresholds live in one frozen record.  Code reads the active record with
:func:`get_tolerances`; callers that need a different regime (for example an
acceptance run that wants tighter checks) swap it temporarily::

    with use_tolerances(hermitian=1e-12):
        ...
"""
from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace
from typing import Iterator


@dataclass(frozen=True)
class Tolerances:
    # PureState
    norm: float = 1e-12
    # DensityMatrix
    hermitian: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-10
    # determinant of a Hermitian matrix must be real up to this
    det_imag: float = 1e-12
    # eigenvalues of rho below this fraction of the largest span its null space
    support_rtol: float = 4 * 2.220446049250313e-16
    # eigenvalues of rho * spin_flip(rho)
    spectrum_imag: float = 1e-8
    spectrum_neg: float = 1e-8
    # sum of squared canonical-form amplitudes
    acin_norm: float = 1e-12
    # probabilities in Bell-diagonal mixtures
    prob_sum: float = 1e-12
    # local filters
    singular_filter: float = 1e-12
    min_filter_prob: float = 1e-14
    # unitarity check for dilations
    unitary: float = 1e-10
    # agreement of the three tangle estimates; beyond this raise
    tangle_agreement: float = 1e-6
    # clamp band for the ten-copy tangle solver
    tangle_clamp: float = 1e-8
    # lambda_3, lambda_4 treated as zero (rank <= 2 check)
    rank_two: float = 1e-8


_DEFAULT = Tolerances()
_active: contextvars.ContextVar[Tolerances] = contextvars.ContextVar("detpi_tolerances", default=_DEFAULT)


def get_tolerances() -> Tolerances:
    return _active.get()


@contextlib.contextmanager
def use_tolerances(**overrides: float) -> Iterator[Tolerances]:
    """Temporarily replace fields of the active tolerance record."""
    new = replace(_active.get(), **overrides)
    token = _active.set(new)
    try:
        yield new
    finally:
        _active.reset(token)
