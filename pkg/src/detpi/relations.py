"""Identities and inequalities linking pi to concurrence, tangle and fidelity.

Each ``*_check`` function evaluates both sides of one relation on a concrete
input and returns them together with the residual, so Monte-Carlo drivers
only need to aggregate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import get_tolerances
from .measures import (
    LambdaSpectrum,
    NumericalError,
    lambda_spectrum,
    pair_spectra,
    pi_from_det,
    pi_measure,
    pi_one_vs_two,
    r_bound,
    singlet_fraction,
    tangle,
)
from .qmat import (
    DensityMatrix,
    InvalidStateError,
    PureState,
    determinant,
    eig_hermitian,
    partial_trace,
)
from .states import AcinParams, PQChannel, apply_channel_b, bell_state, dilate

__all__ = [
    "MonogamyReport",
    "ChannelValues",
    "ckw_check",
    "pi_monogamy_check",
    "monogamy_report",
    "pi_from_c_tau",
    "c_from_pi_tau",
    "geometric_mean_check",
    "tangle_from_determinants",
    "channel_closed_forms",
    "channel_pipeline",
    "fidelity_relation",
    "acin_closed_forms",
    "factorization_check_pure",
    "factorization_check_mixed",
    "bounds_check",
]


@dataclass(frozen=True)
class MonogamyReport:
    """Both monogamy relations for one three-qubit pure state and pivot qubit.

    ``*_ab`` is the pair (pivot, first other qubit), ``*_bc`` the pair
    (pivot, second other qubit), in ascending qubit order.
    """

    pivot: int
    c_ab: float
    c_bc: float
    tau: float
    c_pivot: float
    pi_ab: float
    pi_bc: float
    pi_pivot: float
    lhs_ckw: float
    lhs_pi: float
    residual_ckw: float
    residual_pi: float


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def monogamy_report(psi: PureState, pivot: int, spectra: dict | None = None) -> MonogamyReport:
    if psi.dims != (2, 2, 2):
        raise InvalidStateError(f"expected a three-qubit pure state, got dims {psi.dims}")
    if pivot not in (0, 1, 2):
        raise InvalidStateError(f"pivot must be 0, 1 or 2, got {pivot}")
    spectra = pair_spectra(psi) if spectra is None else spectra
    tau = tangle(psi, spectra)
    left, right = (k for k in range(3) if k != pivot)
    pab, pbc = _pair(pivot, left), _pair(pivot, right)
    c_ab, c_bc = spectra[pab].concurrence, spectra[pbc].concurrence
    pi_ab = pi_measure(partial_trace(psi, pab))
    pi_bc = pi_measure(partial_trace(psi, pbc))
    det_piv = determinant(partial_trace(psi, [pivot]).mat).real
    four_det = 4.0 * det_piv
    pi_piv = pi_one_vs_two(psi, pivot)
    lhs_ckw = c_ab**2 + c_bc**2 + tau
    half = tau / 2
    lhs_pi = math.sqrt(half * half + pi_ab**4) + math.sqrt(half * half + pi_bc**4)
    return MonogamyReport(
        pivot=pivot,
        c_ab=c_ab,
        c_bc=c_bc,
        tau=tau,
        c_pivot=math.sqrt(max(four_det, 0.0)),
        pi_ab=pi_ab,
        pi_bc=pi_bc,
        pi_pivot=pi_piv,
        lhs_ckw=lhs_ckw,
        lhs_pi=lhs_pi,
        residual_ckw=abs(lhs_ckw - four_det),
        residual_pi=abs(lhs_pi - pi_piv**2),
    )


def ckw_check(psi: PureState, pivot: int = 1) -> MonogamyReport:
    """Concurrence monogamy ``C_ab^2 + C_bc^2 + tau = 4 det rho_pivot``."""
    return monogamy_report(psi, pivot)


def pi_monogamy_check(psi: PureState, pivot: int = 1) -> MonogamyReport:
    """Determinant-measure monogamy ``sqrt(tau^2/4 + pi_ab^4) + sqrt(tau^2/4 + pi_bc^4) = pi_pivot^2``."""
    return monogamy_report(psi, pivot)


def pi_from_c_tau(c: float, tau: float) -> float:
    """``sqrt(C sqrt(C^2 + tau))``, valid on reductions of three-qubit pure states."""
    if c < 0 or tau < 0:
        raise ValueError(f"C and tau must be nonnegative, got {c}, {tau}")
    if c * c + tau > 1 + 1e-9:
        raise ValueError(f"C^2 + tau = {c * c + tau} exceeds 1")
    return math.sqrt(c * math.sqrt(c * c + tau))


def c_from_pi_tau(pi: float, tau: float) -> float:
    """Inverse of :func:`pi_from_c_tau` in the concurrence argument."""
    if pi < 0 or tau < 0:
        raise ValueError(f"pi and tau must be nonnegative, got {pi}, {tau}")
    pi4 = pi**4
    # C^2 = (sqrt(tau^2 + 4 pi^4) - tau) / 2, written without cancellation
    denom = math.sqrt(tau * tau + 4 * pi4) + tau
    c2 = 2 * pi4 / denom if denom > 0 else 0.0
    return math.sqrt(c2)


def geometric_mean_check(rho: DensityMatrix, lam: LambdaSpectrum | None = None) -> float:
    """``|pi - sqrt(C * C^a)|`` for a state of rank at most two.

    Also enforces the tightened bound ``pi <= sqrt(C)``; a violation beyond
    1e-9 raises :class:`NumericalError`.
    """
    tol = get_tolerances()
    w = eig_hermitian(rho.mat)
    if np.count_nonzero(w > tol.rank_two) > 2:
        raise InvalidStateError(f"state has rank > 2 (eigenvalues {w})")
    lam = lambda_spectrum(rho) if lam is None else lam
    c, ca = lam.concurrence, lam.assistance
    pi = pi_measure(rho)
    if pi > math.sqrt(c) + 1e-9:
        raise NumericalError(f"pi = {pi} exceeds sqrt(C) = {math.sqrt(c)}")
    return abs(pi - math.sqrt(c * ca))


def tangle_from_determinants(det_ab: float, det_bc: float, det_b: float) -> float:
    """Recover the tangle from three determinants.

    ``det_ab``, ``det_bc`` are determinants of the partially transposed
    pair reductions around the pivot, ``det_b`` the determinant of the
    pivot's one-qubit state.  Solves the determinant-measure monogamy
    relation for tau.
    """
    if det_b < -1e-12 or det_b > 0.25 + 1e-12:
        raise ValueError(f"det_b={det_b} outside [0, 1/4]")
    a = pi_from_det(det_ab) ** 4
    b = pi_from_det(det_bc) ** 4
    s = 4.0 * max(det_b, 0.0)
    if s < 1e-12:
        return 0.0
    x = ((s * s + b - a) / (2 * s)) ** 2 - b
    if x < -get_tolerances().tangle_clamp:
        raise ValueError(f"inconsistent determinants: tau^2/4 = {x:.3e} < 0")
    return 2.0 * math.sqrt(max(x, 0.0))


@dataclass(frozen=True)
class ChannelValues:
    pi_ab: float
    pi_ae: float
    f_ab: float


def channel_closed_forms(ch: PQChannel) -> ChannelValues:
    """Analytic pi_AB, pi_AE and singlet fraction for the (p, q) channel family."""
    p, q = ch.p, ch.q
    s = math.fsum((p, q, -1.0))
    if s < 0:
        f = (2 - p - q + 2 * math.sqrt((1 - p) * (1 - q))) / 4
    else:
        f = (p + q + 2 * math.sqrt(p * q)) / 4
    return ChannelValues(math.sqrt(abs(s)), math.sqrt(abs(p - q)), f)


def channel_pipeline(u_be: np.ndarray, input_state: PureState | None = None) -> ChannelValues:
    """Numerical route: dilate, reduce to AB and AE, measure."""
    psi = dilate(bell_state("psi+") if input_state is None else input_state, u_be)
    rho_ab = partial_trace(psi, (0, 1))
    rho_ae = partial_trace(psi, (0, 2))
    return ChannelValues(pi_measure(rho_ab), pi_measure(rho_ae), singlet_fraction(rho_ab))


def fidelity_relation(pi_ab: float, pi_ae: float) -> float:
    """Singlet fraction predicted from pi_AB and pi_AE."""
    a2 = pi_ab * pi_ab
    rad = 1 - pi_ae**4 / (a2 + 1) ** 2
    if rad < -1e-12:
        raise ValueError(f"invalid pair (pi_ab={pi_ab}, pi_ae={pi_ae}): radicand {rad:.3e}")
    return 0.25 * (1 + a2) * (1 + math.sqrt(max(rad, 0.0)))


def acin_closed_forms(params: AcinParams) -> tuple[float, float, float]:
    """``(lambda_1^2, lambda_2^2, det rho_AB^T_B)`` for the canonical three-qubit form.

    The fourth amplitude enters the spectrum squared.
    """
    g0, _, _, g3, g4 = params.gamma
    root = math.sqrt(g3 * g3 + g4 * g4)
    base = 2 * g3 * g3 + g4 * g4
    l1 = g0 * g0 * (base + 2 * g3 * root)
    l2 = g0 * g0 * (base - 2 * g3 * root)
    det = -(g0**4) * g3 * g3 * (g3 * g3 + g4 * g4)
    return l1, max(l2, 0.0), det


def factorization_check_pure(phi: PureState, u_be: np.ndarray) -> tuple[float, float, float]:
    """``(pi(1 x L(phi)), pi(1 x L(psi+)) pi(phi), |difference|)``."""
    lhs = pi_measure(apply_channel_b(phi, u_be))
    rhs = pi_measure(apply_channel_b(bell_state("psi+"), u_be)) * pi_measure(phi)
    return lhs, rhs, abs(lhs - rhs)


def factorization_check_mixed(rho: DensityMatrix, u_be: np.ndarray) -> tuple[float, float, float]:
    """``(pi(1 x L(rho)), pi(rho) pi(1 x L(psi+)), bound - lhs)``; slack should be >= 0."""
    lhs = pi_measure(apply_channel_b(rho, u_be))
    bound = pi_measure(rho) * pi_measure(apply_channel_b(bell_state("psi+"), u_be))
    return lhs, bound, bound - lhs


def bounds_check(c: float, pi: float) -> tuple[float, float]:
    """Violations of ``C <= pi <= r(C)``; both are <= 0 when the bounds hold."""
    return c - pi, pi - r_bound(c)
