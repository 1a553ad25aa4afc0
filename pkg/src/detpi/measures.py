"""Scalar entanglement quantities of two-qubit states.

The central object is the spin-flip spectrum ``lambda_1 >= ... >= lambda_4``:
square roots of the eigenvalues of ``rho * spin_flip(rho)``.  Concurrence,
concurrence of assistance, tangle and ``pi_hat`` are all read off it.  The
determinant measure ``pi`` is computed independently from the partial
transpose.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Union

import numpy as np
from scipy import optimize

from .config import get_tolerances
from .qmat import (
    DensityMatrix,
    InvalidStateError,
    PureState,
    as_density,
    determinant,
    eig_general,
    eig_hermitian,
    partial_trace,
    partial_transpose,
)

__all__ = [
    "NumericalError",
    "LambdaSpectrum",
    "MeasureReport",
    "SIGMA_Y",
    "YY",
    "MAGIC_BASIS",
    "spin_flip",
    "lambda_spectrum",
    "lambda_spectrum_hermitian",
    "concurrence",
    "concurrence_assist",
    "det_pt",
    "pi_measure",
    "pi_from_det",
    "c_terms",
    "pi_hat",
    "pi_one_vs_two",
    "pair_spectra",
    "tangle",
    "singlet_fraction",
    "singlet_fraction_search",
    "binary_entropy",
    "eof_curve",
    "r_bound",
    "r_bound_inverse",
    "eof_bounds",
    "measure_report",
]

StateLike = Union[DensityMatrix, PureState]

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
YY = np.kron(SIGMA_Y, SIGMA_Y)

_S = 1 / math.sqrt(2)
# columns: |phi+>, i|phi->, i|psi+>, |psi->
MAGIC_BASIS = np.array(
    [
        [_S, 1j * _S, 0, 0],
        [0, 0, 1j * _S, _S],
        [0, 0, 1j * _S, -_S],
        [_S, -1j * _S, 0, 0],
    ],
    dtype=complex,
)


class NumericalError(ArithmeticError):
    """A quantity that must be real/nonnegative came out otherwise."""


@dataclass(frozen=True)
class LambdaSpectrum:
    lam: tuple[float, float, float, float]

    def __post_init__(self):
        lam = tuple(float(x) for x in self.lam)
        if len(lam) != 4:
            raise InvalidStateError("spectrum needs four values")
        if any(lam[i] < lam[i + 1] for i in range(3)) or lam[3] < 0:
            raise InvalidStateError(f"spectrum must be descending and nonnegative: {lam}")
        if lam[0] > 1 + 1e-9:
            raise InvalidStateError(f"spectral value {lam[0]} exceeds 1")
        object.__setattr__(self, "lam", lam)

    def __iter__(self):
        return iter(self.lam)

    def __getitem__(self, i):
        return self.lam[i]

    @property
    def concurrence(self) -> float:
        l1, l2, l3, l4 = self.lam
        return max(0.0, l1 - l2 - l3 - l4)

    @property
    def assistance(self) -> float:
        return math.fsum(self.lam)

    @property
    def tangle(self) -> float:
        return 4.0 * self.lam[0] * self.lam[1]


@dataclass(frozen=True)
class MeasureReport:
    concurrence: float
    assistance: float
    pi: float
    pi_hat: float
    det_pt: float
    lam: LambdaSpectrum
    fef: float

    def as_dict(self) -> dict:
        d = asdict(self)
        lam = d.pop("lam")["lam"]
        for i, v in enumerate(lam, start=1):
            d[f"lambda{i}"] = v
        return d


def _two_qubit(rho: StateLike) -> DensityMatrix:
    rho = as_density(rho)
    if rho.dims != (2, 2):
        raise InvalidStateError(f"expected a two-qubit state, got dims {rho.dims}")
    return rho


def spin_flip(rho: StateLike) -> np.ndarray:
    """``(sy x sy) rho^* (sy x sy)`` with conjugation in the computational basis."""
    rho = _two_qubit(rho)
    return YY @ rho.mat.conj() @ YY


def lambda_spectrum(rho: StateLike) -> LambdaSpectrum:
    """Descending square roots of the eigenvalues of ``rho * spin_flip(rho)``.

    For rank-deficient ``rho`` the product is compressed onto the support
    of ``rho`` (numerical rank with relative threshold
    ``Tolerances.support_rtol``) before the eigensolve.

    Raises
    ------
    NumericalError
        If an eigenvalue has an imaginary part above 1e-8 or a real part
        below -1e-8.
    """
    rho = _two_qubit(rho)
    tol = get_tolerances()
    rho_tilde = spin_flip(rho)
    w, v = eig_hermitian(rho.mat, vectors=True)
    support = w > tol.support_rtol * max(w[-1], 0.0)
    if support.all():
        mu = eig_general(rho.mat @ rho_tilde)
    else:
        # same nonzero eigenvalues; the structural zeros stay exact
        # instead of coming back as sqrt(eps) noise
        vs = v[:, support]
        mu = eig_general(w[support][:, None] * (vs.conj().T @ rho_tilde @ vs))
        mu += [0j] * int((~support).sum())
    vals = []
    for z in mu:
        if abs(z.imag) > tol.spectrum_imag:
            raise NumericalError(f"eigenvalue {z} of rho*rho_tilde is not real")
        if z.real < -tol.spectrum_neg:
            raise NumericalError(f"eigenvalue {z} of rho*rho_tilde is negative")
        vals.append(math.sqrt(max(z.real, 0.0)))
    vals.sort(reverse=True)
    return LambdaSpectrum(tuple(vals))


def lambda_spectrum_hermitian(rho: StateLike) -> LambdaSpectrum:
    """Same spectrum through Hermitian/SVD routines only.

    The eigenvalues of ``sqrt(sqrt(rho) rho~ sqrt(rho))`` are the singular
    values of ``sqrt(rho~) sqrt(rho)``; the latter avoids a final square
    root of near-zero eigenvalues.
    """
    rho = _two_qubit(rho)
    w, v = eig_hermitian(rho.mat, vectors=True)
    w = np.where(w > get_tolerances().support_rtol * max(w[-1], 0.0), w, 0.0)
    s = (v * np.sqrt(w)) @ v.conj().T
    s_tilde = YY @ s.conj() @ YY
    sv = np.linalg.svd(s_tilde @ s, compute_uv=False)
    return LambdaSpectrum(tuple(sorted((min(x, 1.0) for x in sv), reverse=True)))


def concurrence(rho: StateLike) -> float:
    return lambda_spectrum(rho).concurrence


def concurrence_assist(rho: StateLike) -> float:
    return lambda_spectrum(rho).assistance


def det_pt(rho: StateLike, subsystem: int = 1) -> float:
    """Real determinant of the partial transpose."""
    d = determinant(partial_transpose(_two_qubit(rho), subsystem))
    if abs(d.imag) > get_tolerances().det_imag:
        raise NumericalError(f"determinant of a Hermitian matrix has imaginary part {d.imag:.3e}")
    return d.real


def pi_from_det(d: float) -> float:
    return 0.0 if d >= 0 else 2.0 * (-d) ** 0.25


def pi_measure(rho: StateLike) -> float:
    """Determinant measure: ``2 |det rho^T_B|^(1/4)`` when negative, else 0."""
    return pi_from_det(det_pt(rho))


def c_terms(lam: LambdaSpectrum) -> tuple[float, float, float, float]:
    l1, l2, l3, l4 = lam
    return (
        max(0.0, l1 - l2 - l3 - l4),
        l1 - l2 + l3 + l4,
        l1 + l2 - l3 + l4,
        l1 + l2 + l3 - l4,
    )


def pi_hat(rho: StateLike | LambdaSpectrum) -> float:
    lam = rho if isinstance(rho, LambdaSpectrum) else lambda_spectrum(rho)
    c1, c2, c3, c4 = c_terms(lam)
    return max(c1 * c2 * c3 * c4, 0.0) ** 0.25


def pi_one_vs_two(psi: PureState, pivot: int) -> float:
    """``2 sqrt(det rho_pivot)`` for a three-qubit pure state."""
    if psi.dims != (2, 2, 2):
        raise InvalidStateError(f"expected a three-qubit pure state, got dims {psi.dims}")
    d = determinant(partial_trace(psi, [pivot]).mat).real
    return 2.0 * math.sqrt(max(d, 0.0))


def pair_spectra(psi: PureState) -> dict[tuple[int, int], LambdaSpectrum]:
    """Spin-flip spectra of the three two-qubit reductions of a three-qubit pure state."""
    if psi.dims != (2, 2, 2):
        raise InvalidStateError(f"expected a three-qubit pure state, got dims {psi.dims}")
    return {pair: lambda_spectrum(partial_trace(psi, pair)) for pair in ((0, 1), (1, 2), (0, 2))}


def tangle(psi: PureState, spectra: dict | None = None) -> float:
    """Three-way tangle ``4 lambda_1 lambda_2``, read off the AB reduction.

    The three reductions must agree; a spread above the configured
    tolerance means the spectra are numerically unreliable.
    """
    spectra = pair_spectra(psi) if spectra is None else spectra
    vals = [s.tangle for s in spectra.values()]
    spread = max(vals) - min(vals)
    if spread > get_tolerances().tangle_agreement:
        raise NumericalError(f"tangle estimates from the three reductions disagree by {spread:.3e}")
    return spectra[(0, 1)].tangle


def singlet_fraction(rho: StateLike) -> float:
    """Fully entangled fraction ``max <Phi|rho|Phi>`` over maximally entangled ``Phi``.

    In the magic basis every maximally entangled state is a real unit
    vector up to phase, so the maximum is the top eigenvalue of the real
    part of the rotated matrix.
    """
    rho = _two_qubit(rho)
    m = MAGIC_BASIS.conj().T @ rho.mat @ MAGIC_BASIS
    return float(eig_hermitian(m.real)[-1])


def _su2(x: np.ndarray) -> np.ndarray:
    a, b, c = x
    n = math.sqrt(a * a + b * b + c * c)
    if n == 0:
        return np.eye(2, dtype=complex)
    h = np.array([[c, a - 1j * b], [a + 1j * b, -c]]) / n
    return math.cos(n) * np.eye(2) + 1j * math.sin(n) * h


def singlet_fraction_search(
    rho: StateLike, rng: np.random.Generator, n_samples: int = 256, n_refine: int = 4
) -> float:
    """Brute-force fully entangled fraction: sample ``(1 x U)|psi+>`` then refine locally.

    Independent of :func:`singlet_fraction`; used to cross-check it.
    """
    rho = _two_qubit(rho).mat

    # (1 x U)|psi+> = (|0> U|1> + |1> U|0>)/sqrt2: stack U's columns in swapped order
    def vec(u: np.ndarray) -> np.ndarray:
        return np.concatenate((u[..., :, 1], u[..., :, 0]), axis=-1) / math.sqrt(2)

    def overlap(u: np.ndarray) -> float:
        v = vec(u)
        return float((v.conj() @ rho @ v).real)

    z = rng.standard_normal((n_samples, 2, 2)) + 1j * rng.standard_normal((n_samples, 2, 2))
    qs = np.linalg.qr(z)[0]
    vs = vec(qs)
    vals = np.einsum("na,ab,nb->n", vs.conj(), rho, vs).real
    best = float(vals.max())
    for k in np.argsort(vals)[::-1][:n_refine]:
        u0 = qs[k]
        res = optimize.minimize(
            lambda x: -overlap(u0 @ _su2(x)),
            np.zeros(3),
            method="BFGS",
            options={"gtol": 1e-10},
        )
        best = max(best, -float(res.fun))
    return best


def binary_entropy(y: float) -> float:
    if y <= 0.0 or y >= 1.0:
        return 0.0
    return -(y * math.log2(y) + (1 - y) * math.log2(1 - y))


def eof_curve(x: float) -> float:
    """Entanglement of formation as a function of concurrence."""
    x = min(max(x, 0.0), 1.0)
    return binary_entropy((1 + math.sqrt(1 - x * x)) / 2)


def r_bound(x: float) -> float:
    """Upper bound on pi given concurrence: ``(x ((x+2)/3)^3)^(1/4)``."""
    return (x * ((x + 2) / 3) ** 3) ** 0.25


def r_bound_inverse(y: float) -> float:
    """Inverse of :func:`r_bound` on [0, 1] by bisection to full float precision."""
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"argument {y} outside [0, 1]")
    if y in (0.0, 1.0):
        return y
    lo, hi = 0.0, 1.0
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if r_bound(mid) < y:
            lo = mid
        else:
            hi = mid
    return lo if abs(r_bound(lo) - y) <= abs(r_bound(hi) - y) else hi


def eof_bounds(pi: float) -> tuple[float, float]:
    """``(E(r^-1(pi)), E(pi))``: bracket on the entanglement of formation."""
    if not 0.0 <= pi <= 1.0:
        raise ValueError(f"pi={pi} outside [0, 1]")
    return eof_curve(r_bound_inverse(pi)), eof_curve(pi)


def measure_report(rho: StateLike) -> MeasureReport:
    rho = _two_qubit(rho)
    lam = lambda_spectrum(rho)
    d = det_pt(rho)
    return MeasureReport(
        concurrence=lam.concurrence,
        assistance=lam.assistance,
        pi=pi_from_det(d),
        pi_hat=pi_hat(lam),
        det_pt=d,
        lam=lam,
        fef=singlet_fraction(rho),
    )
