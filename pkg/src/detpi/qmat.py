"""Small dense complex linear algebra for qubit systems (dimension <= 8).

Matrices are plain ``complex128`` numpy arrays.  Basis ordering is fixed:
the first tensor factor is the most significant index, so a two-qubit
basis reads ``|00>, |01>, |10>, |11>``.

The general (non-Hermitian) eigensolver and the determinant are written
out here instead of delegated to LAPACK: the matrices are tiny and scalar
Python arithmetic is both fast enough and fully deterministic.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .config import get_tolerances

__all__ = [
    "ComplexMatrix",
    "InvalidStateError",
    "ConvergenceError",
    "PureState",
    "DensityMatrix",
    "as_density",
    "kron",
    "dagger",
    "partial_transpose",
    "partial_trace",
    "determinant",
    "eig_general",
    "eig_hermitian",
    "sqrt_psd",
    "MAX_DIM",
]

ComplexMatrix = np.ndarray
MAX_DIM = 8
_EPS = np.finfo(float).eps


class InvalidStateError(ValueError):
    """A state, matrix or parameter set violates its invariants."""


class ConvergenceError(ArithmeticError):
    """An iterative routine hit its iteration cap."""


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidStateError(f"expected a square matrix, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class PureState:
    """Normalized state vector over a list of tensor-factor dimensions."""

    amplitudes: np.ndarray
    dims: tuple[int, ...] = field(default=())

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        dims = tuple(int(d) for d in self.dims) or _qubit_dims(amp.size)
        if math.prod(dims) != amp.size:
            raise InvalidStateError(f"dims {dims} do not match {amp.size} amplitudes")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > get_tolerances().norm:
            raise InvalidStateError(f"state norm is {norm!r}, expected 1")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def normalized(cls, amplitudes, dims: Sequence[int] = ()) -> "PureState":
        amp = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(amp / np.linalg.norm(amp), tuple(dims))

    @property
    def n_factors(self) -> int:
        return len(self.dims)

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.projector(), self.dims)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix."""

    mat: np.ndarray
    dims: tuple[int, ...] = field(default=())

    def __post_init__(self):
        m = _as_matrix(self.mat).copy()
        dims = tuple(int(d) for d in self.dims) or _qubit_dims(m.shape[0])
        if math.prod(dims) != m.shape[0]:
            raise InvalidStateError(f"dims {dims} do not match matrix size {m.shape[0]}")
        tol = get_tolerances()
        herm_err = np.max(np.abs(m - m.conj().T))
        if herm_err > tol.hermitian:
            raise InvalidStateError(f"not Hermitian: max |rho - rho^dagger| = {herm_err:.3e}")
        tr = np.trace(m)
        if abs(tr - 1.0) > tol.trace:
            raise InvalidStateError(f"trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh(m)[0]
        if lo < -tol.psd:
            raise InvalidStateError(f"not positive semidefinite: min eigenvalue {lo:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def n_factors(self) -> int:
        return len(self.dims)


def _qubit_dims(size: int) -> tuple[int, ...]:
    n = size.bit_length() - 1
    if size < 2 or 1 << n != size:
        raise InvalidStateError(f"cannot infer qubit dims for size {size}")
    return (2,) * n


def as_density(state: Union[DensityMatrix, PureState]) -> DensityMatrix:
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, PureState):
        return state.density()
    raise TypeError(f"expected DensityMatrix or PureState, got {type(state).__name__}")


def dagger(m) -> np.ndarray:
    return np.asarray(m).conj().T


def kron(a, b) -> np.ndarray:
    """Tensor product with the first factor as the most significant index."""
    return np.kron(_as_matrix(a), _as_matrix(b))


def partial_transpose(rho: DensityMatrix, subsystem: int = 1) -> np.ndarray:
    """Transpose one factor of a two-qubit operator.

    ``subsystem=1`` (B) gives ``<i a|rho^T_B|j b> = <i b|rho|j a>``.
    The result is Hermitian but generally not positive, so it is returned
    as a raw matrix.
    """
    rho = as_density(rho)
    if rho.dims != (2, 2):
        raise InvalidStateError(f"partial transpose needs dims (2, 2), got {rho.dims}")
    if subsystem not in (0, 1):
        raise InvalidStateError(f"subsystem must be 0 or 1, got {subsystem}")
    t = rho.mat.reshape(2, 2, 2, 2)  # (i, a, j, b)
    if subsystem == 1:
        t = t.transpose(0, 3, 2, 1)
    else:
        t = t.transpose(2, 1, 0, 3)
    return np.ascontiguousarray(t.reshape(4, 4))


def partial_trace(state: Union[DensityMatrix, PureState], keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix over the factors listed in ``keep``.

    Kept factors stay in their original order.
    """
    keep = sorted(set(int(k) for k in keep))
    dims = state.dims
    n = len(dims)
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise InvalidStateError(f"invalid keep set {keep} for {n} factors")
    traced = [k for k in range(n) if k not in keep]
    kdims = tuple(dims[k] for k in keep)
    kd = math.prod(kdims)
    if isinstance(state, PureState):
        psi = state.amplitudes.reshape(dims).transpose(keep + traced).reshape(kd, -1)
        red = psi @ psi.conj().T
    else:
        rho = state.mat.reshape(dims + dims)
        letters = "abcdefghijklmnopqrstuvwxyz"
        row = list(letters[:n])
        col = list(letters[n : 2 * n])
        for k in traced:
            col[k] = row[k]
        out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
        red = np.einsum("".join(row) + "".join(col) + "->" + out, rho).reshape(kd, kd)
    red = 0.5 * (red + red.conj().T)
    return DensityMatrix(red, kdims)


def determinant(m) -> complex:
    """Determinant by LU factorization with partial pivoting."""
    a = _as_matrix(m).tolist()
    n = len(a)
    det = 1.0 + 0j
    for k in range(n):
        p = max(range(k, n), key=lambda r: abs(a[r][k]))
        if a[p][k] == 0:
            return 0j
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        piv = a[k][k]
        det *= piv
        rk = a[k]
        for r in range(k + 1, n):
            row = a[r]
            f = row[k] / piv
            if f:
                for c in range(k + 1, n):
                    row[c] -= f * rk[c]
    return complex(det)


def _hessenberg(a: list[list[complex]]) -> list[list[complex]]:
    """Householder reduction to upper Hessenberg form (in place)."""
    n = len(a)
    for k in range(n - 2):
        x = [a[i][k] for i in range(k + 1, n)]
        alpha = math.sqrt(sum(abs(v) ** 2 for v in x))
        if alpha == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        v = list(x)
        v[0] = x0 + phase * alpha
        vnorm2 = sum(abs(t) ** 2 for t in v)
        if vnorm2 == 0.0:
            continue
        beta = 2.0 / vnorm2
        # left: rows k+1.., all columns
        for j in range(k, n):
            s = sum(v[i].conjugate() * a[k + 1 + i][j] for i in range(len(v))) * beta
            if s:
                for i in range(len(v)):
                    a[k + 1 + i][j] -= v[i] * s
        # right: all rows, columns k+1..
        for i in range(n):
            row = a[i]
            s = sum(row[k + 1 + j] * v[j] for j in range(len(v))) * beta
            if s:
                for j in range(len(v)):
                    row[k + 1 + j] -= s * v[j].conjugate()
        for i in range(k + 2, n):
            a[i][k] = 0j
    return a


def _wilkinson_shift(a: complex, b: complex, c: complex, d: complex) -> complex:
    half_tr = 0.5 * (a + d)
    disc = cmath.sqrt(0.25 * (a - d) ** 2 + b * c)
    e1, e2 = half_tr + disc, half_tr - disc
    return e1 if abs(e1 - d) <= abs(e2 - d) else e2


def eig_general(m, max_sweeps: int | None = None) -> list[complex]:
    """All eigenvalues of a general complex matrix of dimension <= 8.

    Hessenberg reduction followed by single-shift complex QR iteration with
    Wilkinson shifts and deflation.  The order of the result is not
    meaningful.

    Raises
    ------
    ConvergenceError
        If more than ``100 * dim`` QR sweeps are needed.
    """
    arr = _as_matrix(m)
    n = arr.shape[0]
    if n > MAX_DIM:
        raise ValueError(f"eig_general supports dim <= {MAX_DIM}, got {n}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    if n == 1:
        return [complex(arr[0, 0])]
    cap = 100 * n if max_sweeps is None else max_sweeps
    h = _hessenberg(arr.tolist())
    scale = max(sum(abs(v) for v in row) for row in h) or 1.0
    eigs: list[complex] = []
    hi = n - 1
    sweeps = 0
    since_deflation = 0
    while hi >= 0:
        if hi == 0:
            eigs.append(h[0][0])
            break
        # locate the start of the unreduced block ending at hi
        lo = hi
        while lo > 0:
            sub = abs(h[lo][lo - 1])
            ref = abs(h[lo][lo]) + abs(h[lo - 1][lo - 1])
            if sub <= _EPS * ref or sub <= _EPS * scale * 1e-3:
                h[lo][lo - 1] = 0j
                break
            lo -= 1
        if lo == hi:
            eigs.append(h[hi][hi])
            hi -= 1
            since_deflation = 0
            continue
        if lo == hi - 1:
            # 2x2 block solved directly
            a, b, c, d = h[lo][lo], h[lo][hi], h[hi][lo], h[hi][hi]
            half_tr = 0.5 * (a + d)
            disc = cmath.sqrt(0.25 * (a - d) ** 2 + b * c)
            e1 = half_tr + disc
            e2 = half_tr - disc
            # recover the smaller root from the determinant when cancellation bites
            det2 = a * d - b * c
            if abs(e1) >= abs(e2) and e1 != 0:
                e2 = det2 / e1
            elif e2 != 0:
                e1 = det2 / e2
            eigs.extend((e1, e2))
            hi -= 2
            since_deflation = 0
            continue
        sweeps += 1
        since_deflation += 1
        if sweeps > cap:
            raise ConvergenceError(f"QR iteration did not converge within {cap} sweeps")
        if since_deflation % 11 == 0:
            # exceptional shift to break cycles
            mu = h[hi][hi] + 0.75 * abs(h[hi][hi - 1]) * (1 + 1j)
        else:
            mu = _wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        _qr_sweep(h, lo, hi, mu)
    return [complex(e) for e in eigs]


def _qr_sweep(h: list[list[complex]], lo: int, hi: int, mu: complex) -> None:
    """One explicitly shifted QR step on the active window ``h[lo:hi+1, lo:hi+1]``."""
    for i in range(lo, hi + 1):
        h[i][i] -= mu
    rots = []
    for k in range(lo, hi):
        x, y = h[k][k], h[k + 1][k]
        r = math.hypot(abs(x), abs(y))
        if r == 0.0:
            c, s = 1.0 + 0j, 0j
        else:
            c, s = x / r, y / r
        cc, sc = c.conjugate(), s.conjugate()
        rk, rk1 = h[k], h[k + 1]
        for j in range(k, hi + 1):
            u, v = rk[j], rk1[j]
            rk[j] = cc * u + sc * v
            rk1[j] = -s * u + c * v
        rots.append((c, s))
    for idx, (c, s) in enumerate(rots):
        k = lo + idx
        sc, cc = s.conjugate(), c.conjugate()
        for i in range(lo, min(k + 2, hi) + 1):
            row = h[i]
            u, v = row[k], row[k + 1]
            row[k] = u * c + v * s
            row[k + 1] = -u * sc + v * cc
    for i in range(lo, hi + 1):
        h[i][i] += mu


def eig_hermitian(m, vectors: bool = False):
    """Ascending real eigenvalues (and optionally eigenvectors) of a Hermitian matrix."""
    a = _as_matrix(m)
    err = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if err > get_tolerances().hermitian:
        raise InvalidStateError(f"matrix is not Hermitian (max deviation {err:.3e})")
    a = 0.5 * (a + a.conj().T)
    if vectors:
        return np.linalg.eigh(a)
    return np.linalg.eigvalsh(a)


def sqrt_psd(m) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix."""
    w, v = eig_hermitian(m, vectors=True)
    if w[0] < -get_tolerances().psd:
        raise InvalidStateError(f"matrix has negative eigenvalue {w[0]:.3e}")
    root = np.sqrt(np.clip(w, 0.0, None))
    return (v * root) @ v.conj().T
