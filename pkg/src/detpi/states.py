"""State and channel constructors, plus seeded samplers.

Everything random takes an :class:`RngStream`; a stream is fully determined
by ``(seed, index)`` so trial ``i`` of any run draws the same numbers no
matter how trials are scheduled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import get_tolerances
from .qmat import (
    DensityMatrix,
    InvalidStateError,
    PureState,
    as_density,
    dagger,
    determinant,
    kron,
)

__all__ = [
    "AcinParams",
    "PQChannel",
    "RngStream",
    "BELL_KINDS",
    "bell_state",
    "bell_diagonal",
    "werner",
    "ghz_state",
    "w_state",
    "product_state",
    "acin_state",
    "random_acin_params",
    "haar_unitary",
    "ginibre",
    "random_density",
    "random_pure",
    "random_filter_state",
    "pq_unitary",
    "dilate",
    "apply_channel_b",
    "local_filter",
    "is_unitary",
]

SQ2 = 1.0 / math.sqrt(2.0)
BELL_KINDS = ("psi+", "psi-", "phi+", "phi-")


@dataclass(frozen=True)
class RngStream:
    """Counter-style random stream: ``index`` selects a child of ``seed``."""

    seed: int
    index: int

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed) & (2**64 - 1), spawn_key=(int(self.index),))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class AcinParams:
    """Canonical five-amplitude form of a three-qubit pure state."""

    gamma: tuple[float, float, float, float, float]
    phi: float = 0.0

    def __post_init__(self):
        g = tuple(float(x) for x in self.gamma)
        if len(g) != 5:
            raise InvalidStateError(f"need five amplitudes, got {len(g)}")
        if any(x < 0 for x in g):
            raise InvalidStateError(f"amplitudes must be nonnegative: {g}")
        if abs(math.fsum(x * x for x in g) - 1.0) > get_tolerances().acin_norm:
            raise InvalidStateError("squared amplitudes must sum to 1")
        # closed interval: both endpoints of the phase range are accepted
        if not 0.0 <= self.phi <= math.pi:
            raise InvalidStateError(f"phase {self.phi} outside [0, pi]")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "phi", float(self.phi))


@dataclass(frozen=True)
class PQChannel:
    p: float
    q: float

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InvalidStateError(f"{name}={v} outside [0, 1]")


def bell_state(kind: str) -> PureState:
    """``psi+-`` = (|01> +- |10>)/sqrt2, ``phi+-`` = (|00> +- |11>)/sqrt2."""
    amps = {
        "psi+": (0, SQ2, SQ2, 0),
        "psi-": (0, SQ2, -SQ2, 0),
        "phi+": (SQ2, 0, 0, SQ2),
        "phi-": (SQ2, 0, 0, -SQ2),
    }
    try:
        return PureState(np.array(amps[kind], dtype=complex), (2, 2))
    except KeyError:
        raise InvalidStateError(f"unknown Bell state {kind!r}; expected one of {BELL_KINDS}") from None


def bell_diagonal(p: Sequence[float]) -> DensityMatrix:
    """Mixture ``p1 psi+ + p2 psi- + p3 phi+ + p4 phi-``."""
    p = [float(x) for x in p]
    if len(p) != 4 or any(x < 0 for x in p):
        raise InvalidStateError(f"need four nonnegative weights, got {p}")
    if abs(math.fsum(p) - 1.0) > get_tolerances().prob_sum:
        raise InvalidStateError(f"weights sum to {math.fsum(p)!r}, expected 1")
    rho = sum(w * bell_state(k).projector() for w, k in zip(p, BELL_KINDS))
    return DensityMatrix(rho, (2, 2))


def werner(weight: float) -> DensityMatrix:
    """``weight * psi+ + (1 - weight) * I/4``."""
    w = float(weight)
    return bell_diagonal([(1 + 3 * w) / 4, (1 - w) / 4, (1 - w) / 4, (1 - w) / 4])


def ghz_state() -> PureState:
    amp = np.zeros(8, dtype=complex)
    amp[0] = amp[7] = SQ2
    return PureState(amp, (2, 2, 2))


def w_state() -> PureState:
    amp = np.zeros(8, dtype=complex)
    amp[[1, 2, 4]] = 1 / math.sqrt(3)
    return PureState(amp, (2, 2, 2))


def product_state(bits: str) -> PureState:
    amp = np.zeros(2 ** len(bits), dtype=complex)
    amp[int(bits, 2)] = 1.0
    return PureState(amp, (2,) * len(bits))


def acin_state(params: AcinParams) -> PureState:
    g0, g1, g2, g3, g4 = params.gamma
    amp = np.zeros(8, dtype=complex)
    amp[0b000] = g0
    amp[0b100] = g1 * np.exp(1j * params.phi)
    amp[0b101] = g2
    amp[0b110] = g3
    amp[0b111] = g4
    # renormalize away the rounding left after the 1e-12 check
    return PureState(amp / np.linalg.norm(amp), (2, 2, 2))


def random_acin_params(rng: RngStream) -> AcinParams:
    gen = rng.generator()
    g = np.abs(gen.standard_normal(5))
    g /= np.linalg.norm(g)
    return AcinParams(tuple(g), float(gen.uniform(0.0, math.pi)))


def _complex_normal(gen: np.random.Generator, shape) -> np.ndarray:
    return (gen.standard_normal(shape) + 1j * gen.standard_normal(shape)) / math.sqrt(2.0)


def ginibre(shape, rng: RngStream | np.random.Generator) -> np.ndarray:
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    return _complex_normal(gen, shape)


def haar_unitary(dim: int, rng: RngStream | np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary: QR of a Ginibre matrix with R's diagonal phases removed."""
    if dim not in (2, 4):
        raise ValueError(f"haar_unitary supports dim 2 or 4, got {dim}")
    z = ginibre((dim, dim), rng)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_density(rank: int, rng: RngStream | np.random.Generator) -> DensityMatrix:
    """Two-qubit state ``G G^dagger / tr`` from a 4 x rank Ginibre draw."""
    if not 1 <= rank <= 4:
        raise ValueError(f"rank must be in 1..4, got {rank}")
    g = ginibre((4, rank), rng)
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return DensityMatrix(0.5 * (rho + rho.conj().T), (2, 2))


def random_pure(n_qubits: int, rng: RngStream | np.random.Generator) -> PureState:
    """Uniform (Haar) random pure state of ``n_qubits`` qubits."""
    v = ginibre(2**n_qubits, rng)
    return PureState(v / np.linalg.norm(v), (2,) * n_qubits)


def random_filter_state(rng: RngStream | np.random.Generator) -> tuple[PureState, np.ndarray]:
    """Draw ``A`` with ``tr(A^dagger A) = 2`` and return ``((A x I)|psi+>, A)``."""
    a = ginibre((2, 2), rng)
    a *= math.sqrt(2.0 / np.trace(a.conj().T @ a).real)
    psi = kron(a, np.eye(2)) @ bell_state("psi+").amplitudes
    return PureState(psi / np.linalg.norm(psi), (2, 2)), a


def pq_unitary(ch: PQChannel) -> np.ndarray:
    """Two-qubit (B, E) unitary of the (p, q) channel family.

    Columns ``|00>`` and ``|10>`` are the defining mappings; ``|01>`` and
    ``|11>`` are completed as ``-sqrt(q)|00> + sqrt(1-q)|11>`` and
    ``-sqrt(p)|10> + sqrt(1-p)|01>``.
    """
    sp, sq = math.sqrt(ch.p), math.sqrt(ch.q)
    cp, cq = math.sqrt(1.0 - ch.p), math.sqrt(1.0 - ch.q)
    u = np.zeros((4, 4), dtype=complex)
    # column index = input basis state |b e>
    u[:, 0b00] = [cq, 0, 0, sq]
    u[:, 0b10] = [0, sp, cp, 0]
    u[:, 0b01] = [-sq, 0, 0, cq]
    u[:, 0b11] = [0, cp, -sp, 0]
    return u


def is_unitary(u, tol: float | None = None) -> bool:
    u = np.asarray(u, dtype=complex)
    tol = get_tolerances().unitary if tol is None else tol
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


def dilate(state: PureState, u_be: np.ndarray) -> PureState:
    """``(1_A x U_BE)(|state>_AB x |0>_E)`` as a three-qubit state A, B, E."""
    u_be = np.asarray(u_be, dtype=complex)
    if u_be.shape != (4, 4) or not is_unitary(u_be):
        raise InvalidStateError("u_be must be a 4x4 unitary")
    if state.dims != (2, 2):
        raise InvalidStateError(f"input must be a two-qubit state, got dims {state.dims}")
    env0 = np.array([1.0, 0.0], dtype=complex)
    psi = kron(np.eye(2), u_be) @ np.kron(state.amplitudes, env0)
    return PureState(psi, (2, 2, 2))


def apply_channel_b(rho: DensityMatrix | PureState, u_be: np.ndarray) -> DensityMatrix:
    """Act on qubit B of a two-qubit state with the channel dilated by ``u_be``.

    The environment starts in ``|0>`` and is traced out afterwards.
    """
    rho = as_density(rho)
    u_be = np.asarray(u_be, dtype=complex)
    if u_be.shape != (4, 4) or not is_unitary(u_be):
        raise InvalidStateError("u_be must be a 4x4 unitary")
    # only the |.0>_E columns matter: Kraus operators K_e = <e|U|0>
    iso = u_be[:, [0b00, 0b10]]  # (b' e', b)
    kraus = iso.reshape(2, 2, 2).transpose(1, 0, 2)  # (e', b', b)
    out = np.zeros((4, 4), dtype=complex)
    for k in kraus:
        op = np.kron(np.eye(2), k)
        out += op @ rho.mat @ op.conj().T
    out = 0.5 * (out + out.conj().T)
    return DensityMatrix(out / np.trace(out).real, (2, 2))


def local_filter(rho: DensityMatrix, a: np.ndarray, b: np.ndarray) -> tuple[DensityMatrix, float]:
    """Apply ``A x B`` and renormalize; return the new state and success probability."""
    tol = get_tolerances()
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    for name, f in (("a", a), ("b", b)):
        if f.shape != (2, 2) or abs(determinant(f)) < tol.singular_filter:
            raise InvalidStateError(f"filter {name} must be a non-singular 2x2 matrix")
    ab = kron(a, b)
    out = ab @ as_density(rho).mat @ dagger(ab)
    p = float(np.trace(out).real)
    if p < tol.min_filter_prob:
        raise InvalidStateError(f"filter success probability {p:.3e} too small")
    out = out / p
    return DensityMatrix(0.5 * (out + out.conj().T), (2, 2)), p
