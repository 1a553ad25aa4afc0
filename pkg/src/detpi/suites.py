"""Seeded Monte-Carlo verification suites.

A suite is a pure function ``trial(seed, index) -> TrialRecord``.  Trial
``index`` draws from ``RngStream(seed, index)`` only, so a run is
reproducible and independent of how trials are spread over workers.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import measures as M
from . import relations as R
from .qmat import determinant, partial_trace
from .states import (
    PQChannel,
    RngStream,
    acin_state,
    haar_unitary,
    pq_unitary,
    random_acin_params,
    random_density,
    random_filter_state,
    random_pure,
)

__all__ = [
    "TrialRecord",
    "Suite",
    "SuiteResult",
    "SUITES",
    "GRID_STEPS",
    "run_suite",
    "run_trials",
    "scatter_trial",
]

GRID_STEPS = 20  # (p, q) grid of step 1/20
DETECTION_DET_BAND = 1e-12
DETECTION_C_BAND = 1e-9


@dataclass(frozen=True)
class TrialRecord:
    """One Monte-Carlo sample: reproduction data, computed values, residual."""

    index: int
    params: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    residual: float = 0.0

    def columns(self) -> list[str]:
        return ["trial", *self.params, *self.values, "residual"]

    def row(self) -> list:
        return [self.index, *self.params.values(), *self.values.values(), self.residual]


def _mixed_rank(index: int) -> int:
    return index % 4 + 1


def theorem1_trial(seed: int, index: int) -> TrialRecord:
    rank = _mixed_rank(index)
    rho = random_density(rank, RngStream(seed, index))
    lam = M.lambda_spectrum(rho)
    pi = M.pi_measure(rho)
    ph = M.pi_hat(lam)
    return TrialRecord(index, {"rank": rank}, {"pi": pi, "pi_hat": ph}, abs(pi - ph))


def bounds_trial(seed: int, index: int) -> TrialRecord:
    rank = _mixed_rank(index)
    rho = random_density(rank, RngStream(seed, index))
    c = M.concurrence(rho)
    pi = M.pi_measure(rho)
    lower, upper = R.bounds_check(c, pi)
    return TrialRecord(index, {"rank": rank}, {"C": c, "pi": pi}, max(0.0, lower, upper))


def detection_trial(seed: int, index: int) -> TrialRecord:
    rank = _mixed_rank(index)
    rho = random_density(rank, RngStream(seed, index))
    d = M.det_pt(rho)
    c = M.concurrence(rho)
    in_band = abs(d) < DETECTION_DET_BAND and c < DETECTION_C_BAND
    disagree = (d < 0) != (c > 0)
    return TrialRecord(
        index,
        {"rank": rank},
        {"det_pt": d, "C": c, "in_band": float(in_band)},
        float(disagree and not in_band),
    )


def monogamy_trial(seed: int, index: int) -> TrialRecord:
    psi = random_pure(3, RngStream(seed, index))
    spectra = M.pair_spectra(psi)
    reps = [R.monogamy_report(psi, pivot, spectra) for pivot in range(3)]
    values = {f"residual_pi_{r.pivot}": r.residual_pi for r in reps}
    values["tau"] = reps[0].tau
    return TrialRecord(index, {}, values, max(r.residual_pi for r in reps))


def ckw_trial(seed: int, index: int) -> TrialRecord:
    psi = random_pure(3, RngStream(seed, index))
    spectra = M.pair_spectra(psi)
    reps = [R.monogamy_report(psi, pivot, spectra) for pivot in range(3)]
    values = {f"residual_ckw_{r.pivot}": r.residual_ckw for r in reps}
    values["tau"] = reps[0].tau
    return TrialRecord(index, {}, values, max(r.residual_ckw for r in reps))


def geometric_mean_trial(seed: int, index: int) -> TrialRecord:
    psi = random_pure(3, RngStream(seed, index))
    spectra = M.pair_spectra(psi)
    tau = M.tangle(psi, spectra)
    lam = spectra[(0, 1)]
    c, ca = lam.concurrence, lam.assistance
    pi = M.pi_measure(partial_trace(psi, (0, 1)))
    r_ctau = abs(pi - R.pi_from_c_tau(c, tau))
    r_gm = abs(pi - math.sqrt(c * ca))
    r_sqrt = max(0.0, pi - math.sqrt(c))
    return TrialRecord(
        index,
        {},
        {"C_ab": c, "Ca_ab": ca, "tau": tau, "pi_ab": pi, "r_c_tau": r_ctau, "r_geo": r_gm, "r_sqrt": r_sqrt},
        max(r_ctau, r_gm, r_sqrt),
    )


def factorization_pure_trial(seed: int, index: int) -> TrialRecord:
    gen = RngStream(seed, index).generator()
    phi, a = random_filter_state(gen)
    u = haar_unitary(4, gen)
    lhs, rhs, res = R.factorization_check_pure(phi, u)
    return TrialRecord(index, {}, {"lhs": lhs, "rhs": rhs, "abs_det_a": abs(np.linalg.det(a))}, res)


def factorization_mixed_trial(seed: int, index: int) -> TrialRecord:
    gen = RngStream(seed, index).generator()
    rank = index % 3 + 2
    rho = random_density(rank, gen)
    u = haar_unitary(4, gen)
    lhs, bound, slack = R.factorization_check_mixed(rho, u)
    return TrialRecord(index, {"rank": rank}, {"lhs": lhs, "bound": bound, "slack": slack}, max(0.0, -slack))


def grid_point(index: int) -> PQChannel:
    n = GRID_STEPS + 1
    i, j = divmod(index, n)
    return PQChannel(i / GRID_STEPS, j / GRID_STEPS)


def channel_forms_trial(seed: int, index: int) -> TrialRecord:
    ch = grid_point(index)
    exact = R.channel_closed_forms(ch)
    num = R.channel_pipeline(pq_unitary(ch))
    diffs = {
        "d_pi_ab": abs(exact.pi_ab - num.pi_ab),
        "d_pi_ae": abs(exact.pi_ae - num.pi_ae),
        "d_f_ab": abs(exact.f_ab - num.f_ab),
    }
    return TrialRecord(index, {"p": ch.p, "q": ch.q}, diffs, max(diffs.values()))


def acin_trial(seed: int, index: int) -> TrialRecord:
    params = random_acin_params(RngStream(seed, index))
    rho_ab = partial_trace(acin_state(params), (0, 1))
    l1, l2, det = R.acin_closed_forms(params)
    lam = M.lambda_spectrum(rho_ab)
    diffs = {
        "d_lambda1_sq": abs(l1 - lam[0] ** 2),
        "d_lambda2_sq": abs(l2 - lam[1] ** 2),
        "d_det": abs(det - M.det_pt(rho_ab)),
    }
    params_d = {f"gamma{k}": g for k, g in enumerate(params.gamma)}
    params_d["phi"] = params.phi
    return TrialRecord(index, params_d, diffs, max(diffs.values()))


def tangle_recipe_trial(seed: int, index: int) -> TrialRecord:
    psi = random_pure(3, RngStream(seed, index))
    tau = M.tangle(psi)
    d_ab = M.det_pt(partial_trace(psi, (0, 1)))
    d_bc = M.det_pt(partial_trace(psi, (1, 2)))
    d_b = determinant(partial_trace(psi, [1]).mat).real
    rec = R.tangle_from_determinants(d_ab, d_bc, d_b)
    return TrialRecord(index, {}, {"det_ab": d_ab, "det_bc": d_bc, "det_b": d_b, "tau": tau, "tau_dets": rec}, abs(rec - tau))


def scatter_trial(seed: int, index: int) -> TrialRecord:
    """One Haar-random environment unitary acting on half of ``psi+``."""
    u = haar_unitary(4, RngStream(seed, index))
    v = R.channel_pipeline(u)
    pred = R.fidelity_relation(v.pi_ab, v.pi_ae)
    return TrialRecord(index, {}, {"F_AB": v.f_ab, "pi_AB": v.pi_ab, "pi_AE": v.pi_ae}, abs(v.f_ab - pred))


def fef_trial(seed: int, index: int) -> TrialRecord:
    gen = RngStream(seed, index).generator()
    rank = index % 4 + 1
    rho = random_density(rank, gen)
    f = M.singlet_fraction(rho)
    f_search = M.singlet_fraction_search(rho, gen)
    return TrialRecord(index, {"rank": rank}, {"F": f, "F_search": f_search}, abs(f - f_search))


@dataclass(frozen=True)
class Suite:
    name: str
    trial: Callable[[int, int], TrialRecord]
    default_samples: int
    max_samples: int | None = None
    description: str = ""


SUITES: dict[str, Suite] = {
    s.name: s
    for s in [
        Suite("theorem1", theorem1_trial, 10_000, description="|pi - pi_hat| on random states of rank 1-4"),
        Suite("bounds", bounds_trial, 10_000, description="violation of C <= pi <= r(C)"),
        Suite("detection", detection_trial, 10_000, description="det(rho^T) < 0 iff C > 0 outside the boundary band"),
        Suite("monogamy", monogamy_trial, 10_000, description="pi-monogamy residual, all pivots"),
        Suite("ckw", ckw_trial, 10_000, description="concurrence monogamy residual, all pivots"),
        Suite("geometric-mean", geometric_mean_trial, 10_000, description="pi_AB vs sqrt(C sqrt(C^2+tau)) and sqrt(C C^a)"),
        Suite("factorization-pure", factorization_pure_trial, 1_000, description="factorization law on pure inputs"),
        Suite("factorization-mixed", factorization_mixed_trial, 10_000, description="negative slack of the mixed-state inequality"),
        Suite("channel-forms", channel_forms_trial, (GRID_STEPS + 1) ** 2, (GRID_STEPS + 1) ** 2, "closed forms vs dilation on the (p, q) grid"),
        Suite("acin", acin_trial, 1_000, description="canonical-form spectrum and determinant vs brute force"),
        Suite("tangle-recipe", tangle_recipe_trial, 1_000, description="tangle recovered from three determinants"),
        Suite("fidelity", scatter_trial, 10_000, description="singlet fraction vs pi_AB, pi_AE relation for Haar channels"),
        Suite("fef", fef_trial, 1_000, description="magic-basis singlet fraction vs sampled maximization"),
    ]
}


@dataclass(frozen=True)
class SuiteResult:
    name: str
    seed: int
    records: list[TrialRecord]

    @property
    def samples(self) -> int:
        return len(self.records)

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.records), default=0.0)

    def violations(self, tol: float) -> list[TrialRecord]:
        return [r for r in self.records if not r.residual <= tol]

    def passed(self, tol: float) -> bool:
        return not self.violations(tol)


def _run_chunk(args) -> list[TrialRecord]:
    trial, seed, indices = args
    return [trial(seed, i) for i in indices]


def run_trials(trial: Callable[[int, int], TrialRecord], samples: int, seed: int, workers: int = 1) -> list[TrialRecord]:
    """Run ``trial`` for indices ``0..samples-1``; output is in index order."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if workers <= 1 or samples < 2 * workers:
        return [trial(seed, i) for i in range(samples)]
    n_chunks = workers * 4
    chunks = [range(k, samples, n_chunks) for k in range(n_chunks)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_chunk, [(trial, seed, c) for c in chunks]))
    records = [r for part in parts for r in part]
    records.sort(key=lambda r: r.index)
    return records


def resolve_workers(threads: int | str | None) -> int:
    if threads in (None, "auto"):
        return os.cpu_count() or 1
    return max(1, int(threads))


def run_suite(name: str, samples: int | None = None, seed: int = 42, workers: int = 1) -> SuiteResult:
    try:
        suite = SUITES[name]
    except KeyError:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    n = suite.default_samples if samples is None else samples
    if suite.max_samples is not None:
        n = min(n, suite.max_samples)
    return SuiteResult(name, seed, run_trials(suite.trial, n, seed, workers))
