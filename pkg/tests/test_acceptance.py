"""Acceptance gate.

One test per headline criterion, run at full sample size and at the stated
tolerance.  Each test prints a single ``[PASS]``/``[FAIL]`` line (also with
``pytest -q``) before asserting, so a full run reads as a checklist.
"""
import math
import time
from collections import Counter

import numpy as np
import pytest

from detpi import measures as M
from detpi import relations as R
from detpi.cli import main
from detpi.qmat import partial_trace
from detpi.states import RngStream, random_pure
from detpi.suites import SUITES, run_suite, run_trials

SEED = 42

pytestmark = pytest.mark.slow


@pytest.fixture
def gate(capsys):
    def report(name: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, f"{name}: {detail}"

    return report


def _worst(records, key):
    return max(r.values[key] for r in records)


# --- shared random three-qubit suite ---------------------------------------------------------


def _three_qubit_trial(seed: int, index: int) -> dict:
    psi = random_pure(3, RngStream(seed, index))
    spectra = M.pair_spectra(psi)
    reps = [R.monogamy_report(psi, pivot, spectra) for pivot in range(3)]
    lam_ab = spectra[(0, 1)]
    c, ca, tau = lam_ab.concurrence, lam_ab.assistance, reps[0].tau
    pi_ab = M.pi_measure(partial_trace(psi, (0, 1)))
    return {
        "conc_mono": max(r.residual_ckw for r in reps),
        "pi_mono": max(r.residual_pi for r in reps),
        "c_tau": abs(pi_ab - R.pi_from_c_tau(c, tau)),
        "geo": abs(pi_ab - math.sqrt(c * ca)),
        "sqrt_c": pi_ab - math.sqrt(c),
    }


@pytest.fixture(scope="module")
def three_qubit_suite():
    rows = [_three_qubit_trial(SEED, i) for i in range(10_000)]
    return {k: np.array([r[k] for r in rows]) for k in rows[0]}


# --- criteria ------------------------------------------------------------------------------


def test_pi_equals_pi_hat(gate):
    t0 = time.perf_counter()
    res = run_suite("theorem1", 10_000, SEED, workers=1)
    elapsed = time.perf_counter() - t0
    ranks = Counter(r.params["rank"] for r in res.records)
    ok = res.max_residual <= 1e-7 and elapsed < 10.0 and ranks == {1: 2500, 2: 2500, 3: 2500, 4: 2500}
    gate(
        "pi = pi_hat on random states",
        ok,
        f"10^4 states, ranks {dict(sorted(ranks.items()))}, max |pi - pi_hat| = {res.max_residual:.2e} "
        f"(tol 1e-7), {elapsed:.1f} s single-threaded (limit 10 s)",
    )


def test_concurrence_bounds(gate):
    res = run_suite("bounds", 10_000, SEED)
    lower = max(r.values["C"] - r.values["pi"] for r in res.records)
    upper = max(r.values["pi"] - M.r_bound(r.values["C"]) for r in res.records)
    gate(
        "C <= pi <= r(C)",
        lower <= 1e-9 and upper <= 1e-9,
        f"10^4 states, max(C - pi) = {lower:.2e}, max(pi - r(C)) = {upper:.2e} (tol 1e-9)",
    )


def test_monogamy_relations(gate, three_qubit_suite):
    conc = three_qubit_suite["conc_mono"].max()
    mono = three_qubit_suite["pi_mono"].max()
    gate(
        "Monogamy (concurrence and pi forms)",
        conc <= 1e-7 and mono <= 1e-7,
        f"10^4 states x 3 pivots, max concurrence-monogamy residual = {conc:.2e}, max pi-monogamy residual = {mono:.2e} (tol 1e-7)",
    )


def test_pi_c_tau_and_geometric_mean(gate, three_qubit_suite):
    c_tau = three_qubit_suite["c_tau"].max()
    geo = three_qubit_suite["geo"].max()
    sqrt_c = three_qubit_suite["sqrt_c"].max()
    gate(
        "pi from (C, tau), geometric mean, pi <= sqrt(C)",
        c_tau <= 1e-7 and geo <= 1e-7 and sqrt_c <= 1e-9,
        f"10^4 AB reductions, max |pi - sqrt(C sqrt(C^2+tau))| = {c_tau:.2e}, "
        f"max |pi - sqrt(C C^a)| = {geo:.2e} (tol 1e-7), max(pi - sqrt C) = {sqrt_c:.2e} (tol 1e-9)",
    )


def test_channel_closed_forms(gate):
    res = run_suite("channel-forms", seed=SEED)
    d = {k: _worst(res.records, k) for k in ("d_pi_ab", "d_pi_ae", "d_f_ab")}
    bad = res.violations(1e-9)
    where = ", ".join(f"({r.params['p']:g}, {r.params['q']:g})" for r in bad)
    gate(
        "Channel closed forms vs dilation",
        res.samples == 441 and not bad,
        f"{res.samples} grid points, max diff pi_AB = {d['d_pi_ab']:.2e}, pi_AE = {d['d_pi_ae']:.2e}, "
        f"F_AB = {d['d_f_ab']:.2e} (tol 1e-9); {len(bad)} violations" + (f" at {where}" if bad else ""),
    )


def test_scatter_experiment(gate, tmp_path):
    first, second = tmp_path / "first.csv", tmp_path / "second.csv"
    code = main(["scatter-channels", "--samples", "10000", "--seed", str(SEED), "--out", str(first)])
    main(["scatter-channels", "--samples", "10000", "--seed", str(SEED), "--out", str(second), "--threads", "2"])
    lines = first.read_text().splitlines()
    worst = max(float(line.rsplit(",", 1)[1]) for line in lines[1:])
    same = first.read_bytes() == second.read_bytes()
    gate(
        "Singlet-fraction scatter",
        code == 0 and len(lines) == 10_001 and worst <= 1e-7 and same,
        f"10^4 Haar channels, max |F - F(pi_AB, pi_AE)| = {worst:.2e} (tol 1e-7), "
        f"CSV byte-identical across runs and worker counts: {same}",
    )


def test_factorization_law(gate):
    pure = run_suite("factorization-pure", 1_000, SEED)
    mixed = run_suite("factorization-mixed", 10_000, SEED)
    min_slack = min(r.values["slack"] for r in mixed.records)
    n_bad = sum(r.values["slack"] < -1e-9 for r in mixed.records)
    gate(
        "Factorization law (pure equality, mixed inequality)",
        pure.max_residual <= 1e-7 and n_bad == 0,
        f"10^3 pure: max residual = {pure.max_residual:.2e} (tol 1e-7); "
        f"10^4 mixed: min slack = {min_slack:.2e}, {n_bad} below -1e-9",
    )


def test_tangle_from_determinants(gate):
    res = run_suite("tangle-recipe", 1_000, SEED)
    gate(
        "Tangle from three determinants",
        res.max_residual <= 1e-7,
        f"10^3 states, max |tau_dets - tau| = {res.max_residual:.2e} (tol 1e-7)",
    )


def test_canonical_form_closed_forms(gate):
    res = run_suite("acin", 1_000, SEED)
    d = {k: _worst(res.records, k) for k in ("d_lambda1_sq", "d_lambda2_sq", "d_det")}
    gate(
        "Canonical-form spectrum and determinant",
        res.max_residual <= 1e-8,
        f"10^3 parameter sets, max diff lambda1^2 = {d['d_lambda1_sq']:.2e}, lambda2^2 = {d['d_lambda2_sq']:.2e}, "
        f"det = {d['d_det']:.2e} (tol 1e-8)",
    )


def test_detection_equivalence(gate):
    res = run_suite("detection", 10_000, SEED)
    in_band = sum(r.values["in_band"] for r in res.records)
    disagreements = len(res.violations(0.0))
    gate(
        "det(rho^T) < 0 iff C > 0",
        disagreements == 0,
        f"10^4 states ({int(in_band)} inside the boundary band), {disagreements} disagreements",
    )


def test_fully_entangled_fraction(gate):
    res = run_trials(SUITES["fef"].trial, 1_000, SEED)
    worst = max(r.residual for r in res)
    gate(
        "Magic-basis FEF vs sampled maximization",
        worst <= 1e-6,
        f"10^3 states, max |F - F_search| = {worst:.2e} (tol 1e-6)",
    )
