import math

import numpy as np
import pytest

from detpi.measures import (
    LambdaSpectrum,
    binary_entropy,
    c_terms,
    concurrence,
    concurrence_assist,
    det_pt,
    eof_bounds,
    eof_curve,
    lambda_spectrum,
    lambda_spectrum_hermitian,
    measure_report,
    pair_spectra,
    pi_from_det,
    pi_hat,
    pi_measure,
    pi_one_vs_two,
    r_bound,
    r_bound_inverse,
    singlet_fraction,
    singlet_fraction_search,
    spin_flip,
    tangle,
)
from detpi.qmat import DensityMatrix, InvalidStateError
from detpi.relations import channel_pipeline
from detpi.states import (
    PQChannel,
    RngStream,
    bell_diagonal,
    bell_state,
    ghz_state,
    pq_unitary,
    product_state,
    random_density,
    random_pure,
    w_state,
    werner,
)

from conftest import random_local_unitary

I4 = DensityMatrix(np.eye(4) / 4, (2, 2))
PSI_PLUS = bell_state("psi+").density()

# Werner weight 1/2: the partial transpose has eigenvalues -1/8 and 3/8 (x3)
WERNER_HALF_DET = -27 / 4096
WERNER_HALF_PI = 27**0.25 / 4


def test_spin_flip_examples(random_states):
    np.testing.assert_allclose(spin_flip(I4), np.eye(4) / 4, atol=1e-16)
    np.testing.assert_allclose(spin_flip(PSI_PLUS), PSI_PLUS.mat, atol=1e-16)
    for rho in random_states:
        twice = spin_flip(DensityMatrix(spin_flip(rho), (2, 2)))
        np.testing.assert_allclose(twice, rho.mat, atol=1e-15)


def test_lambda_spectrum_bell_diagonal():
    p = [0.1, 0.4, 0.2, 0.3]
    np.testing.assert_allclose(lambda_spectrum(bell_diagonal(p)).lam, sorted(p, reverse=True), atol=1e-12)


def test_lambda_spectrum_special_states():
    assert lambda_spectrum(product_state("00").density()).lam == (0.0, 0.0, 0.0, 0.0)
    np.testing.assert_allclose(lambda_spectrum(PSI_PLUS).lam, [1, 0, 0, 0], atol=1e-14)


def test_lambda_spectrum_matches_hermitian_route(random_states):
    for rho in random_states:
        a = lambda_spectrum(rho).lam
        b = lambda_spectrum_hermitian(rho).lam
        assert max(abs(x - y) for x, y in zip(a, b)) <= 1e-8


def test_lambda_spectrum_rejects_wrong_dims():
    with pytest.raises(InvalidStateError):
        lambda_spectrum(ghz_state().density())


def test_lambda_spectrum_type_invariants():
    with pytest.raises(InvalidStateError):
        LambdaSpectrum((0.1, 0.2, 0.0, 0.0))
    with pytest.raises(InvalidStateError):
        LambdaSpectrum((1.1, 0.0, 0.0, 0.0))


def test_concurrence_examples():
    assert concurrence(PSI_PLUS) == pytest.approx(1, abs=1e-14)
    assert concurrence(I4) == 0
    assert concurrence(werner(0.5)) == pytest.approx(0.25, abs=1e-14)


def test_concurrence_werner_family():
    for w in np.linspace(0, 1, 21):
        assert concurrence(werner(w)) == pytest.approx(max(0.0, (3 * w - 1) / 2), abs=1e-12)


def test_concurrence_assist_examples(random_states):
    assert concurrence_assist(PSI_PLUS) == pytest.approx(1, abs=1e-14)
    assert concurrence_assist(I4) == pytest.approx(1, abs=1e-14)
    for rho in random_states:
        assert concurrence_assist(rho) >= concurrence(rho)


def test_pi_examples():
    assert det_pt(PSI_PLUS) == pytest.approx(-1 / 16, abs=1e-16)
    assert pi_measure(PSI_PLUS) == pytest.approx(1, abs=1e-14)
    assert det_pt(I4) == pytest.approx(1 / 256, abs=1e-18)
    assert pi_measure(I4) == 0
    assert det_pt(werner(0.5)) == pytest.approx(WERNER_HALF_DET, abs=1e-16)
    assert pi_measure(werner(0.5)) == pytest.approx(WERNER_HALF_PI, abs=1e-13)
    assert WERNER_HALF_PI == pytest.approx(0.75**0.75 * 0.25**0.25, abs=1e-15)


def test_pi_from_det():
    assert pi_from_det(0.0) == 0
    assert pi_from_det(1e-3) == 0
    assert pi_from_det(-1 / 16) == pytest.approx(1)


def test_pi_hat_bell_diagonal_formula():
    p1, p2, p3, p4 = p = (0.6, 0.2, 0.15, 0.05)
    expected = (abs(-p1 + p2 + p3 + p4) * (p1 - p2 + p3 + p4) * (p1 + p2 - p3 + p4) * (p1 + p2 + p3 - p4)) ** 0.25
    rho = bell_diagonal(p)
    assert pi_hat(rho) == pytest.approx(expected, abs=1e-12)
    assert pi_measure(rho) == pytest.approx(expected, abs=1e-12)


def test_pi_hat_separable_is_zero():
    for w in (0.0, 0.2, 1 / 3):
        assert pi_hat(werner(w)) <= 1e-12
    assert pi_hat(product_state("01").density()) == 0


def test_c_terms_definition():
    lam = LambdaSpectrum((0.5, 0.3, 0.1, 0.05))
    np.testing.assert_allclose(c_terms(lam), (0.05, 0.35, 0.75, 0.85), atol=1e-15)


def test_pure_states_pi_equals_concurrence():
    for i in range(100):
        rho = random_density(1, RngStream(17, i))
        assert abs(pi_measure(rho) - concurrence(rho)) <= 1e-7


def test_pi_one_vs_two_examples():
    assert pi_one_vs_two(ghz_state(), 1) == pytest.approx(1, abs=1e-15)
    assert pi_one_vs_two(product_state("000"), 1) == 0
    assert pi_one_vs_two(w_state(), 1) == pytest.approx(2 * math.sqrt(2 / 9), abs=1e-14)


def test_tangle_examples():
    assert tangle(ghz_state()) == pytest.approx(1, abs=1e-14)
    assert tangle(w_state()) == pytest.approx(0, abs=1e-14)
    assert tangle(product_state("000")) == 0


def test_tangle_reductions_agree():
    for i in range(200):
        spectra = pair_spectra(random_pure(3, RngStream(19, i)))
        vals = [s.tangle for s in spectra.values()]
        assert max(vals) - min(vals) <= 1e-8


def test_singlet_fraction_examples():
    assert singlet_fraction(PSI_PLUS) == pytest.approx(1, abs=1e-14)
    assert singlet_fraction(I4) == pytest.approx(0.25, abs=1e-15)
    swapped = channel_pipeline(pq_unitary(PQChannel(1, 0)))
    assert swapped.f_ab == pytest.approx(0.25, abs=1e-15)


def test_singlet_fraction_bell_diagonal_is_max_weight():
    for p in [(0.1, 0.2, 0.3, 0.4), (0.7, 0.1, 0.1, 0.1), (0.25, 0.25, 0.25, 0.25)]:
        assert singlet_fraction(bell_diagonal(p)) == pytest.approx(max(p), abs=1e-14)


def test_singlet_fraction_matches_search(random_states):
    gen = np.random.default_rng(3)
    for rho in random_states[:40]:
        f = singlet_fraction(rho)
        assert 0.25 - 1e-9 <= f <= 1 + 1e-9
        assert abs(f - singlet_fraction_search(rho, gen)) <= 1e-6


def test_entropy_and_eof_curve():
    assert binary_entropy(0.5) == 1
    assert binary_entropy(0) == binary_entropy(1) == 0
    assert eof_curve(0) == 0
    assert eof_curve(1) == 1


def test_r_bound_inverse_round_trip():
    assert r_bound(0) == 0 and r_bound(1) == 1
    for x in np.linspace(0, 1, 101):
        assert abs(r_bound(r_bound_inverse(x)) - x) <= 1e-10
    with pytest.raises(ValueError):
        r_bound_inverse(1.5)


def test_eof_bounds():
    assert eof_bounds(0) == (0, 0)
    lo, hi = eof_bounds(1)
    assert lo == pytest.approx(1) and hi == pytest.approx(1)
    for pi in np.linspace(0, 1, 41):
        lo, hi = eof_bounds(pi)
        assert lo <= hi + 1e-15
    with pytest.raises(ValueError):
        eof_bounds(-0.1)


def test_eof_bounds_bracket_true_value(random_states):
    for rho in random_states:
        e = eof_curve(concurrence(rho))
        lo, hi = eof_bounds(min(pi_measure(rho), 1.0))
        assert lo - 1e-9 <= e <= hi + 1e-9


def test_measure_report_ranges(random_states):
    for rho in random_states:
        rep = measure_report(rho)
        for name in ("concurrence", "assistance", "pi", "pi_hat", "fef"):
            assert -1e-12 <= getattr(rep, name) <= 1 + 1e-9
        assert -1 / 16 - 1e-9 <= rep.det_pt <= 0.25**4 + 1e-9
    d = measure_report(PSI_PLUS).as_dict()
    assert list(d)[-4:] == ["lambda1", "lambda2", "lambda3", "lambda4"]


def test_local_unitary_invariance(random_states):
    gen = np.random.default_rng(8)
    for rho in random_states:
        u = random_local_unitary(gen)
        rotated = DensityMatrix(u @ rho.mat @ u.conj().T, (2, 2))
        a = measure_report(rho).as_dict()
        b = measure_report(rotated).as_dict()
        for key in a:
            assert abs(a[key] - b[key]) <= 1e-9, key
