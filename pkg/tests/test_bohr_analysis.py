import math

import numpy as np
import pytest

from apspectra import (
    InvalidRange,
    MeanValueEstimate,
    NotConverged,
    TrigPolynomial,
    ZetaTruncation,
    bohr_coefficient,
    bohr_mean,
    scan_spectrum,
    windowed_means,
    zeta_to_trig,
)
from apspectra.bohr_analysis import _local_maxima
from tests.conftest import random_polynomial

SQRT2 = math.sqrt(2.0)
TWO_TERM = TrigPolynomial([(1.0, 3.0), (SQRT2, 2.0)])


# -- bohr_mean ----------------------------------------------------------------


def test_mean_of_constant_is_exact_and_immediate():
    est = bohr_mean(TrigPolynomial([(0.0, 2.5 + 1.0j)]))
    assert est.converged
    assert len(est.windows) == 2  # settled at the first comparison
    assert est.value == pytest.approx(2.5 + 1.0j, rel=5e-15)


def test_mean_of_oscillation_follows_closed_form():
    est = bohr_mean(TrigPolynomial([(1.0, 1.0)]), tolerance=1e-3)
    for T, value in est.windows:
        exact = (np.exp(1j * T) - 1.0) / (1j * T)
        assert value == pytest.approx(exact, abs=1e-12)
    assert est.windows[-1][0] >= 1024.0
    assert abs(est.value) <= 0.002


def test_mean_offset_independence_example():
    tol = 1e-3
    at0 = bohr_mean(TWO_TERM, a=0.0, tolerance=tol)
    at77 = bohr_mean(TWO_TERM, a=7.7, tolerance=tol)
    assert at0.converged and at77.converged
    assert abs(at0.value) <= tol * 1.01
    assert abs(at77.value) <= tol * 1.01
    assert abs(at0.value - at77.value) <= 2 * tol


def test_mean_trace_is_strictly_increasing_in_T():
    est = bohr_mean(TWO_TERM, tolerance=1e-3)
    lengths = [t for t, _ in est.windows]
    assert all(b > a for a, b in zip(lengths, lengths[1:]))


def test_mean_not_converged_carries_partial_trace():
    slow = TrigPolynomial([(1.0, 1.0), (1.0 + 1e-9, 1.0)])
    with pytest.raises(NotConverged) as info:
        bohr_coefficient(slow, 1.0, tolerance=1e-6, max_doublings=4)
    est = info.value.estimate
    assert not est.converged
    assert len(est.windows) == 5


def test_mean_parameter_validation():
    for kwargs in (
        {"T_initial": 0.0},
        {"growth": 1.0},
        {"tolerance": 0.0},
        {"max_doublings": -1},
    ):
        with pytest.raises(ValueError):
            bohr_mean(TWO_TERM, **kwargs)


def test_estimate_invariants_enforced():
    with pytest.raises(ValueError):
        MeanValueEstimate(0j, (), True, 1e-4)
    with pytest.raises(ValueError):
        MeanValueEstimate(0j, ((2.0, 0j), (1.0, 0j)), True, 1e-4)


# -- bohr_coefficient ---------------------------------------------------------


def test_coefficient_self_demodulation_is_exact():
    est = bohr_coefficient(TrigPolynomial([(2.0, 1.0)]), 2.0)
    assert est.converged
    assert est.value == pytest.approx(1.0, abs=1e-13)


def test_coefficient_cross_term_averages_out():
    est = bohr_coefficient(TrigPolynomial([(2.0, 1.0)]), 3.0, tolerance=1e-4)
    assert abs(est.value) <= 2e-4


def test_coefficient_planted_recovery():
    est = bohr_coefficient(TWO_TERM, SQRT2, tolerance=1e-4)
    assert est.value == pytest.approx(2.0, abs=1e-3)


def test_coefficient_linearity(rng):
    tol = 1e-4
    p = random_polynomial(rng, n_terms=(2, 3), mag_range=(0.5, 1.5), min_gap=0.7)
    q = random_polynomial(rng, n_terms=(2, 3), mag_range=(0.5, 1.5), min_gap=0.7)
    alpha, beta = 1.5 - 0.5j, -0.75j
    combo = p.scale(alpha) + q.scale(beta)
    for lam in list(p.frequencies[:2]) + list(q.frequencies[:2]):
        lhs = windowed_means(combo, [lam], tolerance=tol)[0].value
        rhs = alpha * windowed_means(p, [lam], tolerance=tol)[0].value
        rhs += beta * windowed_means(q, [lam], tolerance=tol)[0].value
        assert abs(lhs - rhs) <= 2 * tol * (1.0 + abs(lhs))


def test_coefficient_derivative_relation(rng):
    tol = 1e-4
    for _ in range(5):
        p = random_polynomial(rng, n_terms=(2, 4), freq_range=(-3.0, 3.0),
                              min_gap=0.5, mag_range=(0.5, 2.0), min_abs_freq=0.3)
        dp = p.differentiate()
        for lam in p.frequencies:
            a_f = windowed_means(p, [lam], tolerance=tol)[0].value
            a_df = windowed_means(dp, [lam], tolerance=tol)[0].value
            target = 1j * lam * a_f
            assert abs(a_df - target) <= 5 * tol * (1.0 + abs(target))


def test_coefficient_far_from_spectrum_is_small():
    tol = 1e-4
    est = bohr_coefficient(TWO_TERM, 3.3, tolerance=tol)
    assert abs(est.value) <= 2 * tol


# -- scan_spectrum ------------------------------------------------------------


def test_scan_recovers_two_planted_lines():
    est = scan_spectrum(TWO_TERM, (0.0, 3.0), 0.01, 0.5)
    assert len(est.exponents) == 2
    first, second = est.exponents
    assert first.frequency == pytest.approx(1.0, abs=1e-3)
    assert second.frequency == pytest.approx(SQRT2, abs=1e-3)
    assert first.coefficient == pytest.approx(3.0, abs=3e-2)
    assert second.coefficient == pytest.approx(2.0, abs=2e-2)


def test_scan_zero_polynomial_is_empty():
    est = scan_spectrum(TrigPolynomial(), (0.0, 3.0), 0.01, 0.5)
    assert est.exponents == ()
    assert len(est.grid_frequencies) == 301


def test_scan_zeta_truncation_example():
    est = scan_spectrum(
        zeta_to_trig(ZetaTruncation(0.5, 3, 0)), (-1.2, 0.1), 0.005, 0.3
    )
    freqs = [e.frequency for e in est.exponents]
    mags = [e.magnitude for e in est.exponents]
    assert freqs == pytest.approx([-math.log(3), -math.log(2), 0.0], abs=1e-3)
    assert mags == pytest.approx([3**-0.5, 2**-0.5, 1.0], abs=1e-2)


def test_scan_respects_threshold_and_order():
    est = scan_spectrum(TWO_TERM, (0.0, 3.0), 0.01, 2.5)
    assert [e.frequency for e in est.exponents] == pytest.approx([1.0], abs=1e-3)
    assert all(e.magnitude >= est.threshold for e in est.exponents)


def test_scan_rejects_bad_ranges():
    with pytest.raises(InvalidRange):
        scan_spectrum(TWO_TERM, (3.0, 0.0), 0.01, 0.5)
    with pytest.raises(ValueError):
        scan_spectrum(TWO_TERM, (0.0, 3.0), -0.01, 0.5)
    with pytest.raises(ValueError):
        scan_spectrum(TWO_TERM, (0.0, 3.0), 0.01, 0.0)


def test_local_maxima_plateau_takes_leftmost():
    mags = np.array([0.0, 1.0, 1.0, 1.0, 0.0])
    assert _local_maxima(mags, 0.5) == [1]
    mags = np.array([2.0, 1.0, 0.0, 1.0])
    assert _local_maxima(mags, 0.5) == [0, 3]
