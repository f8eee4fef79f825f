import math

import numpy as np
import pytest

from apspectra import (
    InvalidRange,
    NotConverged,
    TrigPolynomial,
    ZetaTruncation,
    average_variation,
    total_variation,
    zeta_to_trig,
)
from tests.conftest import random_polynomial

SIN = TrigPolynomial([(1.0, -0.5j), (-1.0, 0.5j)])
TWO_PI = 2.0 * math.pi


class Sampled:
    """Signal with no usable spectral form: forces the partition path."""

    def __init__(self, fn):
        self._fn = fn

    def evaluate(self, x):
        return self._fn(np.asarray(x, dtype=np.float64))


# -- total_variation ----------------------------------------------------------


def test_sin_over_one_period_is_four():
    est = total_variation(SIN, 0.0, TWO_PI)
    assert est.method == "derivative_quadrature"
    assert est.value == pytest.approx(4.0, abs=1e-6)


def test_complex_exponential_variation_is_interval_length():
    est = total_variation(TrigPolynomial([(1.0, 1.0)]), 0.0, TWO_PI)
    assert est.value == pytest.approx(TWO_PI, abs=1e-6)


def test_constant_has_zero_variation():
    est = total_variation(TrigPolynomial([(0.0, 3.0 - 1j)]), 0.0, 10.0)
    assert est.value == 0.0


def test_degenerate_interval_is_zero():
    assert total_variation(SIN, 1.0, 1.0).value == 0.0


def test_reversed_interval_rejected():
    with pytest.raises(InvalidRange):
        total_variation(SIN, 1.0, 0.0)


def test_partition_trace_is_nondecreasing_and_agrees():
    est = total_variation(SIN, 0.0, TWO_PI, tolerance=1e-8)
    values = [s for _, s in est.refinement_trace]
    assert all(b >= a for a, b in zip(values, values[1:]))
    sizes = [n for n, _ in est.refinement_trace]
    assert all(b == 2 * a for a, b in zip(sizes, sizes[1:]))
    assert values[-1] == pytest.approx(est.value, rel=1e-7)


def test_additivity():
    tol = 1e-6
    a, b, c = 0.0, 2.3, 5.9
    whole = total_variation(SIN, a, c, tolerance=tol).value
    parts = (
        total_variation(SIN, a, b, tolerance=tol).value
        + total_variation(SIN, b, c, tolerance=tol).value
    )
    assert abs(whole - parts) <= 3 * tol * (1.0 + whole)


def test_scaling_by_complex_factor(rng):
    p = random_polynomial(rng, n_terms=(2, 4))
    base = total_variation(p, 0.0, 5.0).value
    for c in (2.0, -3.0, 1.5j, 2.0 - 1.0j):
        scaled = total_variation(p.scale(c), 0.0, 5.0).value
        assert scaled == pytest.approx(abs(c) * base, rel=1e-9)


def test_methods_agree_on_random_polynomials(rng):
    tol = 1e-5
    for _ in range(5):
        p = random_polynomial(rng, n_terms=(2, 4), mag_range=(0.5, 2.0))
        est = total_variation(p, 0.0, 4.0, tolerance=tol, max_refinements=20)
        partition_value = est.refinement_trace[-1][1]
        assert abs(partition_value - est.value) <= 10 * tol * (1.0 + est.value)


def test_partition_only_signal_uses_partition_method():
    est = total_variation(Sampled(np.sin), 0.0, TWO_PI, tolerance=1e-5)
    assert est.method == "partition_refinement"
    assert est.value == est.refinement_trace[-1][1]
    assert est.value == pytest.approx(4.0, abs=1e-3)


def test_partition_only_signal_can_fail_to_converge():
    with pytest.raises(NotConverged) as info:
        total_variation(Sampled(np.sin), 0.0, TWO_PI, tolerance=1e-12, max_refinements=3)
    partial = info.value.estimate
    assert partial.method == "partition_refinement"
    assert len(partial.refinement_trace) == 4


# -- average_variation --------------------------------------------------------


def test_average_variation_of_sin():
    est = average_variation(SIN, tolerance=1e-5)
    assert est.converged
    assert est.value == pytest.approx(2.0 / math.pi, abs=1e-4)


def test_average_variation_of_constant_is_zero():
    est = average_variation(TrigPolynomial([(0.0, 4.0)]))
    assert est.converged
    assert est.value == 0.0


def test_average_variation_zeta_two_terms():
    # 1 + 2^(-1/2) e^(-iy log 2): |f'| is the constant 2^(-1/2) log 2
    est = average_variation(zeta_to_trig(ZetaTruncation(0.5, 2, 0)), tolerance=1e-4)
    assert est.value == pytest.approx(2.0**-0.5 * math.log(2.0), abs=1e-3)


def test_average_variation_single_exponential_is_exact():
    p = TrigPolynomial([(2.3, 1.7)])
    est = average_variation(p, tolerance=1e-6)
    assert est.value == pytest.approx(1.7 * 2.3, rel=1e-12)


def test_periodic_consistency():
    tol = 1e-5
    avg = average_variation(SIN, tolerance=tol)
    per_period = total_variation(SIN, 0.0, TWO_PI).value / TWO_PI
    assert abs(avg.value - per_period) <= 2 * tol * (1.0 + per_period)


def test_average_variation_trace_invariants():
    est = average_variation(SIN, tolerance=1e-4)
    lengths = [t for t, _ in est.windows]
    assert all(b > a for a, b in zip(lengths, lengths[1:]))
    assert est.value == est.windows[-1][1]
