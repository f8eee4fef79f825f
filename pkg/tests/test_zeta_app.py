import math

import numpy as np
import pytest

from apspectra import (
    TrigPolynomial,
    ZetaTruncation,
    windowed_means,
    zeta_bound_experiment,
    zeta_to_trig,
    zeta_variation_lower_bound,
)


def test_single_term_truncation_is_the_constant_one():
    assert zeta_to_trig(ZetaTruncation(0.5, 1, 0)) == TrigPolynomial([(0.0, 1.0)])


def test_two_term_truncation_values():
    p = zeta_to_trig(ZetaTruncation(0.5, 2, 0))
    assert [t.frequency for t in p.terms] == pytest.approx([-math.log(2.0), 0.0])
    assert p.terms[1].coefficient == 1.0
    assert p.terms[0].coefficient == pytest.approx(2.0**-0.5)


def test_two_term_derivative_magnitude():
    p = zeta_to_trig(ZetaTruncation(0.5, 2, 1))
    assert len(p) == 1  # log 1 = 0 kills the n=1 term
    assert abs(p.terms[0].coefficient) == pytest.approx(2.0**-0.5 * math.log(2.0))


@pytest.mark.parametrize("x,N,J", [(0.5, 7, 1), (1.0, 12, 2), (2.0, 4, 3)])
def test_truncation_derivative_matches_termwise_differentiation(x, N, J):
    p = zeta_to_trig(ZetaTruncation(x, N, J))
    q = zeta_to_trig(ZetaTruncation(x, N, 0))
    for _ in range(J):
        q = q.differentiate()
    assert p == q


def test_evaluate_matches_direct_sum(rng):
    for x in (0.5, 1.0, 2.0):
        z = ZetaTruncation(x, 100, 0)
        trig = zeta_to_trig(z)
        ys = rng.uniform(-50.0, 50.0, size=20)
        direct = z.evaluate(ys)
        spectral = trig.evaluate(ys)
        assert np.max(np.abs(direct - spectral)) <= 1e-12 * np.max(1.0 + np.abs(direct))


def test_truncation_validation():
    with pytest.raises(ValueError):
        ZetaTruncation(0.5, 0, 0)
    with pytest.raises(ValueError):
        ZetaTruncation(0.5, 2, -1)
    with pytest.raises(ValueError):
        zeta_variation_lower_bound(0.5, 0, 0)


def test_coefficients_recover_dirichlet_amplitudes():
    z = zeta_to_trig(ZetaTruncation(0.5, 5, 0))
    for n in range(1, 6):
        est = windowed_means(z, [-math.log(n)], tolerance=1e-4)[0]
        assert est.converged
        assert est.value == pytest.approx(n**-0.5, abs=1e-3)


# -- lower bound arithmetic ----------------------------------------------------


def test_lower_bound_trivial_single_term():
    assert zeta_variation_lower_bound(0.5, 1, 0) == 0.0


def test_lower_bound_three_terms():
    # max(0, log2/sqrt2, log3/sqrt3), recomputed directly
    assert zeta_variation_lower_bound(0.5, 3, 0) == pytest.approx(
        math.log(3.0) / math.sqrt(3.0)
    )
    assert zeta_variation_lower_bound(0.5, 3, 0) == pytest.approx(0.634284100597564)


def test_lower_bound_three_terms_second_derivative():
    want = max(n**-0.5 * math.log(n) ** 3 for n in (1, 2, 3))
    got = zeta_variation_lower_bound(0.5, 3, 2)
    assert got == pytest.approx(want)
    assert got == pytest.approx(0.7655485360761732)


def test_lower_bound_monotone_in_N():
    for x in (0.5, 1.0, 2.0):
        for j in (0, 1, 2):
            values = [zeta_variation_lower_bound(x, n, j) for n in range(1, 30)]
            assert all(b >= a for a, b in zip(values, values[1:]))


# -- the bound experiment -----------------------------------------------------


def test_experiment_tight_two_term_case():
    report = zeta_bound_experiment(0.5, 2, 0, tolerance=1e-4)
    exact = 2.0**-0.5 * math.log(2.0)
    assert report.lower_bound == pytest.approx(exact)
    assert report.estimated_variation == pytest.approx(exact, rel=1e-6)
    assert report.satisfied
    assert abs(report.margin) <= 1e-2 * exact


def test_experiment_trivial_constant_case():
    report = zeta_bound_experiment(0.5, 1, 0)
    assert report.estimated_variation == 0.0
    assert report.lower_bound == 0.0
    assert report.satisfied


def test_experiment_five_terms():
    report = zeta_bound_experiment(0.5, 5, 0, tolerance=1e-4)
    assert report.lower_bound == pytest.approx(math.log(5.0) / math.sqrt(5.0))
    assert report.lower_bound == pytest.approx(0.7197625155536004)
    assert report.estimated_variation >= report.lower_bound * (1.0 - 1e-2)
    assert report.satisfied
