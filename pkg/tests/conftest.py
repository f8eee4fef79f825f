import numpy as np
import pytest

from apspectra import TrigPolynomial


def random_polynomial(
    rng,
    n_terms=(2, 8),
    freq_range=(-5.0, 5.0),
    min_gap=0.3,
    mag_range=(0.5, 3.0),
    min_abs_freq=0.0,
):
    """Random trigonometric polynomial with pairwise-separated frequencies."""
    k = int(rng.integers(n_terms[0], n_terms[1] + 1))
    freqs: list[float] = []
    while len(freqs) < k:
        cand = float(rng.uniform(*freq_range))
        if abs(cand) < min_abs_freq:
            continue
        if all(abs(cand - f) >= min_gap for f in freqs):
            freqs.append(cand)
    mags = rng.uniform(*mag_range, size=k)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=k)
    return TrigPolynomial(zip(freqs, mags * np.exp(1j * phases)))


@pytest.fixture
def rng():
    return np.random.default_rng(0x5EED)
