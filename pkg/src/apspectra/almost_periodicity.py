"""Empirical translation numbers (almost periods) and inclusion lengths.

A shift tau is an epsilon-almost-period of f when sup_x |f(x+tau) - f(x)|
stays below epsilon.  The sup is probed on a finite grid whose step is
tied to the fastest oscillation present, and tau is swept exhaustively
over a uniform grid, so results are deterministic and easy to cross-check
against brute force.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyList, InvalidRange, StepTooCoarse
from .signal_model import Signal, as_trig_polynomial, max_frequency

_TAU_CHUNK = 2048


@dataclass(frozen=True)
class TranslationNumber:
    """A certified epsilon-almost-period with its measured discrepancy."""

    tau: float
    discrepancy: float
    epsilon: float

    def __post_init__(self):
        if not self.discrepancy < self.epsilon:
            raise ValueError("discrepancy must be below the certified epsilon")


@dataclass(frozen=True)
class InclusionLengthEstimate:
    """Largest observed gap between found translation numbers in a range."""

    epsilon: float
    l_estimate: float
    search_range: tuple[float, float]

    def __post_init__(self):
        lo, hi = self.search_range
        if self.l_estimate > hi - lo:
            raise ValueError("gap estimate exceeds the searched range")


def _probe_grid(probe_window: float, probe_step: float) -> np.ndarray:
    count = int(math.floor(probe_window / probe_step + 1e-9))
    return probe_step * np.arange(count + 1)


def translation_discrepancies(
    f: Signal, taus: np.ndarray, probe_window: float, probe_step: float
) -> np.ndarray:
    """max over the probe grid of |f(x+tau) - f(x)| for each tau."""
    taus = np.atleast_1d(np.asarray(taus, dtype=np.float64))
    xs = _probe_grid(probe_window, probe_step)
    out = np.empty(len(taus))
    trig = as_trig_polynomial(f)
    if trig is not None and len(trig):
        # f(x+tau)-f(x) = sum_k A_k e^(i lam_k x) (e^(i lam_k tau) - 1)
        base = np.exp(1j * np.multiply.outer(xs, trig.frequencies)) * trig.coefficients
        for t0 in range(0, len(taus), _TAU_CHUNK):
            chunk = taus[t0 : t0 + _TAU_CHUNK]
            shift = np.exp(1j * np.multiply.outer(trig.frequencies, chunk)) - 1.0
            out[t0 : t0 + _TAU_CHUNK] = np.max(np.abs(base @ shift), axis=0)
    else:
        ref = np.asarray(f.evaluate(xs))
        for t0 in range(0, len(taus), _TAU_CHUNK):
            chunk = taus[t0 : t0 + _TAU_CHUNK]
            shifted = np.asarray(
                f.evaluate((chunk[:, None] + xs[None, :]).ravel())
            ).reshape(len(chunk), len(xs))
            out[t0 : t0 + _TAU_CHUNK] = np.max(np.abs(shifted - ref[None, :]), axis=1)
    return out


def find_translation_numbers(
    f: Signal,
    epsilon: float,
    tau_range: tuple[float, float],
    tau_step: float,
    probe_window: float = 100.0,
    probe_step: float | None = None,
) -> list[TranslationNumber]:
    """Every grid shift in tau_range whose probed discrepancy is below epsilon.

    probe_step defaults to pi / (10 * lam_max) and may not be coarser than
    that guard when the signal's fastest frequency is known.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    lo, hi = float(tau_range[0]), float(tau_range[1])
    if not (hi > lo):
        raise InvalidRange(f"empty or reversed tau range ({lo}, {hi})")
    if tau_step <= 0:
        raise ValueError("tau_step must be positive")
    if probe_window <= 0:
        raise ValueError("probe_window must be positive")

    lam_max = max_frequency(f)
    if lam_max is not None and lam_max > 0:
        guard = math.pi / (10.0 * lam_max)
        if probe_step is None:
            probe_step = guard
        elif probe_step > guard * (1.0 + 1e-12):
            raise StepTooCoarse(
                f"probe_step {probe_step:g} exceeds the guard pi/(10*lam_max) = {guard:g}"
            )
    elif probe_step is None:
        probe_step = probe_window / 1000.0

    count = int(math.floor((hi - lo) / tau_step + 1e-9))
    taus = lo + tau_step * np.arange(count + 1)
    disc = translation_discrepancies(f, taus, probe_window, probe_step)
    found = disc < epsilon
    return [
        TranslationNumber(float(t), float(d), epsilon)
        for t, d in zip(taus[found], disc[found])
    ]


def estimate_inclusion_length(
    numbers: list[TranslationNumber], search_range: tuple[float, float]
) -> InclusionLengthEstimate:
    """Largest gap between consecutive found shifts, range ends included."""
    lo, hi = float(search_range[0]), float(search_range[1])
    if not (hi > lo):
        raise InvalidRange(f"empty or reversed search range ({lo}, {hi})")
    if not numbers:
        raise EmptyList(
            "no translation numbers in range; epsilon may be too small for this search"
        )
    taus = [t.tau for t in numbers]
    if any(b < a for a, b in zip(taus, taus[1:])):
        raise ValueError("translation numbers must be sorted by tau")
    epsilons = {t.epsilon for t in numbers}
    if len(epsilons) != 1:
        raise ValueError("translation numbers must certify a single epsilon")
    points = [lo, *taus, hi]
    gap = max(b - a for a, b in zip(points, points[1:]))
    return InclusionLengthEstimate(epsilons.pop(), gap, (lo, hi))
