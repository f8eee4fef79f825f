"""Coefficient decay bounds: |A_j| <= Vbar(f^(n)) / |lambda_j|^(n+1).

check_decay_bound verifies the almost periodic decay inequality at the
requested derivative order; check_taibleson is its classical 1-periodic
special case |c_j| <= V_[0,1](f) / (2 pi |j|), where the average variation
of a 1-periodic signal equals its variation over one period.

Both produce a BoundReport whose entries pair measured coefficient
magnitudes with their theoretical ceilings.  |lambda| is used in the
denominator: that is what the integration-by-parts argument controls, and
it keeps the bound meaningful for negative exponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bohr_analysis import windowed_means
from .errors import NotConverged, NotPeriodic, ZeroExponent
from .signal_model import Signal, as_trig_polynomial, max_frequency
from .variation import average_variation, total_variation

DEFAULT_REPORT_TOLERANCE = 1e-3


@dataclass(frozen=True)
class BoundEntry:
    exponent: float
    coefficient_magnitude: float
    bound: float
    margin: float
    satisfied: bool


@dataclass(frozen=True)
class BoundReport:
    """Per-exponent decay-bound comparison at one derivative order."""

    entries: tuple[BoundEntry, ...]
    derivative_order: int
    variation_value: float
    report_tolerance: float

    def __post_init__(self):
        if self.derivative_order < 0 or self.variation_value < 0:
            raise ValueError("negative order or variation")
        power = self.derivative_order + 1
        floor = _noise_floor(self.variation_value)
        for e in self.entries:
            expected = self.variation_value / abs(e.exponent) ** power
            if not math.isclose(e.bound, expected, rel_tol=1e-9, abs_tol=1e-300):
                raise ValueError("entry bound inconsistent with the variation value")
            if e.satisfied != (
                e.coefficient_magnitude
                <= e.bound * (1.0 + self.report_tolerance) + floor
            ):
                raise ValueError("entry satisfied flag inconsistent")

    @property
    def all_satisfied(self) -> bool:
        return all(e.satisfied for e in self.entries)


def _noise_floor(variation: float) -> float:
    # keeps the zero-bound case (constant signals) decidable: measured
    # coefficient magnitudes carry ~1e-15 quadrature rounding even when the
    # true value is exactly 0
    return 1e-12 * (1.0 + variation)


def _entries(lams, magnitudes, variation, order, report_tolerance):
    power = order + 1
    floor = _noise_floor(variation)
    out = []
    for lam, mag in zip(lams, magnitudes):
        bound = variation / abs(lam) ** power
        out.append(
            BoundEntry(
                exponent=float(lam),
                coefficient_magnitude=float(mag),
                bound=float(bound),
                margin=float(bound - mag),
                satisfied=bool(mag <= bound * (1.0 + report_tolerance) + floor),
            )
        )
    return tuple(out)


def check_decay_bound(
    f: Signal,
    exponents,
    n: int = 0,
    T_initial: float = 64.0,
    growth: float = 2.0,
    tolerance: float = 1e-4,
    max_doublings: int = 16,
    report_tolerance: float = DEFAULT_REPORT_TOLERANCE,
) -> BoundReport:
    """Check |a(lambda_j)| <= Vbar(f^(n)) / |lambda_j|^(n+1) for each exponent."""
    if n < 0:
        raise ValueError("derivative order must be nonnegative")
    lams = [float(v) for v in exponents]
    if any(v == 0.0 for v in lams):
        raise ZeroExponent("the decay bound is undefined at lambda = 0")

    trig = as_trig_polynomial(f)
    if n >= 1 and trig is None:
        raise ValueError("orders n >= 1 need a signal with an exact derivative")
    derivative = trig
    for _ in range(n):
        derivative = derivative.differentiate()

    estimates = windowed_means(
        f, lams, 0.0, T_initial, growth, tolerance, max_doublings
    )
    for lam, est in zip(lams, estimates):
        if not est.converged:
            raise NotConverged(f"coefficient at {lam} did not converge", estimate=est)

    variation = average_variation(
        derivative if derivative is not None else f,
        T_initial=T_initial,
        growth=growth,
        tolerance=tolerance,
        max_doublings=max_doublings,
    ).value

    magnitudes = [abs(est.value) for est in estimates]
    return BoundReport(
        entries=_entries(lams, magnitudes, variation, n, report_tolerance),
        derivative_order=n,
        variation_value=variation,
        report_tolerance=report_tolerance,
    )


def check_taibleson(
    f: Signal,
    j_max: int,
    T_initial: float = 64.0,
    growth: float = 2.0,
    tolerance: float = 1e-4,
    max_doublings: int = 16,
    report_tolerance: float = DEFAULT_REPORT_TOLERANCE,
    periodicity_tolerance: float = 1e-9,
) -> BoundReport:
    """Classical bound |c_j| <= V_[0,1](f) / (2 pi |j|) for 1 <= |j| <= j_max."""
    if j_max < 1:
        raise ValueError("j_max must be at least 1")

    lam_f = max_frequency(f)
    count = 1024 if lam_f is None else max(1024, int(math.ceil(10.0 * lam_f / math.pi)))
    xs = np.linspace(0.0, 1.0, count + 1)
    drift = np.max(np.abs(np.asarray(f.evaluate(xs + 1.0)) - np.asarray(f.evaluate(xs))))
    if drift > periodicity_tolerance:
        raise NotPeriodic(
            f"|f(x+1) - f(x)| reaches {float(drift):.3g} on the probe grid"
        )

    js = [j for j in range(-j_max, j_max + 1) if j != 0]
    lams = [2.0 * math.pi * j for j in js]
    estimates = windowed_means(
        f, lams, 0.0, T_initial, growth, tolerance, max_doublings
    )
    for lam, est in zip(lams, estimates):
        if not est.converged:
            raise NotConverged(f"coefficient at {lam} did not converge", estimate=est)

    variation = total_variation(f, 0.0, 1.0, tolerance=max(tolerance * 1e-2, 1e-12)).value
    magnitudes = [abs(est.value) for est in estimates]
    return BoundReport(
        entries=_entries(lams, magnitudes, variation, 0, report_tolerance),
        derivative_order=0,
        variation_value=variation,
        report_tolerance=report_tolerance,
    )
