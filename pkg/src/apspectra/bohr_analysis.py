"""Bohr mean values, Bohr-Fourier coefficients, and spectrum scanning.

The mean value M{f} = lim_T (1/T) integral_a^(a+T) f(x) dx is estimated
over geometrically growing windows until two successive window estimates
agree to tolerance; the coefficient at frequency lam is the mean of the
demodulated signal f(x) * exp(-i*lam*x).

scan_spectrum locates Fourier exponents of a signal with no harmonic
structure assumed: a fixed-window sweep of |a(lam)| over a grid finds
candidate peaks, each peak is sharpened by golden-section search, and the
coefficients of the detected set are separated from one another's
finite-window leakage through the exactly known rectangular-window kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidRange, NotConverged
from .quadrature import (
    FixedWindowTransform,
    demodulated_integrals,
    panel_width_cap,
    rectangle_kernel,
)
from .signal_model import Signal, as_trig_polynomial, max_frequency

DEFAULT_T_INITIAL = 64.0
DEFAULT_GROWTH = 2.0
DEFAULT_TOLERANCE = 1e-4
DEFAULT_MAX_DOUBLINGS = 16

_GOLDEN_ITERATIONS = 40
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class MeanValueEstimate:
    """Windowed mean-value trace with its convergence verdict."""

    value: complex
    windows: tuple[tuple[float, complex], ...]
    converged: bool
    tolerance: float

    def __post_init__(self):
        if not self.windows:
            raise ValueError("windows must be nonempty")
        lengths = [t for t, _ in self.windows]
        if any(b <= a for a, b in zip(lengths, lengths[1:])):
            raise ValueError("window lengths must be strictly increasing")


@dataclass(frozen=True)
class SpectralLine:
    frequency: float
    coefficient: complex
    magnitude: float


@dataclass(frozen=True)
class SpectrumEstimate:
    """Detected Fourier exponents with refined coefficients.

    `grid_frequencies`/`grid_coefficients` are the sweep diagnostics: the
    raw fixed-window transform sampled on the scan grid.
    """

    exponents: tuple[SpectralLine, ...]
    scan_range: tuple[float, float]
    scan_step: float
    threshold: float
    grid_frequencies: tuple[float, ...] = ()
    grid_coefficients: tuple[complex, ...] = ()

    def __post_init__(self):
        freqs = [e.frequency for e in self.exponents]
        if any(b <= a for a, b in zip(freqs, freqs[1:])):
            raise ValueError("exponents must be sorted by frequency")
        if any(e.magnitude < self.threshold for e in self.exponents):
            raise ValueError("exponent magnitude below threshold")


def _validate_window_params(T_initial, growth, tolerance, max_doublings):
    if T_initial <= 0:
        raise ValueError("T_initial must be positive")
    if growth <= 1:
        raise ValueError("growth must exceed 1")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if max_doublings < 0:
        raise ValueError("max_doublings must be nonnegative")


def _leakage_envelopes(f: Signal, lams: np.ndarray) -> np.ndarray | None:
    """Exact worst-case leakage constants: |est(T) - limit| <= C / T.

    Demodulated at lam, each term (mu, B) of a trigonometric polynomial
    integrates to a phasor of magnitude at most 2|B| / |mu - lam| per unit
    of 1/T; the term at mu == lam is constant and leaks nothing.  Unknown
    spectra get no envelope.
    """
    trig = as_trig_polynomial(f)
    if trig is None:
        return None
    deltas = np.abs(trig.frequencies[None, :] - lams[:, None])
    mags = np.abs(trig.coefficients)[None, :]
    with np.errstate(divide="ignore"):
        contributions = np.where(deltas > 0, 2.0 * mags / deltas, 0.0)
    return contributions.sum(axis=1)


def windowed_means(
    f: Signal,
    lams,
    a: float = 0.0,
    T_initial: float = DEFAULT_T_INITIAL,
    growth: float = DEFAULT_GROWTH,
    tolerance: float = DEFAULT_TOLERANCE,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
) -> list[MeanValueEstimate]:
    """Demodulated means at several frequencies sharing one window schedule.

    A frequency stops growing its window once two successive estimates
    agree to tolerance; for signals with a known spectrum the agreement
    must also be backed by the analytic leakage envelope, so a chance
    alignment of leakage phases cannot end the schedule early.  Each
    result carries its own trace and verdict.
    """
    _validate_window_params(T_initial, growth, tolerance, max_doublings)
    lams = np.atleast_1d(np.asarray(lams, dtype=np.float64))
    n = len(lams)
    lam_f = max_frequency(f)
    cap = panel_width_cap((lam_f or 0.0) + float(np.max(np.abs(lams), initial=0.0)))
    envelopes = _leakage_envelopes(f, lams)

    integrals = np.zeros(n, dtype=np.complex128)
    previous = np.zeros(n, dtype=np.complex128)
    active = np.ones(n, dtype=bool)
    converged = np.zeros(n, dtype=bool)
    traces: list[list[tuple[float, complex]]] = [[] for _ in range(n)]

    t_prev = 0.0
    for m in range(max_doublings + 1):
        t_m = T_initial * growth**m
        idx = np.nonzero(active)[0]
        if len(idx) == 0:
            break
        integrals[idx] += demodulated_integrals(f, lams[idx], a + t_prev, a + t_m, cap)
        estimates = integrals[idx] / t_m
        for j, e in zip(idx, estimates):
            traces[j].append((t_m, complex(e)))
        if m >= 1:
            allowed = tolerance * (1.0 + np.abs(estimates))
            close = np.abs(estimates - previous[idx]) <= allowed
            if envelopes is not None:
                close &= envelopes[idx] / t_m <= allowed
            converged[idx[close]] = True
            active[idx[close]] = False
        previous[idx] = estimates
        t_prev = t_m

    return [
        MeanValueEstimate(
            value=traces[j][-1][1],
            windows=tuple(traces[j]),
            converged=bool(converged[j]),
            tolerance=tolerance,
        )
        for j in range(n)
    ]


def bohr_mean(
    f: Signal,
    a: float = 0.0,
    T_initial: float = DEFAULT_T_INITIAL,
    growth: float = DEFAULT_GROWTH,
    tolerance: float = DEFAULT_TOLERANCE,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
) -> MeanValueEstimate:
    """Mean value (1/T) integral_a^(a+T) f over growing windows T."""
    est = windowed_means(f, [0.0], a, T_initial, growth, tolerance, max_doublings)[0]
    if not est.converged:
        raise NotConverged(
            f"mean did not settle within {max_doublings} doublings", estimate=est
        )
    return est


def bohr_coefficient(
    f: Signal,
    lam: float,
    a: float = 0.0,
    T_initial: float = DEFAULT_T_INITIAL,
    growth: float = DEFAULT_GROWTH,
    tolerance: float = DEFAULT_TOLERANCE,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
) -> MeanValueEstimate:
    """Bohr-Fourier coefficient a(lam) = M{f(x) exp(-i lam x)}."""
    est = windowed_means(f, [lam], a, T_initial, growth, tolerance, max_doublings)[0]
    if not est.converged:
        raise NotConverged(
            f"coefficient at {lam} did not settle within {max_doublings} doublings",
            estimate=est,
        )
    return est


# ---------------------------------------------------------------------------
# Spectrum scan
# ---------------------------------------------------------------------------


def _local_maxima(mags: np.ndarray, threshold: float) -> list[int]:
    """Grid indices of local maxima above threshold; plateaus yield their leftmost point."""
    n = len(mags)
    if n == 1:
        return [0] if mags[0] >= threshold else []
    out = []
    for i in range(n):
        if mags[i] < threshold:
            continue
        left_ok = i == 0 or mags[i] > mags[i - 1]
        right_ok = i == n - 1 or mags[i] >= mags[i + 1]
        if i == 0:
            left_ok, right_ok = True, mags[0] >= mags[1]
        if i == n - 1:
            right_ok = mags[i] > mags[i - 1]
        if left_ok and right_ok:
            out.append(i)
    return out


def _accept_candidates(
    lams: np.ndarray, mags: np.ndarray, indices: list[int], window: float
) -> list[int]:
    """Greedy keep, strongest first; drop maxima explainable as window sidelobes.

    A rectangular window of length T leaks at most 2*|A|/(d*T) at distance
    d from a line of strength |A|; anything under twice that envelope
    around an already-accepted peak is treated as its sidelobe.
    """
    order = sorted(indices, key=lambda i: (-mags[i], lams[i]))
    accepted: list[int] = []
    for i in order:
        sidelobe = False
        for j in accepted:
            d = abs(lams[i] - lams[j])
            if d > 0 and mags[i] <= 4.0 * mags[j] / (d * window):
                sidelobe = True
                break
        if not sidelobe:
            accepted.append(i)
    return sorted(accepted, key=lambda i: lams[i])


def _golden_max(objective, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Vectorized golden-section maximization, one bracket per row."""
    a, b = lo.copy(), hi.copy()
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = objective(x1), objective(x2)
    for _ in range(_GOLDEN_ITERATIONS):
        shrink_left = f1 >= f2
        a = np.where(shrink_left, a, x1)
        b = np.where(shrink_left, x2, b)
        x_keep = np.where(shrink_left, x1, x2)
        f_keep = np.where(shrink_left, f1, f2)
        x_new = a + b - x_keep
        f_new = objective(x_new)
        x1 = np.where(shrink_left, x_new, x_keep)
        f1 = np.where(shrink_left, f_new, f_keep)
        x2 = np.where(shrink_left, x_keep, x_new)
        f2 = np.where(shrink_left, f_keep, f_new)
    return 0.5 * (a + b)


def scan_spectrum(
    f: Signal,
    lambda_range: tuple[float, float],
    step: float,
    threshold: float,
    T_initial: float = DEFAULT_T_INITIAL,
    growth: float = DEFAULT_GROWTH,
    tolerance: float = DEFAULT_TOLERANCE,
    max_doublings: int = DEFAULT_MAX_DOUBLINGS,
) -> SpectrumEstimate:
    """Detect Fourier exponents of f inside lambda_range.

    Grid magnitudes are computed at the longest schedule window whose main
    lobe still spans a grid step (finer windows would fall between grid
    points); peak refinement and coefficient separation run at a longer
    window where leakage between detected lines is both small and exactly
    invertible.
    """
    lo, hi = float(lambda_range[0]), float(lambda_range[1])
    if not (hi > lo):
        raise InvalidRange(f"empty or reversed frequency range ({lo}, {hi})")
    if step <= 0:
        raise ValueError("step must be positive")
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    _validate_window_params(T_initial, growth, tolerance, max_doublings)

    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    grid = lo + step * np.arange(count)

    lam_f = max_frequency(f) or 0.0
    cap = panel_width_cap(lam_f + max(abs(lo), abs(hi)) + step)

    doublings_grid = 0
    while (
        doublings_grid < max_doublings
        and T_initial * growth ** (doublings_grid + 1) <= 2.0 * math.pi / step
    ):
        doublings_grid += 1
    t_grid = T_initial * growth**doublings_grid
    t_refine = T_initial * growth ** min(doublings_grid + 2, max_doublings)

    grid_transform = FixedWindowTransform(f, t_grid, cap)
    grid_values = grid_transform.coefficients(grid)
    mags = np.abs(grid_values)
    diagnostics = dict(
        grid_frequencies=tuple(float(v) for v in grid),
        grid_coefficients=tuple(complex(v) for v in grid_values),
    )
    picked = _accept_candidates(grid, mags, _local_maxima(mags, threshold), t_grid)
    if not picked:
        return SpectrumEstimate((), (lo, hi), step, threshold, **diagnostics)

    refine = FixedWindowTransform(f, t_refine, cap)
    peaks = grid[picked].astype(np.float64)
    coeffs = np.zeros(len(peaks), dtype=np.complex128)

    def deflated_magnitude(probes: np.ndarray, owners: np.ndarray) -> np.ndarray:
        # |a_T(probe) - sum_{k != owner} A_k * kernel(peak_k - probe)|
        raw = refine.coefficients(probes)
        leak = rectangle_kernel(
            peaks[None, :] - probes[:, None], refine.window
        ) * coeffs[None, :]
        leak[np.arange(len(probes)), owners] = 0.0
        return np.abs(raw - leak.sum(axis=1))

    n_pre = 33
    for _ in range(3):
        # Localize the dominant lobe inside the +-step bracket, then polish.
        m = len(peaks)
        owners = np.arange(m)
        offsets = np.linspace(-step, step, n_pre)
        probes = peaks[:, None] + offsets[None, :]
        vals = deflated_magnitude(
            probes.ravel(), np.repeat(owners, n_pre)
        ).reshape(m, n_pre)
        best = peaks + offsets[np.argmax(vals, axis=1)]
        half = 2.0 * (2.0 * step / (n_pre - 1))
        peaks = _golden_max(
            lambda xs: deflated_magnitude(xs, owners), best - half, best + half
        )

        # Merge refinements that collapsed onto the same line.
        keep: list[int] = []
        for i in np.argsort(-np.abs(refine.coefficients(peaks))):
            if all(abs(peaks[i] - peaks[j]) > 0.5 * step for j in keep):
                keep.append(int(i))
        peaks = np.sort(peaks[sorted(keep)])

        # Solve the mutual-leakage system for the detected set.
        raw = refine.coefficients(peaks)
        kernel = rectangle_kernel(peaks[None, :] - peaks[:, None], refine.window)
        coeffs = np.linalg.solve(kernel, raw)

    magnitudes = np.abs(coeffs)
    lines = tuple(
        SpectralLine(float(p), complex(c), float(m))
        for p, c, m in zip(peaks, coeffs, magnitudes)
        if m >= threshold
    )
    return SpectrumEstimate(lines, (lo, hi), step, threshold, **diagnostics)
