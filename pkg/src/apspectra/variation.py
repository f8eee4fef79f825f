"""Total variation on finite intervals and the average total variation.

For signals with an exactly known derivative (trigonometric polynomials
and anything convertible to one) the variation integral_a^b |f'(x)| dx is
computed by Gauss-Legendre panels split at the zeros of f', where |f'|
has corners; a uniform-partition refinement runs alongside as a slow but
assumption-free cross-check.  Complex-valued signals use the modulus of
differences throughout, which coincides with the classical definition on
real signals.

The average total variation lim_T V_[0,T](f)/T is estimated over
geometrically growing windows with the same relative convergence test as
the Bohr means; window integrals accumulate across halves so the whole
schedule costs no more than its final window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidRange, NotConverged
from .quadrature import GL_NODES, GL_WEIGHTS, panel_width_cap
from .signal_model import Signal, TrigPolynomial, as_trig_polynomial

PARTITION_METHOD = "partition_refinement"
QUADRATURE_METHOD = "derivative_quadrature"

_PANEL_CHUNK = 1 << 16


@dataclass(frozen=True)
class VariationEstimate:
    """Variation of a signal over one interval.

    `refinement_trace` is the uniform-partition record (grid size, sum of
    |increments|); when `method` is derivative_quadrature the value comes
    from the |f'| integral and the trace remains as a cross-check.
    """

    interval: tuple[float, float]
    value: float
    method: str
    refinement_trace: tuple[tuple[int, float], ...]

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("variation cannot be negative")
        if self.method not in (PARTITION_METHOD, QUADRATURE_METHOD):
            raise ValueError(f"unknown method {self.method!r}")
        estimates = [s for _, s in self.refinement_trace]
        slack = 1e-12
        if any(b < a - slack * max(1.0, a) for a, b in zip(estimates, estimates[1:])):
            raise ValueError("partition refinement must not decrease the estimate")
        if self.method == PARTITION_METHOD and self.refinement_trace:
            if self.value != self.refinement_trace[-1][1]:
                raise ValueError("value must equal the last trace entry")


@dataclass(frozen=True)
class AverageVariationEstimate:
    """Windowed V_[0,T]/T trace with its convergence verdict."""

    windows: tuple[tuple[float, float], ...]
    value: float
    converged: bool
    tolerance: float

    def __post_init__(self):
        if not self.windows:
            raise ValueError("windows must be nonempty")
        lengths = [t for t, _ in self.windows]
        if any(b <= a for a, b in zip(lengths, lengths[1:])):
            raise ValueError("window lengths must be strictly increasing")
        if self.value != self.windows[-1][1]:
            raise ValueError("value must equal the last window ratio")


# ---------------------------------------------------------------------------
# |f'| quadrature with corner splitting
# ---------------------------------------------------------------------------


def _bisect_roots(g, lo: np.ndarray, hi: np.ndarray, iterations: int = 30) -> np.ndarray:
    """Vectorized bisection for one sign change per bracket of the real function g."""
    glo = g(lo)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        left = glo * gm <= 0
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
        glo = np.where(left, glo, gm)
    return 0.5 * (lo + hi)


def _corner_points(df: TrigPolynomial, alpha: float, beta: float) -> np.ndarray:
    """Zeros of f' inside (alpha, beta), where |f'| is not smooth.

    A pre-scan grid at a tenth of the fastest quarter-period flags cells
    where one component of f' changes sign while the other is small enough
    to vanish in the same cell; the crossing is then sharpened by
    bisection.  Sign changes with the other component bounded away from
    zero leave |f'| smooth and are not split.
    """
    lam = df.max_frequency
    if len(df) == 0 or lam == 0.0:
        return np.empty(0)
    h = math.pi / (10.0 * lam)
    count = max(1, int(math.ceil((beta - alpha) / h)))
    xs = np.linspace(alpha, beta, count + 1)
    vals = df.evaluate(xs)
    u, v = vals.real, vals.imag
    # |component| can reach zero inside a cell only within slope*h of it
    slope = float(np.sum(np.abs(df.coefficients * df.frequencies)))
    near_u = (np.abs(u[:-1]) <= slope * h) & (np.abs(u[1:]) <= slope * h)
    near_v = (np.abs(v[:-1]) <= slope * h) & (np.abs(v[1:]) <= slope * h)
    cross_u = u[:-1] * u[1:] < 0
    cross_v = v[:-1] * v[1:] < 0

    points = []
    cells_u = np.nonzero(cross_u & (cross_v | near_v))[0]
    if len(cells_u):
        points.append(
            _bisect_roots(lambda x: df.evaluate(x).real, xs[cells_u], xs[cells_u + 1])
        )
    cells_v = np.nonzero(cross_v & ~cross_u & near_u)[0]
    if len(cells_v):
        points.append(
            _bisect_roots(lambda x: df.evaluate(x).imag, xs[cells_v], xs[cells_v + 1])
        )
    # tangential near-zeros without a crossing: split at the cell midpoint
    cells_t = np.nonzero(near_u & near_v & ~cross_u & ~cross_v)[0]
    if len(cells_t):
        points.append(0.5 * (xs[cells_t] + xs[cells_t + 1]))
    if not points:
        return np.empty(0)
    pts = np.sort(np.concatenate(points))
    return pts[(pts > alpha) & (pts < beta)]


def abs_derivative_integral(df: TrigPolynomial, alpha: float, beta: float) -> float:
    """integral_alpha^beta |df(x)| dx by corner-split composite Gauss-Legendre."""
    if beta <= alpha or len(df) == 0:
        return 0.0
    if df.max_frequency == 0.0:
        return abs(complex(df.coefficients[0])) * (beta - alpha)

    bounds = np.concatenate(([alpha], _corner_points(df, alpha, beta), [beta]))
    lengths = np.diff(bounds)
    cap = panel_width_cap(df.max_frequency)
    counts = np.maximum(1, np.ceil(lengths / cap)).astype(np.int64)
    widths = lengths / counts
    seg = np.repeat(np.arange(len(lengths)), counts)
    first = np.repeat(np.cumsum(counts) - counts, counts)
    within = np.arange(len(seg)) - first
    starts = bounds[:-1][seg] + widths[seg] * within
    pw = widths[seg]

    total = 0.0
    for p0 in range(0, len(starts), _PANEL_CHUNK):
        s = starts[p0 : p0 + _PANEL_CHUNK][:, None]
        w2 = 0.5 * pw[p0 : p0 + _PANEL_CHUNK][:, None]
        nodes = s + w2 * (GL_NODES + 1.0)[None, :]
        weights = w2 * GL_WEIGHTS[None, :]
        total += float(
            np.sum(weights * np.abs(df.evaluate(nodes.ravel()).reshape(nodes.shape)))
        )
    return total


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def total_variation(
    f: Signal,
    a: float,
    b: float,
    initial_grid: int = 64,
    tolerance: float = 1e-6,
    max_refinements: int = 16,
) -> VariationEstimate:
    """Total variation of f over [a, b].

    Runs the uniform-partition refinement always; when f has an exact
    derivative the corner-split |f'| quadrature supplies the returned
    value and the partition trace serves as an independent cross-check.
    """
    if b < a:
        raise InvalidRange(f"reversed interval ({a}, {b})")
    if initial_grid < 2:
        raise ValueError("initial_grid must be at least 2")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    trig = as_trig_polynomial(f)
    if b == a:
        method = QUADRATURE_METHOD if trig is not None else PARTITION_METHOD
        return VariationEstimate((a, b), 0.0, method, ((initial_grid, 0.0),))

    trace: list[tuple[int, float]] = []
    previous = None
    converged = False
    n = initial_grid
    for _ in range(max_refinements + 1):
        xs = np.linspace(a, b, n + 1)
        values = np.asarray(f.evaluate(xs))
        s = float(np.sum(np.abs(np.diff(values))))
        trace.append((n, s))
        if previous is not None and abs(s - previous) <= tolerance * (1.0 + abs(s)):
            converged = True
            break
        previous = s
        n *= 2

    if trig is not None:
        value = abs_derivative_integral(trig.differentiate(), a, b)
        return VariationEstimate((a, b), value, QUADRATURE_METHOD, tuple(trace))

    estimate = VariationEstimate((a, b), trace[-1][1], PARTITION_METHOD, tuple(trace))
    if not converged:
        raise NotConverged(
            f"partition refinement did not settle within {max_refinements} doublings",
            estimate=estimate,
        )
    return estimate


def average_variation(
    f: Signal,
    T_initial: float = 64.0,
    growth: float = 2.0,
    tolerance: float = 1e-4,
    max_doublings: int = 16,
) -> AverageVariationEstimate:
    """Average total variation lim_T V_[0,T](f)/T over growing windows."""
    if T_initial <= 0:
        raise ValueError("T_initial must be positive")
    if growth <= 1:
        raise ValueError("growth must exceed 1")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if max_doublings < 0:
        raise ValueError("max_doublings must be nonnegative")

    trig = as_trig_polynomial(f)
    df = trig.differentiate() if trig is not None else None

    windows: list[tuple[float, float]] = []
    running = 0.0
    previous = None
    agreements = 0
    converged = False
    t_prev = 0.0
    for m in range(max_doublings + 1):
        t_m = T_initial * growth**m
        if df is not None:
            running += abs_derivative_integral(df, t_prev, t_m)
        else:
            running = total_variation(
                f, 0.0, t_m, initial_grid=1 << 10, tolerance=tolerance
            ).value
        ratio = running / t_m
        windows.append((t_m, ratio))
        # two consecutive agreements, so a transient lull in the window
        # ripple cannot end the schedule early; an exact match (constant
        # |f'|) settles immediately
        if previous is not None and abs(ratio - previous) <= tolerance * (1.0 + ratio):
            agreements += 1
            if agreements >= 2 or abs(ratio - previous) <= 1e-14 * (1.0 + ratio):
                converged = True
                break
        else:
            agreements = 0
        previous = ratio
        t_prev = t_m

    estimate = AverageVariationEstimate(
        tuple(windows), windows[-1][1], converged, tolerance
    )
    if not converged:
        raise NotConverged(
            f"V/T did not settle within {max_doublings} doublings", estimate=estimate
        )
    return estimate
