"""Truncated Riemann zeta partial sums as almost periodic signals.

zeta_{x,N}(y) = sum_{n=1}^{N} n^(-x) exp(-i*y*log n) is, for fixed x, an
almost periodic function of y with pairwise incommensurable frequencies
-log n.  Its J-th derivative multiplies each term by (-i*log n)^J.  The
average total variation of the J-th derivative is bounded below by
max_{n <= N} n^(-x) (log n)^(J+1), which zeta_bound_experiment checks
numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .signal_model import TrigPolynomial
from .variation import AverageVariationEstimate, average_variation

_N_CHUNK = 512


@dataclass(frozen=True)
class ZetaTruncation:
    """J-th derivative of the length-N partial sum at abscissa x."""

    x: float
    N: int
    J: int = 0

    def __post_init__(self):
        if not math.isfinite(self.x):
            raise ValueError("x must be finite")
        if not isinstance(self.N, int) or self.N < 1:
            raise ValueError("N must be an integer >= 1")
        if not isinstance(self.J, int) or self.J < 0:
            raise ValueError("J must be an integer >= 0")

    def evaluate(self, y):
        """Direct Dirichlet-polynomial sum, vectorized over y."""
        ya = np.atleast_1d(np.asarray(y, dtype=np.float64))
        out = np.zeros(ya.shape, dtype=np.complex128)
        for n0 in range(1, self.N + 1, _N_CHUNK):
            ns = np.arange(n0, min(n0 + _N_CHUNK, self.N + 1), dtype=np.float64)
            logs = np.log(ns)
            amps = ns ** (-self.x) * (-1j * logs) ** self.J
            out += np.exp(-1j * np.multiply.outer(ya, logs)) @ amps
        return complex(out[0]) if np.ndim(y) == 0 else out

    def as_trig_polynomial(self) -> TrigPolynomial:
        return zeta_to_trig(self)


def zeta_to_trig(z: ZetaTruncation) -> TrigPolynomial:
    """Exact spectral form: frequency -log n with amplitude n^(-x) (-i log n)^J."""
    ns = np.arange(1, z.N + 1, dtype=np.float64)
    logs = np.log(ns)
    return TrigPolynomial(zip(-logs, ns ** (-z.x) * (-1j * logs) ** z.J))


def zeta_variation_lower_bound(x: float, N: int, J: int) -> float:
    """max over n in 1..N of n^(-x) * (log n)^(J+1); the n=1 candidate is 0."""
    if not isinstance(N, int) or N < 1:
        raise ValueError("N must be an integer >= 1")
    if not isinstance(J, int) or J < 0:
        raise ValueError("J must be an integer >= 0")
    ns = np.arange(1, N + 1, dtype=np.float64)
    return float(np.max(ns ** (-x) * np.log(ns) ** (J + 1)))


@dataclass(frozen=True)
class ZetaBoundReport:
    """Numerical average variation of a truncation against its analytic floor."""

    x: float
    N: int
    J: int
    estimated_variation: float
    lower_bound: float
    margin: float
    satisfied: bool
    report_tolerance: float
    windows: tuple[tuple[float, float], ...]


def zeta_bound_experiment(
    x: float,
    N: int,
    J: int,
    T_initial: float = 64.0,
    growth: float = 2.0,
    tolerance: float = 1e-4,
    max_doublings: int = 16,
    report_tolerance: float = 1e-2,
) -> ZetaBoundReport:
    """Estimate the average variation of the (x, N, J) truncation and compare
    it with the analytic lower bound."""
    bound = zeta_variation_lower_bound(x, N, J)
    est: AverageVariationEstimate = average_variation(
        zeta_to_trig(ZetaTruncation(x, N, J)),
        T_initial=T_initial,
        growth=growth,
        tolerance=tolerance,
        max_doublings=max_doublings,
    )
    value = est.value
    return ZetaBoundReport(
        x=x,
        N=N,
        J=J,
        estimated_variation=value,
        lower_bound=bound,
        margin=value - bound,
        satisfied=value >= bound * (1.0 - report_tolerance),
        report_tolerance=report_tolerance,
        windows=est.windows,
    )
