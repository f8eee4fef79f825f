"""Finite trigonometric polynomials with arbitrary real frequencies.

A signal here is a finite sum  sum_k A_k * exp(i*lambda_k*x)  with real,
not necessarily commensurate, frequencies lambda_k and complex amplitudes
A_k.  All algebra (sum, product, conjugate, scaling, derivative,
antiderivative) is exact on this representation; evaluation is the only
place floating-point rounding enters.

Polynomials are kept in a canonical form: frequencies strictly increasing,
near-equal frequencies merged at construction, exact-zero amplitudes
dropped.  Values are immutable, so they can be shared freely.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Protocol, Sequence, runtime_checkable

import numpy as np

from .errors import SignalFormatError, ZeroFrequencyTerm

# Two frequencies are considered the same exponent when they differ by
# less than this relative amount; genuinely incommensurate desk-scale
# inputs never come this close.
FREQ_MERGE_RTOL = 1e-12


@runtime_checkable
class Signal(Protocol):
    """Anything evaluable as a map from real x to complex values.

    `evaluate` must be deterministic, total on finite inputs, and accept
    both scalars and 1-d numpy arrays.
    """

    def evaluate(self, x): ...


@dataclass(frozen=True)
class TrigTerm:
    """One spectral line: amplitude `coefficient` at `frequency` rad per unit x."""

    frequency: float
    coefficient: complex

    def __post_init__(self):
        if not math.isfinite(self.frequency):
            raise ValueError(f"non-finite frequency: {self.frequency}")
        c = complex(self.coefficient)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValueError(f"non-finite coefficient: {c}")
        freq = float(self.frequency)
        object.__setattr__(self, "frequency", 0.0 if freq == 0.0 else freq)
        object.__setattr__(self, "coefficient", c)


def _merge_terms(freqs, coeffs):
    """Sort by frequency and merge near-equal ones (first frequency of a run wins)."""
    order = np.argsort(freqs, kind="stable")
    freqs = freqs[order]
    coeffs = coeffs[order]
    out_f: list[float] = []
    out_c: list[complex] = []
    for f, c in zip(freqs, coeffs):
        if out_f and f - out_f[-1] <= FREQ_MERGE_RTOL * max(1.0, abs(f), abs(out_f[-1])):
            out_c[-1] += c
        else:
            out_f.append(f)
            out_c.append(c)
    keep = [i for i, c in enumerate(out_c) if c != 0]
    return np.array([out_f[i] for i in keep], dtype=np.float64), np.array(
        [out_c[i] for i in keep], dtype=np.complex128
    )


class TrigPolynomial:
    """Canonical finite trigonometric polynomial sum_k A_k e^(i lambda_k x)."""

    __slots__ = ("_freqs", "_coeffs")

    def __init__(self, terms: Iterable[TrigTerm | tuple[float, complex]] = ()):
        pairs = [
            t if isinstance(t, TrigTerm) else TrigTerm(t[0], t[1]) for t in terms
        ]
        freqs = np.array([t.frequency for t in pairs], dtype=np.float64)
        coeffs = np.array([t.coefficient for t in pairs], dtype=np.complex128)
        freqs, coeffs = _merge_terms(freqs, coeffs)
        freqs.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "_freqs", freqs)
        object.__setattr__(self, "_coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("TrigPolynomial is immutable")

    # -- views ---------------------------------------------------------

    @property
    def frequencies(self) -> np.ndarray:
        return self._freqs

    @property
    def coefficients(self) -> np.ndarray:
        return self._coeffs

    @property
    def terms(self) -> tuple[TrigTerm, ...]:
        return tuple(
            TrigTerm(float(f), complex(c)) for f, c in zip(self._freqs, self._coeffs)
        )

    def __len__(self) -> int:
        return len(self._freqs)

    @property
    def max_frequency(self) -> float:
        """Largest |frequency| present; 0 for the empty polynomial."""
        return float(np.max(np.abs(self._freqs))) if len(self._freqs) else 0.0

    @property
    def coefficient_mass(self) -> float:
        """sum |A_k|, an exact upper bound for sup |f|."""
        return float(np.sum(np.abs(self._coeffs)))

    # -- evaluation ------------------------------------------------------

    def evaluate(self, x):
        """Evaluate at a scalar or ndarray of real points."""
        xa = np.asarray(x, dtype=np.float64)
        if len(self._freqs) == 0:
            out = np.zeros(xa.shape, dtype=np.complex128)
        else:
            out = np.exp(1j * np.multiply.outer(xa, self._freqs)) @ self._coeffs
        return complex(out) if np.ndim(x) == 0 else out

    # -- algebra (all exact, results canonical) --------------------------

    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        if not isinstance(other, TrigPolynomial):
            return NotImplemented
        return TrigPolynomial(
            list(zip(self._freqs, self._coeffs))
            + list(zip(other._freqs, other._coeffs))
        )

    def __mul__(self, other):
        if isinstance(other, TrigPolynomial):
            if len(self) == 0 or len(other) == 0:
                return TrigPolynomial()
            f = np.add.outer(self._freqs, other._freqs).ravel()
            c = np.multiply.outer(self._coeffs, other._coeffs).ravel()
            return TrigPolynomial(zip(f, c))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        if not isinstance(other, TrigPolynomial):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "TrigPolynomial":
        c = complex(c)
        return TrigPolynomial(zip(self._freqs, self._coeffs * c))

    def conjugate(self) -> "TrigPolynomial":
        return TrigPolynomial(zip(-self._freqs, np.conj(self._coeffs)))

    def differentiate(self) -> "TrigPolynomial":
        """Termwise derivative: (lambda, A) -> (lambda, i*lambda*A)."""
        return TrigPolynomial(zip(self._freqs, 1j * self._freqs * self._coeffs))

    def integrate(self) -> "TrigPolynomial":
        """Termwise antiderivative with integration constant 0.

        Raises ZeroFrequencyTerm when a constant term is present: its
        primitive grows linearly and leaves the almost periodic class.
        """
        if np.any(self._freqs == 0.0):
            raise ZeroFrequencyTerm(
                "cannot integrate a signal with a zero-frequency term"
            )
        return TrigPolynomial(zip(self._freqs, self._coeffs / (1j * self._freqs)))

    # -- misc -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigPolynomial):
            return NotImplemented
        return (
            self._freqs.shape == other._freqs.shape
            and bool(np.all(self._freqs == other._freqs))
            and bool(np.all(self._coeffs == other._coeffs))
        )

    def __hash__(self):
        return hash((self._freqs.tobytes(), self._coeffs.tobytes()))

    def __repr__(self) -> str:
        inner = ", ".join(f"({f:g}, {c:g})" for f, c in zip(self._freqs, self._coeffs))
        return f"TrigPolynomial([{inner}])"


# ---------------------------------------------------------------------------
# Operation aliases matching the public contract names.
# ---------------------------------------------------------------------------


def evaluate(p: Signal, x):
    return p.evaluate(x)


def add(p: TrigPolynomial, q: TrigPolynomial) -> TrigPolynomial:
    return p + q


def multiply(p: TrigPolynomial, q: TrigPolynomial) -> TrigPolynomial:
    return p * q


def conjugate(p: TrigPolynomial) -> TrigPolynomial:
    return p.conjugate()


def scale(p: TrigPolynomial, c) -> TrigPolynomial:
    return p.scale(c)


def differentiate(p: TrigPolynomial) -> TrigPolynomial:
    return p.differentiate()


def integrate(p: TrigPolynomial) -> TrigPolynomial:
    return p.integrate()


def as_trig_polynomial(f: Signal) -> TrigPolynomial | None:
    """Return the exact TrigPolynomial form of `f`, or None if it has none."""
    if isinstance(f, TrigPolynomial):
        return f
    to_trig = getattr(f, "as_trig_polynomial", None)
    return to_trig() if callable(to_trig) else None


def max_frequency(f: Signal) -> float | None:
    """Largest |frequency| of `f` when its spectrum is known, else None."""
    p = as_trig_polynomial(f)
    return p.max_frequency if p is not None else None


# ---------------------------------------------------------------------------
# JSON signal specification files.
#
# Schema (exact field names, unknown fields rejected):
#   {"type": "trig", "terms": [{"freq": 1.0, "re": 3.0, "im": 0.0}, ...]}
# ---------------------------------------------------------------------------

_TERM_FIELDS = {"freq", "re", "im"}


def signal_from_json(text: str) -> TrigPolynomial:
    """Parse a signal specification document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SignalFormatError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(doc, dict):
        raise SignalFormatError("top-level value must be an object")
    unknown = set(doc) - {"type", "terms"}
    if unknown:
        raise SignalFormatError(f"unknown field {sorted(unknown)[0]!r}")
    if doc.get("type") != "trig":
        raise SignalFormatError(f"field 'type' must be 'trig', got {doc.get('type')!r}")
    terms = doc.get("terms")
    if not isinstance(terms, list):
        raise SignalFormatError("field 'terms' must be a list")
    parsed = []
    for i, t in enumerate(terms):
        if not isinstance(t, dict):
            raise SignalFormatError(f"terms[{i}] must be an object")
        unknown = set(t) - _TERM_FIELDS
        if unknown:
            raise SignalFormatError(f"terms[{i}]: unknown field {sorted(unknown)[0]!r}")
        missing = _TERM_FIELDS - set(t)
        if missing:
            raise SignalFormatError(f"terms[{i}]: missing field {sorted(missing)[0]!r}")
        for name in ("freq", "re", "im"):
            if not isinstance(t[name], (int, float)) or isinstance(t[name], bool):
                raise SignalFormatError(f"terms[{i}].{name} must be a number")
        try:
            parsed.append(TrigTerm(float(t["freq"]), complex(t["re"], t["im"])))
        except ValueError as e:
            raise SignalFormatError(f"terms[{i}]: {e}") from e
    return TrigPolynomial(parsed)


def load_signal(path) -> TrigPolynomial:
    """Read a signal specification file."""
    with open(path, "r", encoding="utf-8") as fh:
        return signal_from_json(fh.read())


def signal_to_json_dict(p: TrigPolynomial) -> dict:
    return {
        "type": "trig",
        "terms": [
            {"freq": float(f), "re": float(c.real), "im": float(c.imag)}
            for f, c in zip(p.frequencies, p.coefficients)
        ],
    }
