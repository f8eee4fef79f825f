"""Exception types shared across the toolkit.

Operations that iterate an averaging window carry their partial trace on
the raised exception so callers (and the CLI) can still report it.
"""

from __future__ import annotations


class ApSpectraError(Exception):
    """Base class for all toolkit errors."""


class InvalidRange(ApSpectraError):
    """An interval argument is empty, reversed, or otherwise unusable."""


class StepTooCoarse(ApSpectraError):
    """A sampling step violates the oscillation-rate guard for the signal."""


class ZeroFrequencyTerm(ApSpectraError):
    """Antiderivative requested for a signal with a nonzero constant part."""


class ZeroExponent(ApSpectraError):
    """A decay-bound check was asked for the exponent 0, where the bound is undefined."""


class EmptyList(ApSpectraError):
    """No translation numbers available for a gap estimate."""


class NotPeriodic(ApSpectraError):
    """A signal failed the numeric 1-periodicity probe."""


class SignalFormatError(ApSpectraError):
    """A signal specification file is malformed.

    `detail` names the offending field or carries the JSON parser's
    line/column message.
    """

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class NotConverged(ApSpectraError):
    """An iterative estimate hit its window/refinement cap without settling.

    `estimate` holds the partial result (trace included) computed so far.
    """

    def __init__(self, message: str, estimate=None):
        super().__init__(message)
        self.estimate = estimate
