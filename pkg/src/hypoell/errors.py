"""Shared exception types and the rigor grading used across the package."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Rigor(enum.Enum):
    """How trustworthy a computed certificate is.

    CERTIFIED results follow from exact arithmetic or from interval-style
    bounds that cover every point of the relevant domain.  HEURISTIC results
    come from floating-point scans or regressions and may be wrong on
    adversarial input.
    """

    CERTIFIED = "certified"
    HEURISTIC = "heuristic"

    def __and__(self, other: "Rigor") -> "Rigor":
        # combining certificates: a chain is only as rigorous as its weakest link
        if self is Rigor.CERTIFIED and other is Rigor.CERTIFIED:
            return Rigor.CERTIFIED
        return Rigor.HEURISTIC


class HypoellError(Exception):
    """Base class for all package errors."""


class DomainError(HypoellError, ValueError):
    """A parameter is outside the documented domain of an operation."""


class ModelError(HypoellError, ValueError):
    """A spectral model or representation table is malformed."""


class NoGrowthSequence(HypoellError):
    """The model has no unbounded symbol sequence to build singular data on."""


class DegenerateWindow(HypoellError):
    """Window extremization needs a non-constant imaginary part."""


class QuadratureError(HypoellError):
    """Adaptive quadrature ran out of panel budget.

    Carries the best available estimate so callers can decide whether the
    partial answer is still useful.
    """

    def __init__(self, message: str, best_estimate=None, error_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class ResonanceObstruction(HypoellError):
    """A resonant mode has no periodic solution: the compatibility integral
    of the forcing against the adjoint kernel is nonzero.  Carries that
    integral, plus the mode key when raised from a field solve."""

    def __init__(self, message: str, integral: complex, mode=None):
        super().__init__(message)
        self.integral = integral
        self.mode = mode


class KernelOverflow(HypoellError, OverflowError):
    """An integral kernel exceeds the safe exponent cap for this mode."""

    def __init__(self, message: str, mode=None, exponent: float | None = None):
        super().__init__(message)
        self.mode = mode
        self.exponent = exponent


class RecipeInapplicable(HypoellError):
    """A counterexample recipe's applicability conditions fail for this input."""


class InsufficientData(HypoellError):
    """Not enough distinct representation weights to fit a decay profile."""


class Unsupported(HypoellError):
    """Operation not available for this spectral model."""


@dataclass(frozen=True)
class SolveNote:
    """Non-fatal diagnostic attached to a solve (ill-conditioning, overflow risk)."""

    kind: str          # "IllConditioned" | "OverflowRisk" | "ResonanceProjection"
    detail: str
    value: float = 0.0

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return f"{self.kind}: {self.detail}"
