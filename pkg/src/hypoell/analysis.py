"""Coefficient-side certification of smoothness and distributional order.

A function on the product of the circle with a compact group is smooth
exactly when the sup-norms of its partial coefficients decay faster than any
power of the representation weight, and it is (at worst) a distribution of
finite order exactly when pairings against test functions grow at most
polynomially in the weight.  This module turns both characterizations into
finite, reproducible checks on truncated coefficient fields:

* :func:`decay_classify` fits log sup-norm against log weight and sorts a
  field into rapid decay, a polynomial bound, or growth too fast for any
  tempered bound;
* :func:`distribution_pairing` measures the empirical first-order pairing
  constant against a battery of test waves;
* :func:`plancherel_norm` does the weighted Hilbert-Schmidt accounting at a
  fixed time;
* :func:`synthesize_torus` inverts the transform pointwise on the circle
  model, where the reps are scalar.

Any finite test of an asymptotic statement needs cutoffs; the thresholds used
here (tail fraction, rapid-decay slope, square-root growth rate) are recorded
on every profile so reports are self-describing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, InsufficientData, Unsupported
from .fields import CoefficientField, GridFn, grid_points
from .spectra import Torus1
from .torusfn import TWO_PI, PeriodicFn, TrigPoly

# Artifact policy: "rapid decay" is asymptotic, so a finite test needs a slope
# cutoff; six weights give the regression minimal room.  Both are recorded in
# every profile and overridable per call.
SLOPE_RAPID = 6.0
SQRT_GROWTH_MIN = 0.05
MIN_DISTINCT_WEIGHTS = 6


class DecayClass(Enum):
    """Verdict of the coefficient-decay regression."""

    RAPID_DECAY = "RapidDecay"
    POLYNOMIAL_BOUND = "PolynomialBound"
    NO_TEMPERED_BOUND = "NoTemperedBound"


@dataclass(frozen=True)
class DecayRecord:
    """Sup-norms of one representation's coefficients and their derivatives."""

    label: int
    weight: float
    sup_norms: tuple[float, ...]  # index = derivative order, 0..B_max


@dataclass(frozen=True)
class DecayProfile:
    """Fitted decay behaviour of a coefficient field.

    ``slopes[beta]`` is the least-squares slope of log sup-norm of the
    beta-th time derivative against log weight over the tail half of the
    records (``math.inf`` with a negative sign when the tail is identically
    zero at that order).  ``order`` is the polynomial exponent K for the
    POLYNOMIAL_BOUND class, rounded from the undifferentiated slope and
    clamped at zero.  ``sqrt_growth_rate`` is the fitted coefficient gamma of
    the alternative model  log sup ~ gamma * sqrt(weight);  growth faster
    than every polynomial shows up as a positive gamma with the square-root
    model fitting the tail better than the log-log line.
    """

    records: tuple[DecayRecord, ...]
    slopes: tuple[float, ...]
    classification: DecayClass
    order: int | None
    slope_rapid: float
    sqrt_growth_min: float
    sqrt_growth_rate: float
    tail_start: float

    def describe(self) -> str:
        if self.classification is DecayClass.POLYNOMIAL_BOUND:
            head = f"PolynomialBound({self.order})"
        else:
            head = self.classification.value
        slopes = ", ".join(
            f"d^{b}: {s:+.3f}" if math.isfinite(s) else f"d^{b}: zero tail"
            for b, s in enumerate(self.slopes))
        return (f"{head}; tail slopes [{slopes}]; sqrt-growth rate "
                f"{self.sqrt_growth_rate:+.4f}; tail starts at weight "
                f"{self.tail_start:.4g}")

    def to_table(self) -> str:
        """CSV rows (weight, beta, sup_norm, log_weight, log_sup) for plotting."""
        lines = ["weight,beta,sup_norm,log_weight,log_sup"]
        for rec in self.records:
            for beta, s in enumerate(rec.sup_norms):
                logs = f"{math.log(s):.12g}" if s > 0.0 else ""
                lines.append(f"{rec.weight:.12g},{beta},{s:.12g},"
                             f"{math.log(rec.weight):.12g},{logs}")
        return "\n".join(lines) + "\n"


def _fit_line(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Least-squares slope, intercept, and sum of squared residuals."""
    a = np.vstack([x, np.ones_like(x)]).T
    sol, res, _, _ = np.linalg.lstsq(a, y, rcond=None)
    sse = float(res[0]) if res.size else float(np.sum((a @ sol - y) ** 2))
    return float(sol[0]), float(sol[1]), sse


def decay_classify(field: CoefficientField, B_max: int = 2, *,
                   slope_rapid: float = SLOPE_RAPID,
                   sqrt_growth_min: float = SQRT_GROWTH_MIN) -> DecayProfile:
    """Classify the weight-decay of a coefficient field's sup-norms.

    For each representation present in the field the sup over its matrix
    entries of the grid sup-norm is recorded for derivative orders 0..B_max
    (spectral differentiation of the interpolants).  The classification
    looks only at the tail half of the weights:

    * RAPID_DECAY when every order's log-log slope is at most -slope_rapid
      (an identically zero field qualifies trivially);
    * NO_TEMPERED_BOUND when the undifferentiated sup-norms grow and the
      exponential model  log sup ~ gamma*sqrt(weight)  with gamma at least
      ``sqrt_growth_min`` fits the tail better than any power law;
    * POLYNOMIAL_BOUND(K) otherwise, K the rounded undifferentiated slope
      (never negative: a bounded or decaying field has order 0).

    Multiplying the whole field by a fixed nonzero scalar shifts every log
    sup-norm by a constant and therefore changes nothing classified here.
    """
    if B_max < 0:
        raise DomainError("B_max must be non-negative")
    labels = field.labels()
    records = []
    for label in labels:
        rep = field.model.rep(label)
        sups = [0.0] * (B_max + 1)
        for (lab, r, s) in field.keys():
            if lab != label:
                continue
            g = field.get(lab, r, s)
            for beta in range(B_max + 1):
                sups[beta] = max(sups[beta], g.sup())
                if beta < B_max:
                    g = g.derivative()
        records.append(DecayRecord(label, float(rep.weight), tuple(sups)))
    records.sort(key=lambda rec: (rec.weight, rec.label))
    weights = [rec.weight for rec in records]
    if len(set(weights)) < MIN_DISTINCT_WEIGHTS:
        raise InsufficientData(
            f"decay classification needs at least {MIN_DISTINCT_WEIGHTS} "
            f"distinct representation weights, got {len(set(weights))}")

    tail = records[len(records) // 2:]
    tail_start = tail[0].weight
    neg_inf = -math.inf
    slopes: list[float] = []
    for beta in range(B_max + 1):
        pts = [(math.log(rec.weight), math.log(rec.sup_norms[beta]))
               for rec in tail if rec.sup_norms[beta] > 0.0]
        if len(pts) < 2:
            slopes.append(neg_inf)
            continue
        x = np.array([p[0] for p in pts])
        y = np.array([p[1] for p in pts])
        slope, _, _ = _fit_line(x, y)
        slopes.append(slope)

    all_zero = all(rec.sup_norms[0] == 0.0 for rec in records)
    sqrt_rate = 0.0
    pts0 = [(rec.weight, math.log(rec.sup_norms[0]))
            for rec in tail if rec.sup_norms[0] > 0.0]
    sse_log = sse_sqrt = math.inf
    if len(pts0) >= 2:
        w = np.array([p[0] for p in pts0])
        y = np.array([p[1] for p in pts0])
        _, _, sse_log = _fit_line(np.log(w), y)
        sqrt_rate, _, sse_sqrt = _fit_line(np.sqrt(w), y)

    if all_zero or all(s <= -slope_rapid for s in slopes):
        cls, order = DecayClass.RAPID_DECAY, None
    elif sse_sqrt < sse_log and sqrt_rate >= sqrt_growth_min:
        cls, order = DecayClass.NO_TEMPERED_BOUND, None
    else:
        s0 = slopes[0]
        order = max(0, int(round(s0))) if math.isfinite(s0) else 0
        cls = DecayClass.POLYNOMIAL_BOUND

    return DecayProfile(tuple(records), tuple(slopes), cls, order,
                        slope_rapid, sqrt_growth_min, sqrt_rate, tail_start)


def default_battery() -> tuple[TrigPoly, ...]:
    """Eight fixed low-frequency test waves for distribution pairings."""
    waves = [TrigPoly.from_rows([(0, 1, 0)])]
    for n in (1, 2, 3):
        waves.append(TrigPoly.from_rows([(n, "1/2", 0), (-n, "1/2", 0)]))     # cos nt
        waves.append(TrigPoly.from_rows([(n, 0, "-1/2"), (-n, 0, "1/2")]))    # sin nt
    waves.append(TrigPoly.from_rows([(5, "1/2", 0), (-5, "1/2", 0)]))         # cos 5t
    return tuple(waves)


def distribution_pairing(field: CoefficientField,
                         psi: Sequence[PeriodicFn | Callable]) -> float:
    """Empirical first-order pairing constant of a coefficient field.

    Returns the maximum over the battery and over the modes present of
    |integral of coeff * psi| / (p1(psi) * weight), where p1 is the sup-norm
    of psi plus the sup-norm of its derivative.  A field of distributional
    order at most one keeps this bounded; the returned number is the bound
    realized on the battery.  Zero-valued test functions are rejected.
    """
    if len(psi) == 0:
        raise DomainError("the test battery must be nonempty")
    n = field.grid_size
    tg = grid_points(n)
    tests = []
    for fn in psi:
        g = fn if isinstance(fn, GridFn) and fn.grid_size == n else \
            GridFn(np.asarray(fn(tg), dtype=complex))
        p1 = g.sup() + g.derivative().sup()
        if p1 == 0.0:
            raise DomainError("a test function in the battery is identically zero")
        tests.append((g.values, p1))
    best = 0.0
    dt = TWO_PI / n
    for (label, r, s), g in field.items():
        w = float(field.model.rep(label).weight)
        for vals, p1 in tests:
            pairing = abs(np.sum(g.values * vals)) * dt
            best = max(best, pairing / (p1 * w))
    return best


def plancherel_norm(field: CoefficientField, t: float) -> float:
    """Weighted Hilbert-Schmidt norm of the truncated transform at time t.

    The square root of the sum over representations of dim times the squared
    absolute values of all stored matrix entries evaluated at t.  Adding more
    modes can only increase it.
    """
    total = 0.0
    for (label, r, s), g in field.items():
        d = field.model.rep(label).dim
        total += d * abs(complex(g(t))) ** 2
    return math.sqrt(total)


def synthesize_torus(field: CoefficientField, t: float, x: float) -> complex:
    """Pointwise inverse transform on the circle model: sum of coeff * e^{inx}.

    Only the circle model has scalar representations indexed by the integer
    frequency; for any other model pointwise synthesis is not offered.
    """
    if not isinstance(field.model, Torus1):
        raise Unsupported("pointwise synthesis is only available on the circle model")
    total = 0.0 + 0.0j
    for (label, r, s), g in field.items():
        total += complex(g(t)) * cmath.exp(1j * label * x)
    return total
