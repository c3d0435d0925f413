"""End-to-end decision procedure for global hypoellipticity.

The operator  d/dt + c(t) X + q  on the product of the circle with a compact
group is classified by a case analysis on the imaginary part b of the drift
coefficient:

* b constant: only the averaged symbol c0 = mean(c) matters, and the verdict
  is the constant-coefficient criterion — the resonant set must not be an
  infinite family and the divisor gaps need a polynomial lower bound.
* b non-constant: the constant-part operator (with symbol c0) is a necessary
  condition; once it passes, the verdict is read off the sign pattern of b —
  a sign change destroys global hypoellipticity, a one-sided b secures it.

Exact Gaussian-rational data yields certified verdicts; float data yields
heuristic ones, and Undecided when the scans cannot settle the constant-part
criterion either way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .diophantine import (
    ArithmeticInput,
    DiophantineReport,
    ResonantVerdict,
    lower_bound_scan,
    resonant_set,
    split_q,
)
from .errors import DomainError, Rigor
from .spectra import SpectralModel
from .torusfn import SignCertificate, SignVerdict, TrigPoly, sign_certificate

__all__ = [
    "Decision", "ConstantPartStatus", "Verdict", "classify", "explain",
    "BOUND_FLOOR",
]

BOUND_FLOOR = 1e-6   # heuristic cut: a box constant below this is "suspiciously small"


class Decision(Enum):
    GLOBALLY_HYPOELLIPTIC = "GloballyHypoelliptic"
    NOT_GLOBALLY_HYPOELLIPTIC = "NotGloballyHypoelliptic"
    UNDECIDED = "Undecided"


class ConstantPartStatus(Enum):
    """Outcome of the constant-coefficient criterion on the averaged symbol."""

    SOLVABLE = "Solvable"              # finite resonances + divisor lower bound
    OBSTRUCTED = "Obstructed"          # infinite resonant family
    INCONCLUSIVE = "Inconclusive"      # scans could not settle either side


@dataclass(frozen=True)
class Verdict:
    """Decision with its full certificate chain.

    `path` names the branch of the case analysis that decided; `sign` is the
    certificate for the imaginary part of the drift (of its oscillating part
    on the constant branch); `resonance`/`bound` are the constant-part
    reports; `counterexample_hint` names the singular-solution recipe that
    matches a negative verdict.
    """

    decision: Decision
    rigor: Rigor
    path: str
    sign: SignCertificate | None
    resonance: DiophantineReport | None
    bound: DiophantineReport | None
    constant_part: ConstantPartStatus
    counterexample_hint: str | None = None
    notes: tuple[str, ...] = ()


def _strip_mean(b: TrigPoly) -> TrigPoly:
    """The oscillating part of a trig polynomial (all nonzero frequencies)."""
    coeffs = {}
    exact = {}
    for n, c in b.items():
        if n == 0:
            continue
        coeffs[n] = c
        e = b.exact_coeff(n)
        if e is not None:
            exact[n] = e
    return TrigPoly(coeffs, exact)


def _constant_part_criterion(model: SpectralModel, arith: ArithmeticInput,
                             max_label: int, scan_k: int,
                             m_grid: tuple[float, ...], bound_floor: float):
    """Constant-coefficient solvability of the averaged symbol.

    Returns (status, rigor, resonance_report, bound_report, notes).  An
    infinite resonant family refutes it; otherwise the divisor gaps need a
    polynomial lower bound, certified exactly when possible (then with the
    weight exponent 0) and otherwise box-scanned over the m_grid exponents.
    """
    notes: list[str] = []
    res = resonant_set(model, arith, max_label)
    if res.verdict is ResonantVerdict.INFINITE_FAMILY:
        return (ConstantPartStatus.OBSTRUCTED, res.rigor, res, None, notes)
    if res.verdict is ResonantVerdict.UNKNOWN_HEURISTIC:
        notes.append("resonance scan hit the truncation edge")
        return (ConstantPartStatus.INCONCLUSIVE, Rigor.HEURISTIC, res, None, notes)

    best_rep: DiophantineReport | None = None
    for m in sorted(set(float(m) for m in m_grid)):
        rep = lower_bound_scan(model, arith, m, scan_k, max_label)
        c_best = rep.bound_constants.c_best if rep.bound_constants else 0.0
        if rep.rigor is Rigor.CERTIFIED and c_best > 0.0:
            return (ConstantPartStatus.SOLVABLE, res.rigor & rep.rigor,
                    res, rep, notes)
        if best_rep is None or c_best > best_rep.bound_constants.c_best:
            best_rep = rep
        if c_best >= bound_floor:
            notes.append(f"divisor bound accepted heuristically at M={m:g}")
            return (ConstantPartStatus.SOLVABLE, Rigor.HEURISTIC, res, rep, notes)
    notes.append("no scanned weight exponent lifted the divisor gaps above "
                 f"{bound_floor:g}; possible small-denominator behavior")
    return (ConstantPartStatus.INCONCLUSIVE, Rigor.HEURISTIC, res, best_rep, notes)




def classify(model: SpectralModel, c: TrigPoly, q, *,
             max_label: int = 30, scan_k: int = 200,
             m_grid: tuple[float, ...] = (0.0, 1.0, 2.0, 4.0),
             bound_floor: float = BOUND_FLOOR,
             grid_size: int = 256) -> Verdict:
    """Decide global hypoellipticity of  d/dt + c(t) X + q  on the model.

    `q` may be a complex number (float evidence), an exact real
    (int/Fraction/'p/q'), or a pair of exact reals (re, im).  Exactness of
    the verdict additionally requires the drift's constant coefficient to be
    tracked exactly by the trig polynomial.
    """
    if not isinstance(c, TrigPoly):
        raise DomainError("classify expects the drift as a trig polynomial")
    q_re, q_im = split_q(q)
    arith = ArithmeticInput.from_operator(c, q_re, q_im)

    b = c.imag_part()
    osc = _strip_mean(b)
    cert_osc = sign_certificate(osc, grid_size=grid_size)
    b0 = float(b.coeff(0).real)

    status, l0_rigor, res, bnd, notes = _constant_part_criterion(
        model, arith, max_label, scan_k, tuple(m_grid), bound_floor)
    if not arith.exact:
        notes = list(notes) + ["drift mean or q not exact: float evidence only"]

    if cert_osc.verdict is SignVerdict.IDENTICALLY_ZERO:
        # constant imaginary part: the averaged criterion is the whole story
        path = "constant-imaginary-part criterion"
        if status is ConstantPartStatus.SOLVABLE:
            return Verdict(Decision.GLOBALLY_HYPOELLIPTIC, l0_rigor, path,
                           cert_osc, res, bnd, status, None, tuple(notes))
        if status is ConstantPartStatus.OBSTRUCTED:
            return Verdict(Decision.NOT_GLOBALLY_HYPOELLIPTIC, l0_rigor, path,
                           cert_osc, res, bnd, status,
                           "homogeneous-resonant", tuple(notes))
        return Verdict(Decision.UNDECIDED, Rigor.HEURISTIC, path,
                       cert_osc, res, bnd, status, None, tuple(notes))

    # oscillating imaginary part: necessity of the averaged criterion first
    cert_b = sign_certificate(b, grid_size=grid_size)
    if status is ConstantPartStatus.OBSTRUCTED:
        return Verdict(Decision.NOT_GLOBALLY_HYPOELLIPTIC, l0_rigor,
                       "averaged-symbol necessity", cert_b, res, bnd, status,
                       "homogeneous-resonant", tuple(notes))

    if cert_b.verdict is SignVerdict.CHANGES_SIGN:
        # decisive regardless of the averaged criterion: if the averaged
        # operator is solvable the sign change obstructs, and if it is not
        # solvable the necessity already fails
        hint = "sign-change-b0neg" if b0 < 0 else "sign-change-b0pos"
        extra = tuple(notes)
        if status is ConstantPartStatus.INCONCLUSIVE:
            extra = extra + ("sign change decides both ways of the "
                             "unsettled averaged criterion",)
        return Verdict(Decision.NOT_GLOBALLY_HYPOELLIPTIC, cert_b.rigor,
                       "sign-change obstruction", cert_b, res, bnd, status,
                       hint, extra)

    if status is ConstantPartStatus.INCONCLUSIVE:
        return Verdict(Decision.UNDECIDED, Rigor.HEURISTIC,
                       "averaged criterion unsettled", cert_b, res, bnd,
                       status, None, tuple(notes))

    # averaged part solvable and b single-signed: sufficiency
    return Verdict(Decision.GLOBALLY_HYPOELLIPTIC, l0_rigor & cert_b.rigor,
                   "one-sided-drift sufficiency", cert_b, res, bnd, status,
                   None, tuple(notes))


def _sign_lines(cert: SignCertificate | None) -> list[str]:
    if cert is None:
        return []
    lines = [f"sign of drift imaginary part: {cert.verdict.value} "
             f"[{cert.rigor.value}]"]
    if cert.positive_witness is not None:
        t, v = cert.positive_witness
        lines.append(f"  positive at t={t:.6g}: {v:.6g}")
    if cert.negative_witness is not None:
        t, v = cert.negative_witness
        lines.append(f"  negative at t={t:.6g}: {v:.6g}")
    return lines


def explain(verdict: Verdict) -> str:
    """Stable, human-readable rendering of a verdict's certificate chain."""
    lines = [
        f"decision: {verdict.decision.value} [{verdict.rigor.value}]",
        f"path: {verdict.path}",
        f"averaged criterion: {verdict.constant_part.value}",
    ]
    lines.extend(_sign_lines(verdict.sign))
    if verdict.resonance is not None:
        head = verdict.resonance.describe().splitlines()
        lines.extend(head[:4])      # verdict line + up to 3 witnesses
        extra = len(verdict.resonance.resonant_witnesses) - 3
        if extra > 0:
            lines.append(f"  ... and {extra} more witnesses")
    if verdict.bound is not None and verdict.bound.bound_constants is not None:
        lines.extend(verdict.bound.describe().splitlines())
    if verdict.counterexample_hint:
        lines.append(f"counterexample recipe: {verdict.counterexample_hint}")
    for n in verdict.notes:
        lines.append(f"note: {n}")
    return "\n".join(lines)
