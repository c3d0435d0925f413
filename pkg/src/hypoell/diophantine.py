"""Arithmetic of the constant-coefficient criteria.

For a constant symbol the obstruction to solving each mode is the distance
from the integer k to the complex number i*q - c0*mu, over all k and all
frequencies mu of the spectral model.  This module decides, exactly for
Gaussian-rational data and by scans otherwise:

* which (k, rep, r) triples are resonant (the distance is zero),
* the best lower-bound constant C with  gap >= C * (|k| + <weight>)^-M,
* the equivalent multiplicative gap |1 - e^{+-2 pi i (c0 mu - i q)}|,
* continued-fraction evidence about how well a real drift constant is
  approximable by rationals (the torus obstruction to solvability).

Exact inputs use Fraction arithmetic throughout.  A certified verdict is
backed by an argument covering the whole (infinite) frequency universe, not
just the scanned box; everything else is flagged heuristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, Rigor
from .spectra import SpectralModel

__all__ = [
    "RES_TOL", "SCAN_EXP_CAP",
    "ArithmeticInput", "ResonanceWitness", "BoundWitness", "BoundConstants",
    "ResonantVerdict", "DiophantineReport", "ExpGap",
    "resonant_set", "lower_bound_scan", "exp_gap",
    "lemma_gap_equivalence", "GapEquivalenceReport",
    "liouville_probe", "LiouvilleClass", "LiouvilleReport",
]

RES_TOL = 1e-9        # float-mode resonance tolerance (same cut as the mode solver)
SCAN_EXP_CAP = 700.0  # exponent ceiling before the multiplicative gap saturates


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise DomainError(f"not an exact real: {value!r} (use int, Fraction, or 'p/q')")


def _fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_gauss(re: Fraction, im: Fraction) -> str:
    if im == 0:
        return _fmt_frac(re)
    if re == 0:
        return f"{_fmt_frac(im)}*i"
    sign = "+" if im > 0 else "-"
    return f"{_fmt_frac(re)} {sign} {_fmt_frac(abs(im))}*i"


@dataclass(frozen=True)
class ArithmeticInput:
    """Constant drift c0 and zero-order term q, exact or floating.

    Exact inputs carry Gaussian-rational components (Fractions); float inputs
    carry only the complex values.  Certified verdicts require exactness.
    """

    c0: complex
    q: complex
    exact: bool
    c0_re: Fraction | None = None
    c0_im: Fraction | None = None
    q_re: Fraction | None = None
    q_im: Fraction | None = None

    def __post_init__(self):
        for z, name in ((self.c0, "c0"), (self.q, "q")):
            z = complex(z)
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise DomainError(f"{name} must be finite, got {z}")
        if self.exact and None in (self.c0_re, self.c0_im, self.q_re, self.q_im):
            raise DomainError("exact input requires all four rational components")

    @classmethod
    def exact_input(cls, c0_re, c0_im, q_re, q_im) -> "ArithmeticInput":
        """Gaussian-rational data; each part an int, Fraction, or 'p/q' string."""
        cr, ci = _as_fraction(c0_re), _as_fraction(c0_im)
        qr, qi = _as_fraction(q_re), _as_fraction(q_im)
        return cls(c0=complex(float(cr), float(ci)), q=complex(float(qr), float(qi)),
                   exact=True, c0_re=cr, c0_im=ci, q_re=qr, q_im=qi)

    @classmethod
    def float_input(cls, c0: complex, q: complex) -> "ArithmeticInput":
        return cls(c0=complex(c0), q=complex(q), exact=False)

    @classmethod
    def from_operator(cls, c, q_re, q_im) -> "ArithmeticInput":
        """From a drift coefficient (only its mean matters) and exact q parts.

        Exact when the coefficient knows the exact value of its mean;
        otherwise every verdict downgrades to heuristic.
        """
        pair = c.exact_coeff(0) if hasattr(c, "exact_coeff") else None
        if pair is not None:
            try:
                return cls.exact_input(pair[0], pair[1], q_re, q_im)
            except DomainError:
                pass
        qr = float(Fraction(q_re)) if isinstance(q_re, str) else float(q_re)
        qi = float(Fraction(q_im)) if isinstance(q_im, str) else float(q_im)
        return cls.float_input(complex(c.coeff(0)), complex(qr, qi))

    def describe(self) -> str:
        if self.exact:
            return (f"c0 = {_fmt_gauss(self.c0_re, self.c0_im)}, "
                    f"q = {_fmt_gauss(self.q_re, self.q_im)} (exact)")
        return f"c0 = {self.c0}, q = {self.q} (float)"


def split_q(q):
    """Split a zero-order term into (re, im) parts, keeping exactness.

    Accepts a complex number (float evidence), an exact real given as
    int/Fraction/'p/q' string, or a pair (re, im) of such exact reals.
    """
    if isinstance(q, tuple):
        if len(q) != 2:
            raise DomainError("q as a pair must be (re, im)")
        return q[0], q[1]
    if isinstance(q, (int, Fraction, str)):
        return q, 0
    z = complex(q)
    return z.real, z.imag


class ResonanceWitness(NamedTuple):
    """One zero of k + c0*mu_r - i*q: the integer k and the (label, r) slot."""

    k: int
    label: int
    r: int


class BoundWitness(NamedTuple):
    """Extremal point of a lower-bound scan: the gap and the weighted value."""

    k: int
    label: int
    r: int
    gap: float
    bound: float


class BoundConstants(NamedTuple):
    c_best: float
    m: float
    scan_k: int
    max_label: int


class ResonantVerdict(Enum):
    EMPTY = "Empty"
    FINITE_LISTED = "FiniteListed"
    INFINITE_FAMILY = "InfiniteFamily"
    UNKNOWN_HEURISTIC = "UnknownHeuristic"


@dataclass(frozen=True)
class DiophantineReport:
    """Outcome of a resonance enumeration and/or a lower-bound scan."""

    verdict: ResonantVerdict | None = None
    description: str = ""
    resonant_witnesses: tuple[ResonanceWitness, ...] = ()
    bound_constants: BoundConstants | None = None
    violation_witnesses: tuple[BoundWitness, ...] = ()
    rigor: Rigor = Rigor.HEURISTIC

    def describe(self) -> str:
        lines = []
        if self.verdict is not None:
            lines.append(f"resonant set: {self.verdict.value} [{self.rigor.value}]")
            if self.description:
                lines.append(f"  {self.description}")
            for w in self.resonant_witnesses:
                lines.append(f"  witness: k={w.k} at rep label={w.label} r={w.r}")
        if self.bound_constants is not None:
            b = self.bound_constants
            lines.append(
                f"lower bound: C_best={b.c_best:.12g} at M={b.m:g} "
                f"(box |k|<={b.scan_k}, labels<={b.max_label}) [{self.rigor.value}]")
            if self.description and self.verdict is None:
                lines.append(f"  {self.description}")
            for w in self.violation_witnesses:
                lines.append(
                    f"  extremal: k={w.k} label={w.label} r={w.r} "
                    f"gap={w.gap:.6g} bound={w.bound:.6g}")
        return "\n".join(lines) if lines else "(empty report)"


# --------------------------------------------------------------------------
# resonance structure, exact
# --------------------------------------------------------------------------

def _full_lattice(model: SpectralModel) -> Fraction | None:
    """The step L when the frequency universe is exactly L*Z, else None.

    Probed rather than hard-coded per model: the universe is a full lattice
    when arbitrarily large multiples of the base step are still frequencies.
    Finite tables fail the probe regardless of their declared lattice.
    """
    if not model.supports_unbounded_mu:
        return None
    lat = model.mu_lattice()
    if lat is None or lat <= 0:
        return None
    probes = (7, 10 ** 6 + 1, -(10 ** 6 + 3))
    if all(model.mu_in_universe(lat * p) for p in probes):
        return lat
    return None


def _is_resonant_mu(arith: ArithmeticInput, mu: Fraction) -> int | None:
    """The integer k making k + c0*mu - i*q vanish, or None."""
    if arith.c0_im * mu != arith.q_re:
        return None
    k = -arith.q_im - arith.c0_re * mu
    return int(k) if k.denominator == 1 else None


def _exact_resonance_structure(model: SpectralModel, arith: ArithmeticInput):
    """Global structure of the resonant frequency set, exactly.

    Returns (infinite, nonempty, description).  The equation
    k + c0*mu - i*q = 0 splits into Re: k + c0_re*mu + q_im = 0 and
    Im: c0_im*mu = q_re.
    """
    cr, ci, qr, qi = arith.c0_re, arith.c0_im, arith.q_re, arith.q_im
    if ci != 0:
        mu = qr / ci
        k = -qi - cr * mu
        if k.denominator != 1:
            return False, False, (f"no integer matches: the single candidate "
                                  f"frequency mu = {_fmt_frac(mu)} needs "
                                  f"k = {_fmt_frac(k)}")
        if not model.mu_in_universe(mu):
            return False, False, (f"the single candidate frequency "
                                  f"mu = {_fmt_frac(mu)} is not realized")
        infinite = model.infinitely_many_reps_contain(mu)
        desc = f"k = {_fmt_frac(k)} at mu = {_fmt_frac(mu)}"
        if infinite:
            desc += " (carried by infinitely many reps)"
        return infinite, True, desc

    # c0 real: the imaginary part demands Re q = 0
    if qr != 0:
        return False, False, "imaginary part never vanishes (Re q != 0, real c0)"

    lattice = _full_lattice(model)
    if lattice is None:
        # finite universe: count the tabulated resonant frequencies
        hits = [mu for mu in model.mu_candidates(Fraction(10 ** 12))
                if _is_resonant_mu(arith, mu) is not None]
        if not hits:
            return False, False, "no tabulated frequency is resonant"
        shown = ", ".join(_fmt_frac(m) for m in hits[:6])
        more = ", ..." if len(hits) > 6 else ""
        return False, True, f"resonant at tabulated mu in {{{shown}{more}}}"

    if cr == 0:
        if qi.denominator == 1:
            return True, True, f"k = {_fmt_frac(-qi)} at every frequency (c0 real)"
        return False, False, "real c0 with -Im q not an integer"

    # mu = lattice*j: need -q_im - c0_re*lattice*j integral, a congruence in j
    step = cr * lattice
    a, b = step.numerator, step.denominator       # step = a/b in lowest terms
    c, d = qi.numerator, qi.denominator           # q_im = c/d in lowest terms
    mod = b * d
    rhs = (-b * c) % mod
    g = math.gcd(d * a, mod)
    if rhs % g != 0:
        return False, False, "the congruence for the frequency index has no solution"
    j0 = (rhs // g) * pow(d * a // g, -1, mod // g) % (mod // g)
    period = mod // g
    desc = (f"every frequency mu = {_fmt_frac(lattice)}*j with "
            f"j = {j0} (mod {period})")
    return True, True, desc


def resonant_set(model: SpectralModel, arith: ArithmeticInput,
                 max_label: int) -> DiophantineReport:
    """All zeros of k + c0*mu_r - i*q over integers k and model frequencies.

    Exact inputs get an exact verdict (Empty / FiniteListed / InfiniteFamily)
    valid for the whole frequency universe, with witnesses listed up to
    max_label.  Float inputs get a tolerance scan; witnesses near the
    truncation edge force UnknownHeuristic because the family may continue.
    """
    if arith.exact:
        infinite, nonempty, desc = _exact_resonance_structure(model, arith)
        witnesses = []
        for rep in model.enumerate_reps(max_label):
            for r, mu in enumerate(rep.mu):
                k = _is_resonant_mu(arith, mu)
                if k is not None:
                    witnesses.append(ResonanceWitness(k, rep.label, r))
        rigor = Rigor.CERTIFIED
        if infinite:
            verdict = ResonantVerdict.INFINITE_FAMILY
        elif nonempty:
            verdict = ResonantVerdict.FINITE_LISTED
        else:
            verdict = ResonantVerdict.EMPTY
        if model.supports_unbounded_mu and _full_lattice(model) is None:
            # a declared-incomplete table: the verdict covers only the table
            desc += "; unknown beyond the tabulated reps"
            rigor = Rigor.HEURISTIC
        return DiophantineReport(verdict=verdict, description=desc,
                                 resonant_witnesses=tuple(witnesses),
                                 rigor=rigor)

    # float mode: nearest-integer test per (rep, r)
    witnesses = []
    edge = False
    reps = model.enumerate_reps(max_label)
    top = max((abs(rep.label) for rep in reps), default=0)
    cutoff = max(1, top - max(1, top // 10))
    for rep in reps:
        for r, mu in enumerate(rep.mu):
            z = arith.c0 * float(mu) - 1j * arith.q
            k = -round(z.real)
            if abs(k + z) <= RES_TOL:
                witnesses.append(ResonanceWitness(int(k), rep.label, r))
                if abs(rep.label) >= cutoff:
                    edge = True
    if not witnesses:
        verdict = ResonantVerdict.EMPTY
        desc = f"no gap below {RES_TOL:g} in the scanned box"
    elif edge:
        verdict = ResonantVerdict.UNKNOWN_HEURISTIC
        desc = "witnesses reach the truncation edge; the family may continue"
    else:
        verdict = ResonantVerdict.FINITE_LISTED
        desc = "witnesses are interior to the scanned box"
    return DiophantineReport(verdict=verdict, description=desc,
                             resonant_witnesses=tuple(witnesses),
                             rigor=Rigor.HEURISTIC)


# --------------------------------------------------------------------------
# lower bound scans
# --------------------------------------------------------------------------

def _nearest_k_values(x) -> tuple[int, ...]:
    k = round(x)        # exact for Fraction, float otherwise
    return (k - 1, k, k + 1)


def _exact_abs2(k: int, mu: Fraction, arith: ArithmeticInput) -> Fraction:
    re = Fraction(k) + arith.c0_re * mu + arith.q_im
    im = arith.c0_im * mu - arith.q_re
    return re * re + im * im


def _frac_sqrt_upper(x: Fraction) -> Fraction:
    """A rational upper bound for sqrt(x), tight enough for range cuts."""
    if x <= 0:
        return Fraction(0)
    r = Fraction(math.sqrt(float(x))).limit_denominator(10 ** 6)
    while r * r < x:
        r *= Fraction(201, 200)
    return r


def _certified_global_min(model: SpectralModel, arith: ArithmeticInput):
    """Exact global infimum of |k + c0*mu - i*q|^2 over nonresonant points.

    Only meaningful for the unweighted bound (M = 0).  Covers the whole
    integer range of k and the whole frequency universe: a full lattice is
    cut down to finitely many candidates by exact dominance arguments, a
    finite table is enumerated outright.  Returns (min_square, k, mu) or
    None when no certification applies.
    """
    cr, ci, qr, qi = arith.c0_re, arith.c0_im, arith.q_re, arith.q_im
    lattice = _full_lattice(model)

    def better(best, k, mu):
        v = _exact_abs2(k, mu, arith)
        if v == 0:
            return best
        if best is None or v < best[0]:
            return (v, k, mu)
        return best

    if lattice is None:
        if model.supports_unbounded_mu:
            return None      # declared-incomplete table: nothing global to say
        best = None
        for mu in model.mu_candidates(Fraction(10 ** 12)):
            for k in _nearest_k_values(-(cr * mu + qi)):
                best = better(best, k, mu)
        return best

    if ci != 0:
        # |Im| = |ci*mu - qr| grows linearly in mu, so any seed value
        # dominates all but finitely many frequencies.
        center = qr / ci
        j_mid = round(center / lattice)
        best = None
        for j in range(j_mid - 2, j_mid + 3):
            mu = lattice * j
            for k in _nearest_k_values(-(cr * mu + qi)):
                best = better(best, k, mu)
        if best is None:
            return None
        span = _frac_sqrt_upper(best[0] / (ci * ci))   # |mu - center| bound
        j_lo = math.floor((center - span) / lattice)
        j_hi = math.ceil((center + span) / lattice)
        for j in range(j_lo, j_hi + 1):
            mu = lattice * j
            if (ci * mu - qr) ** 2 >= best[0]:
                continue
            for k in _nearest_k_values(-(cr * mu + qi)):
                best = better(best, k, mu)
        return best

    # real c0: the imaginary part is the constant -qr
    im2 = qr * qr
    if cr == 0:
        k0 = -round(qi)
        d = abs(k0 + qi)
        if d == 0 and im2 == 0:
            return (Fraction(1), k0 + 1, Fraction(0))   # next integer over
        return (d * d + im2, k0, Fraction(0))
    # the set {k + cr*lattice*j} over integer k, j is exactly spacing*Z
    step = cr * lattice
    spacing = Fraction(1, step.denominator)
    m0 = round(-qi / spacing)
    d = abs(-qi - spacing * m0)
    if d == 0 and im2 == 0:
        d = spacing
        m0 = m0 + 1
    # realize spacing*m0 = k + step*j: solve step.numerator * j = m0 (mod den)
    den = step.denominator
    j = (m0 * pow(step.numerator, -1, den)) % den if den > 1 else 0
    mu = lattice * j
    k_val = spacing * m0 - cr * mu
    assert k_val.denominator == 1
    return (d * d + im2, int(k_val), mu)


def _witness_slot(model: SpectralModel, mu: Fraction,
                  max_label: int) -> tuple[int, int]:
    reach = max(max_label, int(2 * abs(mu)) + 2)
    hits = model.reps_containing(mu, reach)
    return hits[0] if hits else (0, 0)


def lower_bound_scan(model: SpectralModel, arith: ArithmeticInput, m: float,
                     scan_k: int, max_label: int) -> DiophantineReport:
    """Best constant C with gap >= C * (|k| + <weight>)^-M over the scan box.

    C_best is the minimum of gap * (|k| + <weight>)^M over the box, resonant
    points excluded.  With exact input and M = 0 the minimum is certified as
    the global infimum over all k and all frequencies; otherwise it is the
    heuristic box minimum.
    """
    if scan_k < 1:
        raise DomainError("scan_k must be at least 1")
    m = float(m)
    if arith.exact and m == 0.0:
        got = _certified_global_min(model, arith)
        if got is not None:
            best2, k, mu = got
            label, r = _witness_slot(model, mu, max_label)
            c_best = math.sqrt(float(best2))
            wit = BoundWitness(k, label, r, c_best, c_best)
            return DiophantineReport(
                description=f"global infimum, exact: C^2 = {_fmt_frac(best2)}",
                bound_constants=BoundConstants(c_best, 0.0, scan_k, max_label),
                violation_witnesses=(wit,), rigor=Rigor.CERTIFIED)

    ks = np.arange(-scan_k, scan_k + 1, dtype=float)
    z0 = -1j * arith.q
    best_val = math.inf
    best_wit = None
    for rep in model.enumerate_reps(max_label):
        kw = (np.abs(ks) + rep.weight) ** m              # (2K+1,)
        z = arith.c0 * rep.mu_floats + complex(z0)       # (d,)
        gaps = np.abs(ks[None, :] + z[:, None])          # (d, 2K+1)
        vals = gaps * kw[None, :]
        if arith.exact:
            # exclude exact zeros only (tiny float gaps are genuine values)
            for r, mu in enumerate(rep.mu):
                k_res = _is_resonant_mu(arith, mu)
                if k_res is not None and abs(k_res) <= scan_k:
                    vals[r, k_res + scan_k] = np.inf
        else:
            vals = np.where(gaps > RES_TOL, vals, np.inf)
        flat = int(np.argmin(vals))
        r, ik = divmod(flat, vals.shape[1])
        if vals[r, ik] < best_val:
            best_val = float(vals[r, ik])
            best_wit = BoundWitness(int(ks[ik]), rep.label, r,
                                    float(gaps[r, ik]), float(vals[r, ik]))
    if best_wit is None or not math.isfinite(best_val):
        return DiophantineReport(
            description="every scanned point is resonant",
            bound_constants=BoundConstants(0.0, m, scan_k, max_label),
            rigor=Rigor.HEURISTIC)
    return DiophantineReport(
        description="box minimum (floating scan)",
        bound_constants=BoundConstants(best_val, m, scan_k, max_label),
        violation_witnesses=(best_wit,), rigor=Rigor.HEURISTIC)


# --------------------------------------------------------------------------
# multiplicative gap
# --------------------------------------------------------------------------

class ExpGap(NamedTuple):
    """min over signs of |1 - e^{+-2 pi i (c0 mu - i q)}|, with overflow flag."""

    value: float
    saturated: bool

    def __float__(self) -> float:
        return self.value


def exp_gap(arith: ArithmeticInput, mu) -> ExpGap:
    """Multiplicative gap of the mode divisor, computed stably.

    The real part of the exponent argument is reduced modulo 1 before
    exponentiation (integer shifts leave the gap unchanged, so the reduction
    costs nothing and kills the cancellation at large arguments), and the
    magnitude factor saturates past the overflow cap instead of raising.
    """
    if arith.exact and isinstance(mu, (int, Fraction)):
        mu_f = _as_fraction(mu)
        re = arith.c0_re * mu_f + arith.q_im       # Re(c0*mu - i*q)
        im = arith.c0_im * mu_f - arith.q_re       # Im(c0*mu - i*q)
        re_f = float(re - math.floor(re))          # exact reduction mod 1
        im_f = float(im)
    else:
        z = arith.c0 * float(mu) - 1j * arith.q
        re_f = z.real - math.floor(z.real)
        im_f = z.imag
    best = math.inf
    saturated = False
    for sign in (1.0, -1.0):
        expo = -sign * 2.0 * math.pi * im_f
        if expo > SCAN_EXP_CAP:
            saturated = True       # that factor is astronomically large
            continue
        phase = 2.0 * math.pi * sign * re_f
        val = abs(1.0 - math.exp(expo) * complex(math.cos(phase), math.sin(phase)))
        best = min(best, val)
    if not math.isfinite(best):
        best = math.exp(SCAN_EXP_CAP)   # unreachable: the signs grow oppositely
    return ExpGap(best, saturated)


# --------------------------------------------------------------------------
# additive/multiplicative gap comparison
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GapEquivalenceReport:
    """Power-law comparison of the additive and multiplicative gaps.

    Exponents are fitted on the lower envelope of gap-vs-weight (the reps
    where a new record minimum appears); constants are box minima of
    gap * weight^M at the requested M.  The two gaps vanish together, and
    their envelope exponents agree whenever one polynomial bound implies
    the other on the box.
    """

    m_requested: float
    c_linear: float
    c_exp: float
    m_linear: float
    m_exp: float
    consistent: bool
    zeros_match: bool
    samples: int

    def describe(self) -> str:
        return (f"additive gap:       C={self.c_linear:.6g} at M={self.m_requested:g}, "
                f"envelope exponent {self.m_linear:.3f}\n"
                f"multiplicative gap: C={self.c_exp:.6g} at M={self.m_requested:g}, "
                f"envelope exponent {self.m_exp:.3f}\n"
                f"exponents consistent: {self.consistent}; "
                f"zero sets match: {self.zeros_match} ({self.samples} reps)")


def _envelope_exponent(weights: Sequence[float], gaps: Sequence[float]) -> float:
    """Decay exponent of the record-minimum envelope of gap vs weight.

    Positive values mean the record minima decay like weight^-exponent;
    0.0 when fewer than three records exist, which is exactly the
    uniformly-bounded-below case.
    """
    order = np.argsort(np.asarray(weights))
    env_w, env_g = [], []
    record = math.inf
    for i in order:
        if gaps[i] < record:
            record = gaps[i]
            env_w.append(weights[i])
            env_g.append(gaps[i])
    if len(env_w) < 3:
        return 0.0
    slope = float(np.polyfit(np.log(env_w), np.log(env_g), 1)[0])
    return -slope


def lemma_gap_equivalence(model: SpectralModel, arith: ArithmeticInput,
                          max_label: int, m: float) -> GapEquivalenceReport:
    """Numerically compare the additive and multiplicative divisor gaps.

    For each rep up to max_label the two per-rep minima are computed:
    min over r and nearby k of |k + c0*mu_r - i*q|, and min over r of the
    multiplicative gap.  Both are summarized by the box constant at the
    requested M and by a fitted envelope exponent; resonant reps are
    excluded from the fits but their locations must coincide in both gaps.
    """
    m = float(m)
    weights: list[float] = []
    lin: list[float] = []
    mul: list[float] = []
    zero_lin: set[int] = set()
    zero_mul: set[int] = set()
    reps = model.enumerate_reps(max_label)
    for rep in reps:
        best_l = math.inf
        best_e = math.inf
        for mu in rep.mu:
            z = arith.c0 * float(mu) - 1j * arith.q
            for k in _nearest_k_values(-z.real):
                best_l = min(best_l, abs(k + z))
            best_e = min(best_e, exp_gap(arith, mu).value)
        if best_l <= RES_TOL:
            zero_lin.add(rep.label)
        if best_e <= 2.0 * math.pi * RES_TOL:
            zero_mul.add(rep.label)
        if best_l > RES_TOL and best_e > 2.0 * math.pi * RES_TOL:
            weights.append(rep.weight)
            lin.append(best_l)
            mul.append(best_e)
    if weights:
        warr = np.asarray(weights)
        c_lin = float(np.min(np.asarray(lin) * warr ** m))
        c_exp = float(np.min(np.asarray(mul) * warr ** m))
    else:
        c_lin = c_exp = 0.0
    m_lin = _envelope_exponent(weights, lin)
    m_exp = _envelope_exponent(weights, mul)
    return GapEquivalenceReport(
        m_requested=m, c_linear=c_lin, c_exp=c_exp,
        m_linear=m_lin, m_exp=m_exp,
        consistent=abs(m_lin - m_exp) <= 0.5,
        zeros_match=(zero_lin == zero_mul), samples=len(reps))


# --------------------------------------------------------------------------
# rational-approximability probe
# --------------------------------------------------------------------------

class LiouvilleClass(Enum):
    RATIONAL_DETECTED = "RationalDetected"
    NON_LIOUVILLE_EVIDENCE = "NonLiouvilleEvidence"
    LIOUVILLE_SUSPECT = "LiouvilleSuspect"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class LiouvilleReport:
    """Continued-fraction evidence about rational approximability."""

    classification: LiouvilleClass
    exponent: float | None
    quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]

    def describe(self) -> str:
        e = "n/a" if self.exponent is None else f"{self.exponent:.3f}"
        qs = ", ".join(str(a) for a in self.quotients[:12])
        more = " ..." if len(self.quotients) > 12 else ""
        return (f"{self.classification.value}: exponent estimate {e}; "
                f"partial quotients [{qs}{more}]")


_SPIKE = 1e12   # float partial quotient beyond which the expansion is noise


def _convergents(quotients: Sequence[int]) -> list[tuple[int, int]]:
    out = []
    p0, q0, p1, q1 = 1, 0, 0, 1
    for a in quotients:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


def _classify_quotients(convergents: Sequence[tuple[int, int]]):
    """Irrationality-exponent estimate from convergent denominator growth."""
    dens = [q for (_, q) in convergents]
    ratios = [1.0 + math.log(dens[i + 1]) / math.log(dens[i])
              for i in range(len(dens) - 1) if dens[i] >= 2]
    if not ratios:
        return LiouvilleClass.INCONCLUSIVE, None
    tail = ratios[len(ratios) // 2:]
    exponent = max(tail)
    if exponent >= 3.5:
        return LiouvilleClass.LIOUVILLE_SUSPECT, float(exponent)
    if exponent <= 2.5 and len(ratios) >= 8:
        return LiouvilleClass.NON_LIOUVILLE_EVIDENCE, float(exponent)
    return LiouvilleClass.INCONCLUSIVE, float(exponent)


def liouville_probe(c0_real, depth: int) -> LiouvilleReport:
    """Continued-fraction probe of how well c0 is rationally approximable.

    Exact rationals whose expansion terminates within `depth` terms are
    reported as such; an exact expansion truncated at `depth` is classified
    from the quotients seen so far, exactly like a float.  Float expansions
    stop at the first absurd partial quotient (the precision floor).  The
    irrationality exponent is estimated from convergent denominators as
    1 + log q_{n+1} / log q_n over the tail; sustained growth of that
    estimate with depth is the very-well-approximable signature.
    Heuristic evidence, never a proof.
    """
    if depth <= 0:
        raise DomainError("depth must be positive")
    if isinstance(c0_real, (int, Fraction, str)):
        x = _as_fraction(c0_real)
        quotients: list[int] = []
        num, den = x.numerator, x.denominator
        while den != 0 and len(quotients) < depth:
            a, rem = divmod(num, den)
            quotients.append(int(a))
            num, den = den, rem
        convergents = _convergents(quotients)
        if den == 0:
            return LiouvilleReport(LiouvilleClass.RATIONAL_DETECTED, None,
                                   tuple(quotients), tuple(convergents))
        cls, expo = _classify_quotients(convergents)
        return LiouvilleReport(cls, expo, tuple(quotients), tuple(convergents))

    x = float(c0_real)
    if not math.isfinite(x):
        raise DomainError("c0 must be finite")
    quotients = []
    spiked = False
    y = x
    for _ in range(depth):
        a = math.floor(y)
        quotients.append(int(a))
        frac = y - a
        if frac <= 0:
            spiked = True      # terminated exactly: rational at float precision
            break
        y = 1.0 / frac
        if y > _SPIKE:
            spiked = True      # precision floor reached
            break
    convergents = _convergents(quotients)
    if spiked:
        return LiouvilleReport(LiouvilleClass.RATIONAL_DETECTED, None,
                               tuple(quotients), tuple(convergents))
    cls, expo = _classify_quotients(convergents)
    return LiouvilleReport(cls, expo, tuple(quotients), tuple(convergents))
