"""Scalar 2*pi-periodic functions: trig polynomials, bumps, quadrature, certificates.

Everything downstream (mode solvers, counterexample recipes, decay analysis)
manipulates periodic coefficient functions through this module.  Trig
polynomials carry optional exact rational coefficients so that constant terms
can be handed to the exact arithmetic layer without float round-off.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
import scipy.optimize

from .errors import DegenerateWindow, DomainError, QuadratureError, Rigor

TWO_PI = 2.0 * math.pi

__all__ = [
    "TWO_PI",
    "PeriodicFn",
    "TrigPoly",
    "Bump",
    "make_bump",
    "wrap_periodic",
    "mean",
    "zero_mean_primitive",
    "window_integral",
    "quadrature",
    "cumulative_integral",
    "SignVerdict",
    "SignCertificate",
    "sign_certificate",
    "WindowExtremum",
    "min_im_window",
]


def _parse_scalar(x):
    """Return (float value, exact Fraction or None) for a coefficient entry.

    int, Fraction and str inputs are exact; str accepts "3/4", "2", "1.5".
    float inputs are kept as-is with no exact counterpart.  NaN/Inf rejected.
    """
    if isinstance(x, bool):
        raise DomainError("boolean is not a coefficient")
    if isinstance(x, int):
        return float(x), Fraction(x)
    if isinstance(x, Fraction):
        return float(x), x
    if isinstance(x, str):
        try:
            fr = Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse coefficient {x!r} exactly") from exc
        return float(fr), fr
    if isinstance(x, float):
        if not math.isfinite(x):
            raise DomainError("coefficient must be finite")
        return x, None
    raise DomainError(f"unsupported coefficient type {type(x).__name__}")


class PeriodicFn:
    """A 2*pi-periodic function, callable on scalars or ndarrays.

    Supports +, -, scalar and pointwise products, and pointwise exp, which is
    enough to express every closed-form object the solvers construct.
    """

    def __call__(self, t):
        raise NotImplementedError

    def sample(self, n: int) -> np.ndarray:
        """Values on the uniform grid t_j = 2*pi*j/n, j = 0..n-1."""
        grid = np.linspace(0.0, TWO_PI, n, endpoint=False)
        return np.asarray(self(grid), dtype=complex)

    # --- composition ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, float, complex, Fraction)):
            other = TrigPoly({0: complex(other)})
        if not isinstance(other, PeriodicFn):
            return NotImplemented
        return _Sum((self, other))

    __radd__ = __add__

    def __neg__(self):
        return _Scale(-1.0, self)

    def __sub__(self, other):
        return self.__add__(-other if isinstance(other, PeriodicFn) else -complex(other))

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, Fraction)):
            return _Scale(complex(other), self)
        if isinstance(other, PeriodicFn):
            return _Product((self, other))
        return NotImplemented

    __rmul__ = __mul__

    def exp(self) -> "PeriodicFn":
        """Pointwise exponential exp(self(t))."""
        return _Exp(self)


class _Sum(PeriodicFn):
    def __init__(self, parts: Sequence[PeriodicFn]):
        self.parts = tuple(parts)

    def __call__(self, t):
        out = self.parts[0](t)
        for p in self.parts[1:]:
            out = out + p(t)
        return out


class _Product(PeriodicFn):
    def __init__(self, parts: Sequence[PeriodicFn]):
        self.parts = tuple(parts)

    def __call__(self, t):
        out = self.parts[0](t)
        for p in self.parts[1:]:
            out = out * p(t)
        return out


class _Scale(PeriodicFn):
    def __init__(self, k: complex, inner: PeriodicFn):
        self.k = k
        self.inner = inner

    def __call__(self, t):
        return self.k * self.inner(t)


class _Exp(PeriodicFn):
    def __init__(self, inner: PeriodicFn):
        self.inner = inner

    def __call__(self, t):
        return np.exp(self.inner(t))


class _Wrapped(PeriodicFn):
    def __init__(self, fn: Callable):
        self.fn = fn

    def __call__(self, t):
        return self.fn(t)


def wrap_periodic(fn: Callable) -> PeriodicFn:
    """Wrap a vectorized callable the caller guarantees to be 2*pi-periodic."""
    return _Wrapped(fn)


class TrigPoly(PeriodicFn):
    """Finite Fourier sum  p(t) = sum_n c_n e^{int}  with optional exact coefficients.

    Coefficients given as int/Fraction/str are remembered exactly, which lets
    the arithmetic layer read off exact constant terms.  All numerics run on
    the complex float values.
    """

    __slots__ = ("_coeffs", "_exact")

    def __init__(self, coeffs: Mapping[int, complex],
                 exact: Mapping[int, tuple[Fraction, Fraction]] | None = None):
        cc = {}
        for n, c in coeffs.items():
            n = int(n)
            c = complex(c)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise DomainError("coefficients must be finite")
            if c != 0:
                cc[n] = c
        self._coeffs = cc
        ee = {}
        if exact:
            for n, (re, im) in exact.items():
                n = int(n)
                if n in cc:
                    ee[n] = (Fraction(re), Fraction(im))
        self._exact = ee

    # --- constructors ---------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Iterable[Sequence]) -> "TrigPoly":
        """Build from rows (n, re, im); re/im may be float, int, Fraction or str.

        Duplicate frequencies are rejected (strict parse).
        """
        coeffs: dict[int, complex] = {}
        exact: dict[int, tuple[Fraction, Fraction]] = {}
        for row in rows:
            if len(row) != 3:
                raise DomainError(f"coefficient row needs 3 fields, got {row!r}")
            n = int(row[0])
            if n in coeffs:
                raise DomainError(f"duplicate frequency {n} in coefficient rows")
            re_f, re_x = _parse_scalar(row[1])
            im_f, im_x = _parse_scalar(row[2])
            coeffs[n] = complex(re_f, im_f)
            if re_x is not None and im_x is not None:
                exact[n] = (re_x, im_x)
        return cls(coeffs, exact)

    @classmethod
    def constant(cls, z) -> "TrigPoly":
        re_f, re_x = _parse_scalar(z.real if isinstance(z, complex) else z)
        if isinstance(z, complex):
            im_f, im_x = _parse_scalar(z.imag)
        else:
            im_f, im_x = 0.0, Fraction(0)
        exact = {0: (re_x, im_x)} if (re_x is not None and im_x is not None) else None
        return cls({0: complex(re_f, im_f)}, exact)

    # --- access ----------------------------------------------------------
    def coeff(self, n: int) -> complex:
        return self._coeffs.get(n, 0j)

    def exact_coeff(self, n: int):
        """Exact (re, im) Fractions if known, None if only floats are available.

        An absent frequency is exactly zero.
        """
        if n in self._exact:
            return self._exact[n]
        if n not in self._coeffs:
            return (Fraction(0), Fraction(0))
        return None

    def items(self):
        return sorted(self._coeffs.items())

    def to_rows(self):
        return [(n, c.real, c.imag) for n, c in self.items()]

    def degree(self) -> int:
        return max((abs(n) for n in self._coeffs), default=0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def sup_bound(self) -> float:
        """Rigorous bound sup |p| <= sum |c_n|."""
        return float(sum(abs(c) for c in self._coeffs.values()))

    def deriv_sup_bound(self) -> float:
        return float(sum(abs(n) * abs(c) for n, c in self._coeffs.items()))

    def is_real(self, tol: float = 1e-12) -> bool:
        scale = max(1.0, max((abs(c) for c in self._coeffs.values()), default=0.0))
        for n, c in self._coeffs.items():
            if abs(c - self.coeff(-n).conjugate()) > tol * scale:
                return False
        return True

    # --- evaluation -------------------------------------------------------
    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        z = np.exp(1j * t)
        out = np.zeros(t.shape, dtype=complex)
        for n, c in self._coeffs.items():
            if n == 0:
                out += c
            else:
                out += c * z ** n
        return out

    # --- arithmetic ---------------------------------------------------------
    def _binary(self, other: "TrigPoly", op) -> "TrigPoly":
        coeffs: dict[int, complex] = {}
        exact: dict[int, tuple[Fraction, Fraction]] = {}
        for n in set(self._coeffs) | set(other._coeffs):
            c = op(self.coeff(n), other.coeff(n))
            if c != 0:
                coeffs[n] = c
                ea, eb = self.exact_coeff(n), other.exact_coeff(n)
                if ea is not None and eb is not None:
                    er = op(ea[0], eb[0])
                    ei = op(ea[1], eb[1])
                    exact[n] = (er, ei)
        return TrigPoly(coeffs, exact)

    def __add__(self, other):
        if isinstance(other, (int, float, complex, Fraction)):
            other = TrigPoly.constant(other if isinstance(other, complex) else complex(other))
        if isinstance(other, TrigPoly):
            return self._binary(other, lambda a, b: a + b)
        return super().__add__(other)

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly({n: -c for n, c in self._coeffs.items()},
                        {n: (-r, -i) for n, (r, i) in self._exact.items()})

    def __sub__(self, other):
        if isinstance(other, TrigPoly):
            return self._binary(other, lambda a, b: a - b)
        return super().__sub__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            fr = Fraction(other)
            return TrigPoly({n: c * float(fr) for n, c in self._coeffs.items()},
                            {n: (r * fr, i * fr) for n, (r, i) in self._exact.items()})
        if isinstance(other, (float, complex)):
            return TrigPoly({n: c * other for n, c in self._coeffs.items()})
        return super().__mul__(other)

    __rmul__ = __mul__

    def conj(self) -> "TrigPoly":
        coeffs = {-n: c.conjugate() for n, c in self._coeffs.items()}
        exact = {}
        for n in coeffs:
            e = self.exact_coeff(-n)
            if e is not None:
                exact[n] = (e[0], -e[1])
        return TrigPoly(coeffs, exact)

    def real_part(self) -> "TrigPoly":
        return (self + self.conj()) * Fraction(1, 2)

    def imag_part(self) -> "TrigPoly":
        # (p - conj(p)) / (2i) stays a trig poly with hermitian coefficients
        diff = self - self.conj()
        coeffs = {n: c / 2j for n, c in diff._coeffs.items()}
        exact = {}
        for n in coeffs:
            e = diff.exact_coeff(n)
            if e is not None:
                # (x + iy)/(2i) = y/2 - i x/2
                exact[n] = (e[1] / 2, -e[0] / 2)
        return TrigPoly(coeffs, exact)

    def derivative(self) -> "TrigPoly":
        return TrigPoly({n: 1j * n * c for n, c in self._coeffs.items() if n != 0})

    def primitive_zero_at_origin(self) -> "TrigPoly":
        """Periodic primitive C of (p - mean p) with C(0) = 0."""
        coeffs = {n: c / (1j * n) for n, c in self._coeffs.items() if n != 0}
        coeffs[0] = -sum(coeffs.values(), 0j)
        return TrigPoly(coeffs)

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        terms = ", ".join(f"{n}: {c:.6g}" for n, c in self.items())
        return f"TrigPoly({{{terms}}})"


# --- module-level operations on trig polynomials -----------------------------

def mean(p: TrigPoly) -> complex:
    """Average value over one period (the zero-frequency coefficient)."""
    if not isinstance(p, TrigPoly):
        raise DomainError("mean is defined for trig polynomials")
    return p.coeff(0)


def zero_mean_primitive(p: TrigPoly) -> TrigPoly:
    """Periodic primitive C with C' = p - mean(p) and C(0) = 0."""
    if not isinstance(p, TrigPoly):
        raise DomainError("zero_mean_primitive is defined for trig polynomials")
    return p.primitive_zero_at_origin()


def window_integral(p: TrigPoly, t, tau):
    """Exact integral of p over [t, t+tau] through the closed-form primitive.

    Broadcasts over ndarray t and tau.
    """
    if not isinstance(p, TrigPoly):
        raise DomainError("window_integral is defined for trig polynomials")
    t = np.asarray(t, dtype=float)
    tau = np.asarray(tau, dtype=float)
    prim = p.primitive_zero_at_origin()
    out = prim(t + tau) - prim(t) + p.coeff(0) * tau
    if out.shape == ():
        return complex(out)
    return out


# --- bumps --------------------------------------------------------------------

def _smoothstep(x: np.ndarray) -> np.ndarray:
    # exp(-1/x) glue; flat to all orders at both ends
    lo = np.zeros_like(x)
    hi = np.ones_like(x)
    mid = (x > 0.0) & (x < 1.0)
    xm = x[mid]
    with np.errstate(over="ignore", divide="ignore"):
        a = np.exp(-1.0 / xm)
        b = np.exp(-1.0 / (1.0 - xm))
    out = np.where(x <= 0.0, lo, hi)
    out[mid] = a / (a + b)
    return out


class Bump(PeriodicFn):
    """Smooth periodic bump: 1 on a plateau, 0 outside the support interval."""

    def __init__(self, center: float, halfwidth: float, plateau_fraction: float = 0.5):
        if not (0.0 < halfwidth < math.pi):
            raise DomainError("bump halfwidth must lie in (0, pi)")
        if not (0.0 < plateau_fraction < 1.0):
            raise DomainError("plateau_fraction must lie in (0, 1)")
        self.center = float(center) % TWO_PI
        self.halfwidth = float(halfwidth)
        self.plateau_fraction = float(plateau_fraction)
        self._l1 = None

    @property
    def support(self) -> tuple[float, float]:
        return (self.center - self.halfwidth, self.center + self.halfwidth)

    @property
    def plateau(self) -> tuple[float, float]:
        r = self.halfwidth * self.plateau_fraction
        return (self.center - r, self.center + r)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        # periodic distance to the center, in [0, pi]
        d = np.abs((t - self.center + math.pi) % TWO_PI - math.pi)
        inner = self.halfwidth * self.plateau_fraction
        r = (self.halfwidth - d) / (self.halfwidth - inner)
        return _smoothstep(r)

    def l1_norm(self) -> float:
        if self._l1 is None:
            self._l1 = float(quadrature(self, 0.0, TWO_PI, tol=1e-12).real)
        return self._l1

    def __repr__(self) -> str:  # pragma: no cover
        return (f"Bump(center={self.center:.6g}, halfwidth={self.halfwidth:.6g}, "
                f"plateau_fraction={self.plateau_fraction:.3g})")


def make_bump(center: float, halfwidth: float, plateau_fraction: float = 0.5) -> Bump:
    """Smooth bump equal to 1 on [center - f*h, center + f*h], 0 outside +-h."""
    return Bump(center, halfwidth, plateau_fraction)


# --- quadrature ----------------------------------------------------------------

_GAUSS_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order not in _GAUSS_CACHE:
        _GAUSS_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GAUSS_CACHE[order]


def _panel_values(f, lo: np.ndarray, hi: np.ndarray, order: int):
    """Gauss values for a batch of panels; one call to f for the whole batch."""
    x, w = _gauss(order)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(f(nodes.reshape(-1)), dtype=complex)
    tail = vals.shape[1:]
    vals = vals.reshape(lo.size, order, *tail)
    ints = np.tensordot(vals, w, axes=([1], [0])) * half.reshape((-1,) + (1,) * len(tail))
    return ints


def adaptive_panels(f, a: float, b: float, tol: float = 1e-10,
                    max_panels: int = 4096, init_panels: int = 8):
    """Adaptive Gauss panels with deterministic bisection.

    f maps a flat node array of shape (m,) to values of shape (m,) or (m, k);
    the integral is taken along the node axis, so vector-valued integrands
    (one value per output point) are integrated in a single pass.  Panels
    whose 12- vs 24-point Gauss estimates disagree beyond their share of tol
    are split.  Raises QuadratureError with the best estimate on budget
    exhaustion.
    """
    if not (b > a):
        raise DomainError("quadrature needs b > a")
    edges = np.linspace(a, b, init_panels + 1)
    lo = edges[:-1].copy()
    hi = edges[1:].copy()
    total = None
    err_total = 0.0
    created = init_panels
    span = b - a
    eps_floor = 8.0 * np.finfo(float).eps
    while lo.size:
        i_lo = _panel_values(f, lo, hi, 12)
        i_hi = _panel_values(f, lo, hi, 24)
        diff = np.abs(i_hi - i_lo)
        mag = np.abs(i_hi)
        while diff.ndim > 1:
            diff = diff.max(axis=-1)
            mag = mag.max(axis=-1)
        width = hi - lo
        # the magnitude floor keeps huge-but-cancelling kernels (forced
        # branches divide by an equally huge factor) from spinning forever
        budget = np.maximum(tol * width / span, eps_floor * mag)
        ok = (diff <= budget) | (width <= 1e-14 * span)
        contrib = i_hi[ok].sum(axis=0) if ok.any() else 0.0
        total = contrib if total is None else total + contrib
        err_total += float(diff[ok].sum())
        bad = ~ok
        if not bad.any():
            break
        created += 2 * int(bad.sum())
        if created > max_panels:
            best = total + i_hi[bad].sum(axis=0)
            raise QuadratureError(
                f"panel budget {max_panels} exhausted on [{a:.4g}, {b:.4g}]",
                best_estimate=best,
                error_estimate=err_total + float(diff[bad].sum()))
        mid = 0.5 * (lo[bad] + hi[bad])
        lo = np.concatenate([lo[bad], mid])
        hi = np.concatenate([mid, hi[bad]])
    if total is None:  # pragma: no cover - init_panels >= 1
        total = 0.0
    return total, err_total


def quadrature(f, a: float, b: float, tol: float = 1e-10, max_panels: int = 4096) -> complex:
    """Definite integral of a (possibly complex) smooth integrand on [a, b]."""
    val, _ = adaptive_panels(lambda s: np.asarray(f(s), dtype=complex), a, b,
                             tol=tol, max_panels=max_panels)
    return complex(np.asarray(val).reshape(()))


def cumulative_integral(f, grid_size: int, order: int = 16):
    """Prefix integrals F(t_j) = int_0^{t_j} f over the uniform grid, plus the total.

    Composite Gauss on each grid cell; spectrally accurate for smooth f.
    """
    edges = np.linspace(0.0, TWO_PI, grid_size + 1)
    cells = _panel_values(lambda s: np.asarray(f(s), dtype=complex),
                          edges[:-1], edges[1:], order)
    prefix = np.concatenate([[0j], np.cumsum(cells)])
    return prefix[:-1], complex(prefix[-1])


# --- certified sign determination ---------------------------------------------

class SignVerdict(Enum):
    NON_NEGATIVE = "NonNegative"
    NON_POSITIVE = "NonPositive"
    CHANGES_SIGN = "ChangesSign"
    IDENTICALLY_ZERO = "IdenticallyZero"
    CONSTANT_NONZERO = "ConstantNonzero"


@dataclass(frozen=True)
class SignCertificate:
    verdict: SignVerdict
    rigor: Rigor
    positive_witness: tuple[float, float] | None
    negative_witness: tuple[float, float] | None
    zero_cells: int
    unresolved_cells: int
    grid_size: int
    zero_tol: float
    message: str = ""

    @property
    def single_signed(self) -> bool:
        return self.verdict in (SignVerdict.NON_NEGATIVE, SignVerdict.NON_POSITIVE,
                                SignVerdict.IDENTICALLY_ZERO, SignVerdict.CONSTANT_NONZERO)


def sign_certificate(b: TrigPoly, grid_size: int = 256, zero_tol: float = 1e-12,
                     cell_budget: int = 32_000_000) -> SignCertificate:
    """Certify the sign pattern of a real trig polynomial on the circle.

    On a cell of width h with endpoint values f_lo, f_hi, the function is
    pinched between min(f) - dev and max(f) + dev where
    dev = min(M1*h/2, M2*h^2/8), M1 >= sup|b'| and M2 >= sup|b''| (coefficient
    bounds).  Cells whose pinch excludes 0 are sign-resolved; cells pinched
    inside [-zero_tol, zero_tol] count as zeros and do not block a one-sided
    verdict; the rest are bisected.  The quadratic bound is what keeps
    tangential zeros (e.g. 1 + sin t) cheap.  Two samples of opposite sign
    (each beyond zero_tol) certify a sign change outright.
    """
    if not isinstance(b, TrigPoly):
        raise DomainError("sign_certificate expects a trig polynomial")
    if not b.is_real():
        raise DomainError("sign_certificate expects a real-valued trig polynomial")
    if grid_size < 8:
        raise DomainError("grid_size must be at least 8")

    nonzero = dict(b.items())
    if not nonzero:
        return SignCertificate(SignVerdict.IDENTICALLY_ZERO, Rigor.CERTIFIED,
                               None, None, 0, 0, grid_size, zero_tol)
    if set(nonzero) == {0}:
        v = nonzero[0].real
        if abs(v) <= zero_tol:
            return SignCertificate(SignVerdict.IDENTICALLY_ZERO, Rigor.CERTIFIED,
                                   None, None, 0, 0, grid_size, zero_tol)
        wit = (0.0, v)
        return SignCertificate(SignVerdict.CONSTANT_NONZERO, Rigor.CERTIFIED,
                               wit if v > 0 else None, wit if v < 0 else None,
                               0, 0, grid_size, zero_tol)

    m1 = b.deriv_sup_bound()                       # sup |b'|  <= sum |n c_n|
    m2 = float(sum(n * n * abs(c) for n, c in nonzero.items()))  # sup |b''|

    def ev(ts: np.ndarray) -> np.ndarray:
        return np.real(b(ts))

    pos_wit = None
    neg_wit = None

    def note(ts: np.ndarray, vs: np.ndarray):
        nonlocal pos_wit, neg_wit
        imax = int(np.argmax(vs))
        imin = int(np.argmin(vs))
        if vs[imax] > zero_tol and (pos_wit is None or vs[imax] > pos_wit[1]):
            pos_wit = (float(ts[imax]), float(vs[imax]))
        if vs[imin] < -zero_tol and (neg_wit is None or vs[imin] < neg_wit[1]):
            neg_wit = (float(ts[imin]), float(vs[imin]))

    h0 = TWO_PI / grid_size
    lo = np.linspace(0.0, TWO_PI, grid_size, endpoint=False)
    flo = ev(lo)
    fhi = np.roll(flo, -1)
    hi = lo + h0
    note(lo, flo)

    def change_cert():
        return SignCertificate(SignVerdict.CHANGES_SIGN, Rigor.CERTIFIED,
                               pos_wit, neg_wit, 0, 0, grid_size, zero_tol,
                               "opposite-sign samples found")

    if pos_wit and neg_wit:
        return change_cert()

    zero_cells = 0
    unresolved = 0
    visits = lo.size
    # refine until every cell is sign-resolved or provably within zero_tol of 0
    h_stop = 1e-13
    while lo.size:
        width = hi - lo
        dev = np.minimum(0.5 * m1 * width, 0.125 * m2 * width * width)
        cell_lo = np.minimum(flo, fhi) - dev
        cell_hi = np.maximum(flo, fhi) + dev
        is_zero = (cell_hi <= zero_tol) & (cell_lo >= -zero_tol)
        zero_cells += int(is_zero.sum())
        resolved = (~is_zero) & ((cell_lo > 0.0) | (cell_hi < 0.0))
        pend = ~(is_zero | resolved)
        if not pend.any():
            break
        stop_now = width[pend] <= h_stop
        if visits > cell_budget:
            stop_now = np.ones(int(pend.sum()), dtype=bool)
        p_lo, p_hi = lo[pend], hi[pend]
        p_flo, p_fhi = flo[pend], fhi[pend]
        if stop_now.any():
            st_max = np.maximum(np.abs(p_flo[stop_now]), np.abs(p_fhi[stop_now]))
            zero_cells += int((st_max <= zero_tol).sum())
            unresolved += int((st_max > zero_tol).sum())
        go = ~stop_now
        if not go.any():
            break
        p_lo, p_hi = p_lo[go], p_hi[go]
        p_flo, p_fhi = p_flo[go], p_fhi[go]
        mid = 0.5 * (p_lo + p_hi)
        fmid = ev(mid)
        visits += mid.size
        note(mid, fmid)
        if pos_wit and neg_wit:
            return change_cert()
        lo = np.concatenate([p_lo, mid])
        hi = np.concatenate([mid, p_hi])
        flo = np.concatenate([p_flo, fmid])
        fhi = np.concatenate([fmid, p_fhi])

    rigor = Rigor.CERTIFIED if unresolved == 0 else Rigor.HEURISTIC
    if pos_wit is None and neg_wit is None:
        # every sample hugged zero; coefficients are nonzero but below tolerance
        return SignCertificate(SignVerdict.IDENTICALLY_ZERO, rigor, None, None,
                               zero_cells, unresolved, grid_size, zero_tol,
                               "all values within zero tolerance")
    if pos_wit is not None:
        return SignCertificate(SignVerdict.NON_NEGATIVE, rigor, pos_wit, None,
                               zero_cells, unresolved, grid_size, zero_tol)
    return SignCertificate(SignVerdict.NON_POSITIVE, rigor, None, neg_wit,
                           zero_cells, unresolved, grid_size, zero_tol)


# --- window extremization -------------------------------------------------------

@dataclass(frozen=True)
class WindowExtremum:
    """Minimum of the imaginary window integral over start time and length."""

    value: float
    t: float
    tau: float
    interior: bool
    grad_norm: float


def min_im_window(c: TrigPoly, coarse: int = 384) -> WindowExtremum:
    """Minimize (t, tau) -> integral of Im c over [t, t+tau] on [0,2pi]^2.

    Coarse tensor grid followed by bound-constrained local refinement with the
    analytic gradient (d/dt = b(t+tau) - b(t), d/dtau = b(t+tau)).
    """
    if not isinstance(c, TrigPoly):
        raise DomainError("min_im_window expects a trig polynomial")
    b = c.imag_part()
    if b.degree() == 0:
        raise DegenerateWindow("imaginary part is constant; window landscape is flat")
    b0 = b.coeff(0).real
    prim = b.primitive_zero_at_origin()

    def val(t, tau):
        return np.real(prim(t + tau) - prim(t)) + b0 * tau

    ts = np.linspace(0.0, TWO_PI, coarse, endpoint=False)
    taus = np.linspace(0.0, TWO_PI, coarse + 1)
    pt = np.real(prim(ts))
    grid_vals = np.real(prim(ts[:, None] + taus[None, :])) - pt[:, None] + b0 * taus[None, :]
    flat = np.argsort(grid_vals, axis=None)[:4]

    def fun(x):
        return val(x[0], x[1])

    def jac(x):
        bt = float(np.real(b(x[0])))
        btt = float(np.real(b(x[0] + x[1])))
        return np.array([btt - bt, btt])

    best = None
    for idx in flat:
        i, j = np.unravel_index(idx, grid_vals.shape)
        x0 = np.array([ts[i], taus[j]])
        res = scipy.optimize.minimize(
            fun, x0, jac=jac, method="L-BFGS-B",
            bounds=[(0.0, TWO_PI), (0.0, TWO_PI)],
            options={"ftol": 1e-16, "gtol": 1e-12, "maxiter": 500})
        cand = (float(res.fun), float(res.x[0]), float(res.x[1]))
        if best is None or cand[0] < best[0]:
            best = cand
    value, t_star, tau_star = best
    eps = 1e-9
    interior = eps < t_star < TWO_PI - eps and eps < tau_star < TWO_PI - eps
    gnorm = float(np.linalg.norm(jac(np.array([t_star, tau_star]))))
    return WindowExtremum(value, t_star, tau_star, interior, gnorm)
