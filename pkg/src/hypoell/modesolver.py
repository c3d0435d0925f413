"""Per-mode periodic ODE solver for u' + i(mu*c(t) - i*q) u = f.

Each mode is solved in closed form.  After the substitution v = u * e^{i mu C}
with C the zero-mean primitive of c, the equation has constant coefficient
lambda = q + i*mu*c0, and the periodic solution is one of two convolution
formulas ("minus" integrates the past, "plus" the future), or in the resonant
case lambda in iZ a direct primitive subject to a compatibility integral.
Branch selection follows the stability rule: with a certified sign of
b = Im c, the branch is chosen so the kernel magnitude never exceeds
e^{2 pi |Re q|}.

Quadrature: the convolution integrals are evaluated at every output grid
point.  The primary engine is composite Gauss quadrature on the uniform grid
cells: because the output points and the cell boundaries share the same
uniform grid, the per-cell contributions regroup exactly into a circular
convolution of two length-n sequences, so all output points are obtained from
a handful of FFTs instead of n separate integrals.  Every solution is checked
against its defining equation; any mode whose residual misses the tolerance
is recomputed with adaptive Gauss panels (the general-purpose fallback, also
used when the split kernel factors could overflow on their own).
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import (DomainError, KernelOverflow, ResonanceObstruction, Rigor,
                     SolveNote)
from .fields import CoefficientField, GridFn, grid_points
from .spectra import SpectralModel
from .torusfn import (TWO_PI, PeriodicFn, SignCertificate, SignVerdict, TrigPoly,
                      adaptive_panels, cumulative_integral, mean, min_im_window,
                      sign_certificate, zero_mean_primitive, wrap_periodic)

__all__ = [
    "RESONANCE_EPS", "COND_FLOOR", "EXP_CAP", "DEFAULT_GRID",
    "Branch", "BranchPolicy", "GaugeDirection",
    "ModeProblem", "ModeSolution", "ModeIssue",
    "solve_periodic_scalar", "solve_mode", "residual", "gauge_transform",
    "solve_field",
]

RESONANCE_EPS = 1e-9   # relative distance of lambda/i to Z below which a mode is resonant
COND_FLOOR = 1e-6      # divisor magnitude below which an IllConditioned note is attached
EXP_CAP = 700.0        # kernel log-magnitude cap before declaring overflow
DEFAULT_GRID = 256


class Branch(Enum):
    MINUS = "Minus"        # integrate the past:   y(t) = D^-1 ∫ e^{-lam s} ... h(t-s) ds
    PLUS = "Plus"          # integrate the future: y(t) = D^-1 ∫ e^{+lam s} ... h(t+s) ds
    RESONANT = "Resonant"  # lambda in iZ: primitive formula under compatibility


class BranchPolicy(Enum):
    AUTO = "Auto"
    FORCE_MINUS = "ForceMinus"
    FORCE_PLUS = "ForcePlus"


class GaugeDirection(Enum):
    FORWARD = "Forward"
    INVERSE = "Inverse"


def resonance_distance(lam: complex) -> float:
    """Distance from lambda to the nearest point of iZ."""
    m = round(lam.imag)
    return math.hypot(lam.real, lam.imag - m)


def is_resonant(lam: complex) -> bool:
    return resonance_distance(lam) <= RESONANCE_EPS * max(1.0, abs(lam))


@dataclass(frozen=True)
class ModeProblem:
    """One scalar mode: frequency mu, coefficient c, zero-order term q, right side."""

    mu: float
    c: TrigPoly
    q: complex
    rhs: PeriodicFn
    grid_size: int = DEFAULT_GRID

    @property
    def c0(self) -> complex:
        return mean(self.c)

    @property
    def lam(self) -> complex:
        # i(mu*c0 - i q) = q + i*mu*c0
        return self.q + 1j * self.mu * self.c0


@dataclass(frozen=True)
class ModeSolution:
    """Solved mode: grid samples with interpolant, branch, and diagnostics."""

    values: GridFn
    branch: Branch
    conditioning: float          # |divisor| of the convolution formula (0 when resonant)
    notes: tuple[SolveNote, ...] = ()
    peak_exponent: float = 0.0   # max log-magnitude of the kernel along quadrature


@dataclass(frozen=True)
class ModeIssue:
    """A warning or obstruction attached to one mode of a field solve."""

    label: int
    r: int
    s: int
    kind: str
    detail: str
    value: complex = 0.0

    def __str__(self) -> str:
        return f"mode ({self.label},{self.r},{self.s}): {self.kind}: {self.detail}"


def _divisor(branch: Branch, lam: complex) -> complex:
    if branch is Branch.MINUS:
        return 1.0 - cmath.exp(-TWO_PI * lam)
    return cmath.exp(TWO_PI * lam) - 1.0


class _PeakTracker:
    __slots__ = ("peak",)

    def __init__(self):
        self.peak = -math.inf

    def check(self, exponents_real: np.ndarray, what: str):
        m = float(exponents_real.max()) if exponents_real.size else -math.inf
        if m > self.peak:
            self.peak = m
        if self.peak > EXP_CAP:
            raise KernelOverflow(
                f"{what}: kernel exponent {self.peak:.1f} exceeds cap {EXP_CAP:g}",
                mode=what, exponent=self.peak)


def _convolution_batch(branch: Branch, lam: complex, mu: float,
                       cfn: TrigPoly | None, rhs_list: Sequence[PeriodicFn],
                       grid_size: int, tol: float, what: str):
    """Integrals of the chosen branch for a batch of right sides sharing
    (lam, mu, c); returns (array (grid_size, len(rhs_list)), peak exponent).

    cfn None means the constant-coefficient case (C identically 0).
    """
    t_grid = grid_points(grid_size)
    prim = zero_mean_primitive(cfn) if cfn is not None else None
    c_at_grid = prim(t_grid) if prim is not None else None
    sign = -1.0 if branch is Branch.MINUS else 1.0
    tracker = _PeakTracker()

    def integrand(s: np.ndarray):
        targ = t_grid[None, :] + sign * s[:, None]
        if prim is not None:
            expo = sign * lam * s[:, None] + 1j * mu * (prim(targ) - c_at_grid[None, :])
            tracker.check(expo.real, what)
            kernel = np.exp(expo)
        else:
            expo = sign * lam * s
            tracker.check(expo.real, what)
            kernel = np.exp(expo)[:, None]
        cols = [np.asarray(r(targ), dtype=complex) for r in rhs_list]
        return kernel[:, :, None] * np.stack(cols, axis=-1)

    vals, _ = adaptive_panels(integrand, 0.0, TWO_PI, tol=tol)
    return np.asarray(vals), tracker.peak


_SAFE_EXP = 680.0  # per-factor exponent ceiling for the split cell evaluation


class _CellEngine:
    """Composite Gauss quadrature of the convolution formulas on grid cells.

    Splitting the integral over s into the n cells of the output grid and
    writing s = i*h + sigma (h the grid step) turns the value at output point
    t_j into

        sum_i e^{-+lam*i*h} * H[(j -+ i) mod n],
        H[d] = integral over one cell of e^{-+lam*sigma} F(t_d -+ sigma),

    with F(theta) = e^{i mu C(theta)} rhs(theta) periodic.  The cell integrals
    H need F only on a few uniformly shifted copies of the grid, which for
    grid-sampled right sides are FFT phase shifts.  The sum over i is a
    circular convolution; it is evaluated as a direct circulant matrix product
    rather than by FFT on purpose: each product w_i * H[j-i] is bounded by the
    combined kernel (small on the stability branch even when H alone is
    exponentially large in mu), so direct summation keeps the rounding error
    of every output point proportional to its own terms, where an FFT would
    smear the largest magnitude across all outputs.  The result is the same
    composite Gauss rule a panel integrator would produce on this fixed
    partition, at a tiny fraction of the evaluations.

    The kernel is evaluated in split factors (decaying weight, inner phase,
    outer phase); when any single factor could overflow on its own — even if
    the combined kernel is bounded — `solve` declines by returning None and
    the caller falls back to the adaptive path, which exponentiates the
    combined kernel directly.
    """

    def __init__(self, cfn: TrigPoly | None, grid_size: int, order: int = 16):
        from .torusfn import _gauss
        n = int(grid_size)
        self.n = n
        self.step = TWO_PI / n
        nodes, weights = _gauss(order)
        self.sigma = 0.5 * self.step * (nodes + 1.0)          # (order,) in [0, h]
        self.wquad = 0.5 * self.step * weights                # (order,)
        self.grid = grid_points(n)
        self.prim = zero_mean_primitive(cfn) if cfn is not None else None
        self.c_grid = self.prim(self.grid) if self.prim is not None else None
        k = np.fft.fftfreq(n, d=1.0 / n).astype(int)          # integer frequencies
        self._freqs = k
        idx = np.arange(n)
        self._idx = (idx[:, None] - idx[None, :]) % n         # (j - d) mod n
        self._shift: dict[float, np.ndarray] = {}
        self._c_args: dict[float, np.ndarray | None] = {}

    @property
    def im_range(self) -> float:
        """Total variation range of Im C over the grid (0 without c)."""
        if self.c_grid is None:
            return 0.0
        im = self.c_grid.imag
        return float(im.max() - im.min())

    def _tables(self, sign: float) -> tuple[np.ndarray, np.ndarray | None]:
        """Shift multipliers and C at the shifted grids for one branch sign."""
        got = self._shift.get(sign)
        if got is None:
            delta = sign * self.sigma                          # (order,)
            mat = np.exp(1j * np.outer(delta, self._freqs))    # (order, n)
            if self.n % 2 == 0:
                # real-symmetric treatment of the Nyquist bin: on grid points
                # sin((n/2) t_d) = 0, so the cosine convention of GridFn
                # evaluation is reproduced exactly by a cosine multiplier
                mat[:, self.n // 2] = np.cos((self.n // 2) * delta)
            self._shift[sign] = mat
            if self.prim is not None:
                args = self.grid[None, :] + delta[:, None]     # (order, n)
                self._c_args[sign] = self.prim(args)
            else:
                self._c_args[sign] = None
            got = mat
        return got, self._c_args[sign]

    def solve(self, branch: Branch, lam: complex, mu: float,
              stack: np.ndarray) -> tuple[np.ndarray, float] | None:
        """Convolution integrals for right sides sampled on the grid.

        stack has shape (k, n) — one row of grid samples per right side.
        Returns (values (n, k) before division by the branch divisor, bound on
        the largest factor exponent), or None when a split factor would
        overflow and the adaptive path must take over.
        """
        n = self.n
        sign = -1.0 if branch is Branch.MINUS else 1.0
        shift, c_args = self._tables(sign)
        # inner phase e^{i mu C(args)} and outer phase e^{-i mu C(grid)}
        if c_args is not None and mu != 0.0:
            inner_expo = 1j * mu * c_args
            in_peak = float(inner_expo.real.max())
            out_peak = float((-1j * mu * self.c_grid).real.max())
            if in_peak > _SAFE_EXP or out_peak > _SAFE_EXP:
                return None
            phase = np.exp(inner_expo)                         # (order, n)
        else:
            in_peak = out_peak = 0.0
            phase = None
        w_expo = sign * lam * self.step * np.arange(n)
        w_peak = float(w_expo.real.max())
        if w_peak > _SAFE_EXP:
            return None
        w = np.exp(w_expo)                                     # (n,)
        ker = self.wquad * np.exp(sign * lam * self.sigma)     # (order,)
        spec = np.fft.fft(np.asarray(stack, dtype=complex), axis=1)   # (k, n)
        shifted = np.fft.ifft(spec[:, None, :] * shift[None, :, :], axis=2)
        if phase is not None:
            shifted = shifted * phase[None, :, :]
        hseq = np.einsum("l,kln->nk", ker, shifted)            # (n, k)
        hmax = float(np.abs(hseq).max(initial=0.0))
        if hmax > 0 and w_peak + math.log(hmax) > _SAFE_EXP:
            return None
        # y[j]*divisor = sum_i w[i] H[(j -+ i) mod n]: a circulant product.
        # MINUS: coefficient of H[d] at output j is w[(j-d) mod n];
        # PLUS:  it is w[(d-j) mod n], the transposed gather of the same table.
        circ = w[self._idx]
        if branch is Branch.MINUS:
            conv = circ @ hseq                                 # (n, k)
        else:
            conv = circ.T @ hseq
        if phase is not None:
            out = np.exp(-1j * mu * self.c_grid)
            mags = float(np.abs(conv).max(initial=0.0))
            if mags > 0 and out_peak + math.log(mags) > EXP_CAP:
                return None
            conv = out[:, None] * conv
        peak = max(w_peak, 0.0) + max(in_peak, 0.0) + max(out_peak, 0.0)
        return conv, peak


def _spectral_derivative_cols(y: np.ndarray) -> np.ndarray:
    """d/dt along axis 0 for columns of grid samples (Nyquist bin dropped)."""
    n = y.shape[0]
    k = np.fft.fftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        k[n // 2] = 0.0
    return np.fft.ifft(np.fft.fft(y, axis=0) * (1j * k)[:, None], axis=0)


def solve_periodic_scalar(lam: complex, h: PeriodicFn, tol: float = 1e-10,
                          grid_size: int = DEFAULT_GRID,
                          branch_policy: BranchPolicy = BranchPolicy.AUTO) -> ModeSolution:
    """Unique periodic solution of y' + lam*y = h, by the explicit formulas.

    Away from the resonant set iZ the solution is a weighted convolution:
    past-integrating for Re lam >= 0, future-integrating for Re lam < 0 (the
    choice keeps the kernel bounded by 1; either can be forced for
    cross-checks).  On iZ the compatibility integral of e^{lam s} h(s) must
    vanish — otherwise ResonanceObstruction — and the solution is the direct
    primitive; sub-tolerance compatibility defects are projected out and noted.
    """
    lam = complex(lam)
    notes: list[SolveNote] = []
    if is_resonant(lam):
        if branch_policy is not BranchPolicy.AUTO:
            raise DomainError("cannot force a convolution branch on a resonant mode")
        integrand = wrap_periodic(lambda s: np.exp(lam * np.asarray(s)) * np.asarray(h(s)))
        prefix, total = cumulative_integral(integrand, grid_size)
        if abs(total) >= max(tol, 1e-12):
            raise ResonanceObstruction(
                f"compatibility integral {total:.3e} exceeds tolerance {tol:g}",
                integral=complex(total))
        if abs(total) > 0:
            # remove the tiny mean defect so the primitive closes up exactly
            notes.append(SolveNote("ResonanceProjection",
                                   "projected sub-tolerance compatibility defect",
                                   complex(total)))
            t_grid = grid_points(grid_size)
            prefix = prefix - total * (t_grid / TWO_PI)
        t_grid = grid_points(grid_size)
        y = np.exp(-lam * t_grid) * prefix
        return ModeSolution(GridFn(y), Branch.RESONANT, 0.0, tuple(notes), 0.0)

    if branch_policy is BranchPolicy.FORCE_MINUS:
        branch = Branch.MINUS
    elif branch_policy is BranchPolicy.FORCE_PLUS:
        branch = Branch.PLUS
    else:
        branch = Branch.MINUS if lam.real >= 0 else Branch.PLUS
    div = _divisor(branch, lam)
    cond = abs(div)
    if cond < COND_FLOOR:
        notes.append(SolveNote("IllConditioned",
                               f"divisor magnitude {cond:.3e} below {COND_FLOOR:g}",
                               cond))
    t_grid = grid_points(grid_size)
    h_vals = np.asarray(h(t_grid), dtype=complex)
    y = None
    peak = 0.0
    got = _CellEngine(None, grid_size).solve(branch, lam, 0.0, h_vals[None, :])
    if got is not None:
        vals, peak = got
        y = vals[:, 0] / div
        dy = _spectral_derivative_cols(y[:, None])[:, 0]
        resid = float(np.max(np.abs(dy + lam * y - h_vals)))
        scale = max(1.0, float(np.max(np.abs(h_vals))),
                    (1.0 + abs(lam)) * float(np.max(np.abs(y))))
        e_kernel = TWO_PI * abs(lam.real) if branch_policy is not BranchPolicy.AUTO else 0.0
        floor = 4096.0 * np.finfo(float).eps * math.exp(min(600.0, e_kernel))
        if resid > max(tol, floor) * scale:
            y = None
    if y is None:
        vals, peak = _convolution_batch(branch, lam, 0.0, None, [h],
                                        grid_size, tol, f"scalar lam={lam:.4g}")
        y = vals[:, 0] / div
    return ModeSolution(GridFn(y), branch, cond, tuple(notes), peak)


def _window_extremes(c: TrigPoly) -> tuple[float, float]:
    """(min, max) over start/length of the window integral of Im c."""
    lo = min_im_window(c).value
    hi = -min_im_window(c.conj()).value   # Im conj(c) = -Im c flips the sign
    return lo, hi


def _auto_branch(mu: float, lam: complex, cert: SignCertificate,
                 window: tuple[float, float] | None,
                 c: TrigPoly, q: complex) -> tuple[Branch, SolveNote | None]:
    """Stability-motivated branch choice; see module docstring."""
    if cert.verdict in (SignVerdict.IDENTICALLY_ZERO, SignVerdict.CONSTANT_NONZERO):
        # b constant: kernel magnitude is e^{-Re lam * s} on the minus branch
        return (Branch.MINUS if lam.real >= 0 else Branch.PLUS), None
    if cert.verdict is SignVerdict.NON_NEGATIVE:
        return (Branch.MINUS if mu < 0 else Branch.PLUS), None
    if cert.verdict is SignVerdict.NON_POSITIVE:
        return (Branch.MINUS if mu >= 0 else Branch.PLUS), None
    # sign-changing b: no branch is uniformly safe; take the smaller worst case
    if window is None:
        window = _window_extremes(c)
    w_lo, w_hi = window
    re_q = q.real
    e_minus = TWO_PI * max(0.0, -re_q) + max(0.0, mu * w_hi, mu * w_lo)
    e_plus = TWO_PI * max(0.0, re_q) + max(0.0, -mu * w_hi, -mu * w_lo)
    branch = Branch.MINUS if e_minus <= e_plus else Branch.PLUS
    peak = min(e_minus, e_plus)
    note = SolveNote("OverflowRisk",
                     f"sign-changing Im c: worst-case kernel exponent {peak:.3g}",
                     peak)
    return branch, note


def solve_mode(problem: ModeProblem, branch_policy: BranchPolicy = BranchPolicy.AUTO,
               tol: float = 1e-9, sign_info: SignCertificate | None = None,
               window_info: tuple[float, float] | None = None) -> ModeSolution:
    """Periodic solution of u' + i(mu*c - i q)u = rhs for one mode.

    Resonant modes (lambda within RESONANCE_EPS of iZ) are reduced to the
    constant-coefficient solver through the substitution v = u e^{i mu C};
    non-resonant modes use the selected convolution branch directly.
    """
    lam = problem.lam
    mu = problem.mu
    notes: list[SolveNote] = []
    if is_resonant(lam):
        prim = zero_mean_primitive(problem.c)
        rhs = problem.rhs

        def g(t):
            t = np.asarray(t)
            return np.exp(1j * mu * prim(t)) * np.asarray(rhs(t))

        inner = solve_periodic_scalar(lam, wrap_periodic(g), tol, problem.grid_size)
        t_grid = grid_points(problem.grid_size)
        u = np.exp(-1j * mu * prim(t_grid)) * inner.values.values
        return ModeSolution(GridFn(u), Branch.RESONANT, inner.conditioning,
                            inner.notes, inner.peak_exponent)

    e_kernel = TWO_PI * abs(problem.q.real)
    if branch_policy is BranchPolicy.FORCE_MINUS:
        branch = Branch.MINUS
    elif branch_policy is BranchPolicy.FORCE_PLUS:
        branch = Branch.PLUS
    else:
        cert = sign_info if sign_info is not None else sign_certificate(problem.c.imag_part())
        branch, risk = _auto_branch(mu, lam, cert, window_info, problem.c, problem.q)
        if risk is not None:
            if risk.value > EXP_CAP:
                raise KernelOverflow(
                    f"worst-case kernel exponent {risk.value:.1f} exceeds cap",
                    mode=f"mu={mu:g}", exponent=risk.value)
            notes.append(risk)
            e_kernel = risk.value
    div = _divisor(branch, lam)
    cond = abs(div)
    if cond < COND_FLOOR:
        notes.append(SolveNote("IllConditioned",
                               f"divisor magnitude {cond:.3e} below {COND_FLOOR:g}",
                               cond))
    t_grid = grid_points(problem.grid_size)
    rhs_vals = np.asarray(problem.rhs(t_grid), dtype=complex)
    engine = _CellEngine(problem.c, problem.grid_size)
    if branch_policy is not BranchPolicy.AUTO:
        e_kernel = TWO_PI * abs(lam.real) + abs(mu) * engine.im_range
    u = None
    peak = 0.0
    got = engine.solve(branch, lam, mu, rhs_vals[None, :])
    if got is not None:
        vals, peak = got
        u = vals[:, 0] / div
        du = _spectral_derivative_cols(u[:, None])[:, 0]
        coeff = 1j * mu * problem.c(t_grid) + problem.q
        resid = float(np.max(np.abs(du + coeff * u - rhs_vals)))
        scale = max(1.0, float(np.max(np.abs(rhs_vals))),
                    (1.0 + float(np.max(np.abs(coeff)))) * float(np.max(np.abs(u))))
        floor = 4096.0 * np.finfo(float).eps * math.exp(min(600.0, e_kernel))
        if resid > max(tol, floor) * scale:
            u = None
    if u is None:
        vals, peak = _convolution_batch(branch, lam, mu, problem.c, [problem.rhs],
                                        problem.grid_size, tol, f"mu={mu:g}")
        u = vals[:, 0] / div
    return ModeSolution(GridFn(u), branch, cond, tuple(notes), peak)


def residual(sol: ModeSolution, problem: ModeProblem) -> float:
    """Grid sup of |u' + i(mu*c - i q)u - rhs| via spectral differentiation."""
    t_grid = grid_points(problem.grid_size)
    y = sol.values.values
    dy = sol.values.derivative().values
    coeff = 1j * problem.mu * problem.c(t_grid) + problem.q
    r = dy + coeff * y - np.asarray(problem.rhs(t_grid), dtype=complex)
    return float(np.max(np.abs(r)))


def gauge_transform(field: CoefficientField, a: TrigPoly,
                    direction: GaugeDirection = GaugeDirection.FORWARD) -> CoefficientField:
    """Multiply each mode by e^{+-i mu_r A(t)}, A the zero-mean primitive of a.

    Forward applies e^{+i mu A}, Inverse e^{-i mu A}; the two compose to the
    identity.  Only real gauge functions are meaningful.
    """
    if not isinstance(a, TrigPoly) or not a.is_real():
        raise DomainError("gauge function must be a real trig polynomial")
    prim = zero_mean_primitive(a)
    sign = 1.0 if direction is GaugeDirection.FORWARD else -1.0
    t_grid = grid_points(field.grid_size)
    a_vals = prim(t_grid)
    out = field.empty_like()
    for (label, r, s), g in field.items():
        mu = float(field.model.rep(label).mu[r])
        out.set_mode(label, r, s, g.values * np.exp(sign * 1j * mu * a_vals))
    return out


def solve_field(model: SpectralModel, c: TrigPoly, q: complex,
                f: CoefficientField, tol: float = 1e-9,
                branch_policy: BranchPolicy = BranchPolicy.AUTO,
                threads: int | None = None) -> tuple[CoefficientField, list[ModeIssue]]:
    """Solve every mode of the field; obstructions are collected, not raised.

    Modes sharing a representation row (same label and r, hence the same
    kernel) are integrated in one vectorized batch.  Batches run on a thread
    pool; results and issues are merged in deterministic key order.
    """
    if f.model is not model and f.model.kind != model.kind:
        raise DomainError("field belongs to a different model")
    cert = sign_certificate(c.imag_part())
    window = None
    if cert.verdict is SignVerdict.CHANGES_SIGN:
        window = _window_extremes(c)
    grid = f.grid_size
    engine = _CellEngine(c, grid)
    c_grid = np.asarray(c(grid_points(grid)), dtype=complex)
    # group modes by (label, r): same mu and kernel across the s columns
    groups: dict[tuple[int, int], list[int]] = {}
    for (label, r, s) in f.keys():
        groups.setdefault((label, r), []).append(s)
    out = f.empty_like()
    issues: list[ModeIssue] = []
    results: dict[tuple[int, int, int], GridFn] = {}

    def run_group(key: tuple[int, int]) -> list:
        label, r = key
        mu = float(model.rep(label).mu[r])
        cols = groups[key]
        lam = q + 1j * mu * mean(c)
        found: list = []
        if is_resonant(lam):
            for s in cols:
                prob = ModeProblem(mu, c, q, f.get(label, r, s), grid)
                try:
                    sol = solve_mode(prob, BranchPolicy.AUTO, tol, cert, window)
                except ResonanceObstruction as exc:
                    found.append(("issue", (label, r, s), ModeIssue(
                        label, r, s, "ResonanceObstruction", str(exc),
                        exc.integral)))
                    continue
                found.append(("ok", (label, r, s), sol))
            return found
        if branch_policy is BranchPolicy.FORCE_MINUS:
            branch, risk = Branch.MINUS, None
        elif branch_policy is BranchPolicy.FORCE_PLUS:
            branch, risk = Branch.PLUS, None
        else:
            branch, risk = _auto_branch(mu, lam, cert, window, c, q)
        if risk is not None and risk.value > EXP_CAP:
            for s in cols:
                found.append(("issue", (label, r, s), ModeIssue(
                    label, r, s, "KernelOverflow",
                    f"worst-case kernel exponent {risk.value:.1f} exceeds cap",
                    risk.value)))
            return found
        div = _divisor(branch, lam)
        cond = abs(div)
        stack = np.stack([f.get(label, r, s).values for s in cols])   # (k, n)
        peak = 0.0
        got = engine.solve(branch, lam, mu, stack)
        if got is not None:
            vals, peak = got
            y = vals / div
            dy = _spectral_derivative_cols(y)
            coeff = 1j * mu * c_grid + q
            res_cols = np.max(np.abs(dy + coeff[:, None] * y - stack.T), axis=0)
            scale = np.maximum(1.0, np.max(np.abs(stack), axis=1))
            scale = np.maximum(scale, (1.0 + float(np.max(np.abs(coeff))))
                               * np.max(np.abs(y), axis=0))
            if branch_policy is not BranchPolicy.AUTO:
                e_kernel = TWO_PI * abs(lam.real) + abs(mu) * engine.im_range
            elif risk is not None:
                e_kernel = risk.value
            else:
                e_kernel = TWO_PI * abs(q.real)
            floor = max(tol, 4096.0 * np.finfo(float).eps
                        * math.exp(min(600.0, e_kernel)))
            bad = [j for j in range(len(cols)) if res_cols[j] > floor * scale[j]]
        else:
            vals = np.zeros((grid, len(cols)), dtype=complex)
            bad = list(range(len(cols)))
        overflowed: set[int] = set()
        if bad:
            try:
                sub, peak2 = _convolution_batch(
                    branch, lam, mu, c, [f.get(label, r, cols[j]) for j in bad],
                    grid, tol, f"({label},{r})")
            except KernelOverflow as exc:
                for j in bad:
                    overflowed.add(j)
                    found.append(("issue", (label, r, cols[j]), ModeIssue(
                        label, r, cols[j], "KernelOverflow", str(exc),
                        exc.exponent)))
            else:
                for idx, j in enumerate(bad):
                    vals[:, j] = sub[:, idx]
                peak = max(peak, peak2)
        notes = []
        if risk is not None:
            notes.append(risk)
        if cond < COND_FLOOR:
            notes.append(SolveNote("IllConditioned",
                                   f"divisor magnitude {cond:.3e} below {COND_FLOOR:g}",
                                   cond))
        for j, s in enumerate(cols):
            if j in overflowed:
                continue
            sol = ModeSolution(GridFn(vals[:, j] / div), branch, cond,
                               tuple(notes), peak)
            found.append(("ok", (label, r, s), sol))
        return found

    keys = sorted(groups)
    workers = threads if threads is not None else min(8, os.cpu_count() or 1)
    if workers > 1 and len(keys) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(run_group, keys))
    else:
        batches = [run_group(k) for k in keys]
    for batch in batches:
        for kind, key, payload in batch:
            if kind == "ok":
                results[key] = payload.values
                for note in payload.notes:
                    issues.append(ModeIssue(key[0], key[1], key[2],
                                            note.kind, note.detail, note.value))
            else:
                issues.append(payload)
    for key in sorted(results):
        out.set_mode(*key, results[key])
    issues.sort(key=lambda i: (i.label, i.r, i.s, i.kind))
    return out, issues
