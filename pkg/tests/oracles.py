"""Independent oracles for derived quantities.

Everything here deliberately uses different algorithms from the package
(classical RK4 time stepping with periodic shooting, brute-force grid
scans, adaptive quadrature, exact continued fractions), so agreement is
evidence rather than tautology.  The frozen constants at the bottom were
produced by these oracles and are asserted against the package in the
unit and acceptance tests.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy.integrate import quad

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# RK4 with periodic shooting: the reference for y' + lam*y = h
# ---------------------------------------------------------------------------

def rk4_periodic(lam: complex, h_vals_fn, n_out: int,
                 n_steps: int = 16384) -> np.ndarray:
    """Unique periodic solution of y' + lam*y = h by RK4 + shooting.

    ``h_vals_fn`` maps a numpy array of times to complex values.  The
    homogeneous solution (phi' = -lam*phi, phi(0)=1) and a particular
    solution (p(0)=0) are advanced together; periodicity fixes
    y(0) = p(2pi) / (1 - phi(2pi)).  Returns y at n_out uniform points.

    Forward integration is only stable for Re lam >= 0 (otherwise the
    homogeneous mode grows and the shooting recombination cancels
    catastrophically); for Re lam < 0 the time-reversed problem
    z' + (-lam) z = -h(-t) is integrated instead and the samples are
    read off backwards.
    """
    if lam.real < 0:
        rev = rk4_periodic(-lam, lambda t: -np.asarray(h_vals_fn(TWO_PI - t)),
                           n_out, n_steps)
        return rev[(-np.arange(n_out)) % n_out]
    if n_steps % n_out:
        raise ValueError("n_steps must be a multiple of n_out")
    dt = TWO_PI / n_steps
    ts = np.arange(n_steps) * dt
    h_lo = np.asarray(h_vals_fn(ts), dtype=complex)
    h_mid = np.asarray(h_vals_fn(ts + dt / 2.0), dtype=complex)
    h_hi = np.asarray(h_vals_fn(ts + dt), dtype=complex)

    phi = 1.0 + 0.0j
    p = 0.0 + 0.0j
    stride = n_steps // n_out
    phi_out = np.empty(n_out, dtype=complex)
    p_out = np.empty(n_out, dtype=complex)
    for i in range(n_steps):
        if i % stride == 0:
            phi_out[i // stride] = phi
            p_out[i // stride] = p
        k1p = -lam * phi
        k1q = -lam * p + h_lo[i]
        k2p = -lam * (phi + 0.5 * dt * k1p)
        k2q = -lam * (p + 0.5 * dt * k1q) + h_mid[i]
        k3p = -lam * (phi + 0.5 * dt * k2p)
        k3q = -lam * (p + 0.5 * dt * k2q) + h_mid[i]
        k4p = -lam * (phi + dt * k3p)
        k4q = -lam * (p + dt * k3q) + h_hi[i]
        phi = phi + dt * (k1p + 2 * k2p + 2 * k3p + k4p) / 6.0
        p = p + dt * (k1q + 2 * k2q + 2 * k3q + k4q) / 6.0
    y0 = p / (1.0 - phi)
    return phi_out * y0 + p_out


def rk4_periodic_stable_batch(lams, h_fns, n_out: int,
                              n_steps: int = 16384) -> np.ndarray:
    """Vectorized rk4_periodic over many cases, each given as a callable.

    Handles the Re lam < 0 time reversal per case (see rk4_periodic) and
    returns an (n_out, m) array of periodic solutions.
    """
    lams = np.asarray(lams, dtype=complex)
    m = lams.size
    dt = TWO_PI / n_steps
    ts = np.arange(n_steps) * dt
    reversed_case = lams.real < 0
    lam_eff = np.where(reversed_case, -lams, lams)
    stages = []
    for shift in (0.0, dt / 2.0, dt):
        cols = []
        for j in range(m):
            tt = ts + shift
            if reversed_case[j]:
                cols.append(-np.asarray(h_fns[j](TWO_PI - tt), dtype=complex))
            else:
                cols.append(np.asarray(h_fns[j](tt), dtype=complex))
        stages.append(np.stack(cols, axis=1))
    out = rk4_periodic_batch(lam_eff, tuple(stages), n_out, n_steps)
    idx_rev = (-np.arange(n_out)) % n_out
    for j in range(m):
        if reversed_case[j]:
            out[:, j] = out[idx_rev, j]
    return out


def rk4_periodic_batch(lams: np.ndarray, h_stage: tuple, n_out: int,
                       n_steps: int = 16384) -> np.ndarray:
    """Vectorized RK4 + shooting core (forward only: needs Re lam >= 0).

    ``lams`` has shape (m,);  ``h_stage`` = (h_lo, h_mid, h_hi), each of
    shape (n_steps, m).  Returns an (n_out, m) array.
    """
    h_lo, h_mid, h_hi = h_stage
    m = lams.size
    if n_steps % n_out:
        raise ValueError("n_steps must be a multiple of n_out")
    dt = TWO_PI / n_steps
    stride = n_steps // n_out
    phi = np.ones(m, dtype=complex)
    p = np.zeros(m, dtype=complex)
    phi_out = np.empty((n_out, m), dtype=complex)
    p_out = np.empty((n_out, m), dtype=complex)
    for i in range(n_steps):
        if i % stride == 0:
            phi_out[i // stride] = phi
            p_out[i // stride] = p
        k1p = -lams * phi
        k1q = -lams * p + h_lo[i]
        k2p = -lams * (phi + 0.5 * dt * k1p)
        k2q = -lams * (p + 0.5 * dt * k1q) + h_mid[i]
        k3p = -lams * (phi + 0.5 * dt * k2p)
        k3q = -lams * (p + 0.5 * dt * k2q) + h_mid[i]
        k4p = -lams * (phi + dt * k3p)
        k4q = -lams * (p + dt * k3q) + h_hi[i]
        phi = phi + dt * (k1p + 2 * k2p + 2 * k3p + k4p) / 6.0
        p = p + dt * (k1q + 2 * k2q + 2 * k3q + k4q) / 6.0
    y0 = p / (1.0 - phi)
    return phi_out * y0[None, :] + p_out


# ---------------------------------------------------------------------------
# adaptive-quadrature closed form: a second independent spot check
# ---------------------------------------------------------------------------

def quad_periodic_solution(lam: complex, h_vals_fn, t: float) -> complex:
    """Periodic solution at one point via adaptive quadrature.

    Uses the past-integrating convolution u(t) = D^{-1} int_0^{2pi}
    e^{-lam*s} h(t-s) ds with D = 1 - e^{-2pi*lam}; requires Re lam > 0
    for a bounded kernel.
    """
    if lam.real <= 0:
        raise ValueError("quad oracle wants Re lam > 0")

    def part(s, fn):
        vals = np.exp(-lam * s) * h_vals_fn(np.atleast_1d(t - s))[0]
        return fn(vals)

    re, _ = quad(lambda s: part(s, np.real), 0.0, TWO_PI, limit=300,
                 epsabs=1e-13, epsrel=1e-13)
    im, _ = quad(lambda s: part(s, np.imag), 0.0, TWO_PI, limit=300,
                 epsabs=1e-13, epsrel=1e-13)
    return complex(re, im) / (1.0 - np.exp(-TWO_PI * lam))


# ---------------------------------------------------------------------------
# brute-force window scan: reference for the minimal window integral
# ---------------------------------------------------------------------------

def grid_window_min(b_vals_fn, n: int = 4096) -> tuple[float, float, float]:
    """Minimum over (start, width) of the running integral of b.

    Plain Riemann cumulative sums on a dense uniform grid and an
    exhaustive scan over every (i, j) index pair — O(n^2) but vectorized.
    Returns (min_value, start, width).
    """
    dt = TWO_PI / n
    ts = np.arange(n) * dt
    b = np.asarray(b_vals_fn(ts), dtype=float)
    csum = np.concatenate(([0.0], np.cumsum(b) * dt))   # csum[i] = int_0^{t_i}
    total = csum[-1]
    # window integral from t_i over width j*dt:
    #   csum[i+j] - csum[i]        (wrapping adds the full-period total)
    ext = np.concatenate((csum[:-1], csum[:-1] + total))
    best = np.inf
    arg = (0, 0)
    for j in range(1, n + 1):
        vals = ext[j:j + n] - ext[:n]
        i = int(np.argmin(vals))
        if vals[i] < best:
            best = float(vals[i])
            arg = (i, j)
    return best, arg[0] * dt, arg[1] * dt


def quad_window_integral(b_vals_fn, start: float, width: float) -> float:
    """Adaptive quadrature of b over [start, start+width]."""
    val, _ = quad(lambda s: float(b_vals_fn(np.atleast_1d(s))[0]),
                  start, start + width, limit=300, epsabs=1e-12,
                  epsrel=1e-12)
    return val


# ---------------------------------------------------------------------------
# exact continued fractions: reference for the approximability probe
# ---------------------------------------------------------------------------

def cf_quotients(x: Fraction | float, depth: int) -> list[int]:
    """Partial quotients of x, exactly for Fractions."""
    out = []
    if isinstance(x, Fraction):
        num, den = x.numerator, x.denominator
        for _ in range(depth):
            if den == 0:
                break
            a, rem = divmod(num, den)
            out.append(int(a))
            num, den = den, rem
    else:
        v = float(x)
        for _ in range(depth):
            a = int(np.floor(v))
            out.append(a)
            frac = v - a
            if frac < 1e-15:
                break
            v = 1.0 / frac
    return out


def cf_convergents(quotients: list[int]) -> list[Fraction]:
    ps, qs = [0, 1], [1, 0]
    out = []
    for a in quotients:
        ps.append(a * ps[-1] + ps[-2])
        qs.append(a * qs[-1] + qs[-2])
        out.append(Fraction(ps[-1], qs[-1]))
    return out


def cf_exponent_estimate(x: float, depth: int) -> float:
    """Estimate of the irrationality exponent from convergent denominators.

    |x - p/q| ~ 1/(q q') gives exponent ~ 1 + log q' / log q along the
    tail of the convergent ladder.
    """
    quots = cf_quotients(x, depth)
    convs = cf_convergents(quots)
    ratios = []
    for prev, nxt in zip(convs[2:], convs[3:]):
        qn, qn1 = prev.denominator, nxt.denominator
        if qn > 10:
            ratios.append(1.0 + np.log(qn1) / np.log(qn))
    return float(np.median(ratios))


# ---------------------------------------------------------------------------
# representation-theory ladders
# ---------------------------------------------------------------------------

def su2_casimir(spin: Fraction) -> Fraction:
    """Quadratic Casimir eigenvalue ell*(ell+1) of the spin-ell block."""
    return spin * (spin + 1)


def su2_transport_speeds(spin: Fraction) -> list[Fraction]:
    """Diagonal transport speeds -ell, -ell+1, ..., ell."""
    two = int(2 * spin)
    return [Fraction(2 * r - two, 2) for r in range(two + 1)]


# ---------------------------------------------------------------------------
# frozen oracle outputs
# ---------------------------------------------------------------------------

# minimal window integral of b(t) = 1 + 2 sin t: the window is the arc
# where b < 0, i.e. (7pi/6, 11pi/6), and quadrature gives 2pi/3 - 2*sqrt(3).
WINDOW_AREA_B_1_PLUS_2SIN = 2.0 * np.pi / 3.0 - 2.0 * np.sqrt(3.0)
WINDOW_START_B_1_PLUS_2SIN = 7.0 * np.pi / 6.0
WINDOW_WIDTH_B_1_PLUS_2SIN = 2.0 * np.pi / 3.0

# exact nonresonant gap floor for c0 = i, q = i/2 over integer transport
# speeds: the distance from k + 1/2 to 0 (k integer) is at least 1/2 and
# attained, so the M = 0 scan constant is exactly one half.
CBEST_C0_I_Q_IHALF = 0.5

# bounded partial quotients (all ones) force the minimal exponent 2.
GOLDEN_RATIO_EXPONENT = 2.0
