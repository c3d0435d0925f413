"""Unit tests for exact trigonometric polynomials and window machinery."""

import math
from fractions import Fraction

import numpy as np
import pytest

from hypoell import (TWO_PI, SignVerdict, TrigPoly, min_im_window,
                     sign_certificate, window_integral)
from hypoell.errors import DomainError
from hypoell.torusfn import mean

import oracles


def test_from_rows_keeps_exact_coefficients():
    p = TrigPoly.from_rows([(1, "1/3", 0), (-1, "1/3", 0), (0, 2, "-3/7")])
    assert p.exact_coeff(1) == (Fraction(1, 3), Fraction(0))
    assert p.exact_coeff(0) == (Fraction(2), Fraction(-3, 7))
    # absent frequency is exactly zero
    assert p.exact_coeff(5) == (Fraction(0), Fraction(0))


def test_float_rows_lose_exactness():
    p = TrigPoly.from_rows([(1, 0.25, 0.0)])
    assert p.exact_coeff(1) is None
    assert p.coeff(1) == 0.25


def test_evaluation_matches_closed_form():
    # p = 2 cos t + 3 sin(2t): rows e^{it}+e^{-it} and -(3i/2)(e^{2it}-e^{-2it})
    p = TrigPoly.from_rows([(1, 1, 0), (-1, 1, 0),
                            (2, 0, "-3/2"), (-2, 0, "3/2")])
    ts = np.linspace(0.0, TWO_PI, 17)
    expect = 2 * np.cos(ts) + 3 * np.sin(2 * ts)
    got = np.asarray(p(ts))
    assert np.max(np.abs(got - expect)) < 1e-14


def test_derivative_is_exact_on_trig_polys():
    p = TrigPoly.from_rows([(3, "1/2", "1/5"), (-3, "1/2", "-1/5"), (0, 1, 0)])
    dp = p.derivative()
    ts = np.linspace(0.2, 6.0, 11)
    h = 1e-6
    fd = (np.asarray(p(ts + h)) - np.asarray(p(ts - h))) / (2 * h)
    assert np.max(np.abs(np.asarray(dp(ts)) - fd)) < 1e-7


def test_primitive_zero_at_origin():
    p = TrigPoly.from_rows([(0, 2, 0), (1, 0, "-1/2"), (-1, 0, "1/2")])
    # p = 2 + sin t; primitive of (p - mean) with value 0 at t = 0
    prim = p.primitive_zero_at_origin()
    assert abs(complex(prim(0.0))) < 1e-15
    ts = np.linspace(0.0, TWO_PI, 9)
    expect = 1.0 - np.cos(ts)     # integral of sin from 0 to t
    assert np.max(np.abs(np.asarray(prim(ts)) - expect)) < 1e-14


def test_mean_and_sup_bound():
    p = TrigPoly.from_rows([(0, "3/4", 0), (2, 0, 1), (-2, 0, -1)])
    assert mean(p) == complex(Fraction(3, 4))
    ts = np.linspace(0.0, TWO_PI, 4096)
    assert p.sup_bound() >= float(np.max(np.abs(np.asarray(p(ts))))) - 1e-12


def test_window_integral_matches_quadrature():
    p = TrigPoly.from_rows([(0, 1, 0), (1, 0, "-1"), (-1, 0, "1")])  # 1+2 sin t
    for (t, tau) in [(0.3, 1.1), (4.0, 2.5), (6.0, 1.0)]:
        got = window_integral(p, t, tau)
        want = oracles.quad_window_integral(
            lambda s: np.real(np.asarray(p(s))), t, tau)
        assert abs(got.real - want) < 1e-10
        assert abs(got.imag) < 1e-12


def test_window_integral_full_period_is_mean():
    p = TrigPoly.from_rows([(0, "1/3", "2/7"), (1, 1, 1), (-1, -1, 1)])
    got = window_integral(p, 1.234, TWO_PI)
    want = complex(mean(p)) * TWO_PI
    assert abs(got - want) < 1e-12


def test_window_integral_rejects_non_poly():
    with pytest.raises(DomainError):
        window_integral(lambda t: t, 0.0, 1.0)


def test_min_im_window_on_one_plus_two_sin():
    # frozen oracle: window (7pi/6, 11pi/6), area 2pi/3 - 2*sqrt(3)
    # Im(i + e^{it} - e^{-it}) = 1 + 2 sin t
    c = TrigPoly.from_rows([(0, 0, 1), (1, 1, 0), (-1, -1, 0)])
    wx = min_im_window(c)
    assert abs(wx.value - oracles.WINDOW_AREA_B_1_PLUS_2SIN) < 1e-9
    assert abs(wx.t - oracles.WINDOW_START_B_1_PLUS_2SIN) < 1e-6
    assert abs(wx.tau - oracles.WINDOW_WIDTH_B_1_PLUS_2SIN) < 1e-6
    assert wx.interior


def test_min_im_window_matches_grid_oracle():
    # a lopsided drift with no symmetry
    c = TrigPoly.from_rows([(0, 0, "1/4"), (1, 0, 1), (-1, 0, 1),
                            (2, "1/3", "-1/5"), (-2, "1/3", "1/5")])
    wx = min_im_window(c)
    b = c.imag_part()
    val, start, width = oracles.grid_window_min(
        lambda s: np.real(np.asarray(b(s))), 4096)
    assert abs(wx.value - val) < 1e-5      # oracle is grid-limited
    refined = oracles.quad_window_integral(
        lambda s: np.real(np.asarray(b(s))), wx.t, wx.tau)
    assert abs(wx.value - refined) < 1e-9


def test_sign_certificate_verdicts():
    mk = TrigPoly.from_rows
    changes = mk([(0, 0, 1), (1, 1, 0), (-1, -1, 0)])         # Im: 1 + 2 sin t
    assert sign_certificate(changes.imag_part()).verdict \
        is SignVerdict.CHANGES_SIGN
    touches = mk([(0, 0, 1), (1, "1/2", 0), (-1, "-1/2", 0)])  # Im: 1 + sin t
    assert sign_certificate(touches.imag_part()).verdict \
        is SignVerdict.NON_NEGATIVE
    positive = mk([(0, 0, 2), (1, "1/2", 0), (-1, "-1/2", 0)])  # Im: 2 + sin t
    assert sign_certificate(positive.imag_part()).verdict \
        is SignVerdict.NON_NEGATIVE
    zero = TrigPoly.from_rows([(0, 0, 0)])
    assert sign_certificate(zero).verdict is SignVerdict.IDENTICALLY_ZERO
    const = TrigPoly.from_rows([(0, "5/7", 0)])
    assert sign_certificate(const).verdict is SignVerdict.CONSTANT_NONZERO


def test_real_imag_parts_split():
    c = TrigPoly.from_rows([(1, 1, "1/2"), (-1, 1, "-1/2"), (0, 0, 3)])
    a, b = c.real_part(), c.imag_part()
    ts = np.linspace(0, TWO_PI, 33)
    cv = np.asarray(c(ts))
    assert np.max(np.abs(np.asarray(a(ts)) - cv.real)) < 1e-14
    assert np.max(np.abs(np.asarray(b(ts)) - cv.imag)) < 1e-14


def test_constant_and_is_zero():
    z = TrigPoly.constant(0)
    assert z.is_zero()
    c = TrigPoly.constant(Fraction(1, 3))
    assert not c.is_zero()
    assert complex(c(2.0)) == complex(Fraction(1, 3))
