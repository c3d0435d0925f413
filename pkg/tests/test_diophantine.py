"""Unit tests for resonance enumeration, gap scans, and approximability."""

from fractions import Fraction

import pytest

from hypoell import (ArithmeticInput, LiouvilleClass, ResonantVerdict, SU2,
                     TrigPoly, Torus1, exp_gap, liouville_probe,
                     lower_bound_scan, resonant_set, split_q)
from hypoell.errors import Rigor

import oracles


def _arith(c_rows, q):
    c = TrigPoly.from_rows(c_rows)
    q_re, q_im = split_q(q)
    return c, ArithmeticInput.from_operator(c, q_re, q_im)


def test_split_q_forms():
    re, im = split_q((1, "1/2"))
    assert Fraction(re) == 1 and Fraction(im) == Fraction(1, 2)
    re, im = split_q(0.5 + 0.25j)
    assert float(re) == 0.5 and float(im) == 0.25
    re, im = split_q("3/7")
    assert Fraction(re) == Fraction(3, 7) and Fraction(im) == 0


def test_exactness_tracking():
    _, exact = _arith([(0, "1/2", 1), (1, 1, 0)], (0, "1/2"))
    assert exact.exact
    _, inexact = _arith([(0, 0.5, 1.0)], (0, 0.5))
    assert not inexact.exact


def test_resonant_set_empty_for_gh_operator(su2):
    # c = e^{it} + i, q = i/2: the only candidate frequency mu = 0 needs
    # the non-integer k = -1/2
    c, arith = _arith([(0, 0, 1), (1, 1, 0)], (0, "1/2"))
    rep = resonant_set(su2, arith, max_label=40)
    assert rep.verdict is ResonantVerdict.EMPTY
    assert rep.rigor is Rigor.CERTIFIED


def test_resonant_set_infinite_family(su2):
    # c = e^{it} + i, q = i: mu = 0 with k = -1 resonates in every even label
    c, arith = _arith([(0, 0, 1), (1, 1, 0)], (0, 1))
    rep = resonant_set(su2, arith, max_label=40)
    assert rep.verdict is ResonantVerdict.INFINITE_FAMILY
    assert rep.rigor is Rigor.CERTIFIED
    ws = rep.resonant_witnesses
    assert ws, "expected explicit witnesses"
    for w in ws:
        assert w.k == -1
        mu = su2.rep(w.label).mu[w.r]
        assert mu == 0


def test_resonant_set_rational_speed_family(su2):
    # c0 = 1/2 (real): k + mu/2 = 0 at every even mu
    c, arith = _arith([(0, "1/2", 0)], (0, 0))
    rep = resonant_set(su2, arith, max_label=20)
    assert rep.verdict is ResonantVerdict.INFINITE_FAMILY
    for w in rep.resonant_witnesses[:5]:
        mu = su2.rep(w.label).mu[w.r]
        assert (w.k + Fraction(mu) / 2) == 0


def test_exp_gap_exact_values():
    # z = 1/2: |1 - e^{+-pi i}| = 2 on both sides
    _, arith = _arith([(0, "1/2", 0)], (0, 0))
    gap = exp_gap(arith, Fraction(1))
    assert abs(gap.value - 2.0) < 1e-14
    assert not gap.saturated
    # integer z: exactly resonant
    gap0 = exp_gap(arith, Fraction(2))
    assert gap0.value == 0.0


def test_exp_gap_mod_one_reduction():
    # z = 10^9 + 1/2 must reduce exactly, not through float 2*pi*z
    _, arith = _arith([(0, str(10**9) + "/1", 0)], (0, "-1/2"))
    gap = exp_gap(arith, Fraction(1))
    assert abs(gap.value - 2.0) < 1e-12


def test_lower_bound_scan_exact_half(su2):
    # frozen oracle: c0 = i, q = i/2 gives C_best = 1/2 at M = 0
    _, arith = _arith([(0, 0, 1)], (0, "1/2"))
    rep = lower_bound_scan(su2, arith, 0.0, 10_000, 200)
    assert rep.bound_constants is not None
    assert rep.bound_constants.c_best == oracles.CBEST_C0_I_Q_IHALF
    assert rep.rigor is Rigor.CERTIFIED


def test_lower_bound_scan_excludes_resonant_pairs(su2):
    # resonant family present, yet the nonresonant gap floor is positive
    _, arith = _arith([(0, "1/2", 0)], (0, 0))
    rep = lower_bound_scan(su2, arith, 0.0, 100, 20)
    assert rep.bound_constants.c_best == 0.25


def test_liouville_probe_golden_ratio():
    phi = (1 + 5 ** 0.5) / 2
    rep = liouville_probe(phi, 30)
    assert rep.classification in (LiouvilleClass.NON_LIOUVILLE_EVIDENCE,
                                  LiouvilleClass.INCONCLUSIVE)
    assert abs(rep.exponent - oracles.GOLDEN_RATIO_EXPONENT) <= 0.2
    # oracle cross-check of the quotient ladder: all ones
    assert oracles.cf_quotients(phi, 12) == [1] * 12
    assert list(rep.quotients[1:8]) == [1] * 7


def test_liouville_probe_rational():
    rep = liouville_probe(Fraction(1, 2), 20)
    assert rep.classification is LiouvilleClass.RATIONAL_DETECTED


def test_liouville_probe_fast_approximable():
    # huge partial quotients: 1/10 + 1/10^12 has a giant quotient early
    x = Fraction(1, 10) + Fraction(1, 10 ** 12)
    rep = liouville_probe(x, 8)
    assert rep.classification in (LiouvilleClass.LIOUVILLE_SUSPECT,
                                  LiouvilleClass.RATIONAL_DETECTED)


def test_liouville_describe_mentions_class():
    rep = liouville_probe((1 + 5 ** 0.5) / 2, 20)
    assert rep.classification.value in rep.describe()


def test_torus_resonance_symmetry(torus):
    # on the torus, c0 = 1/3 resonates exactly at multiples of 3
    _, arith = _arith([(0, "1/3", 0)], (0, 0))
    rep = resonant_set(torus, arith, max_label=9)
    labels = sorted({w.label for w in rep.resonant_witnesses})
    assert labels == [-9, -6, -3, 0, 3, 6, 9]
