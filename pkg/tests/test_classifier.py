"""Unit tests for the hypoellipticity decision procedure."""

import numpy as np

from hypoell import Decision, SU2, Torus1, TrigPoly, classify, explain
from hypoell.errors import Rigor


def test_one_sided_drift_certified_gh(su2):
    c = TrigPoly.from_rows([(0, 0, 1), (1, 1, 0)])     # e^{it} + i
    v = classify(su2, c, (0, "1/2"))
    assert v.decision is Decision.GLOBALLY_HYPOELLIPTIC
    assert v.rigor is Rigor.CERTIFIED
    assert v.resonance is not None


def test_sign_change_certified_not_gh(su2):
    c = TrigPoly.from_rows([(0, 0, 1), (1, 2, 0)])     # 2e^{it} + i
    v = classify(su2, c, (0, "1/2"))
    assert v.decision is Decision.NOT_GLOBALLY_HYPOELLIPTIC
    assert v.rigor is Rigor.CERTIFIED
    assert v.counterexample_hint
    assert "sign" in (v.path + v.counterexample_hint).lower()


def test_infinite_resonance_certified_not_gh(su2):
    c = TrigPoly.from_rows([(0, 0, 1), (1, 1, 0)])     # e^{it} + i, q = i
    v = classify(su2, c, (0, 1))
    assert v.decision is Decision.NOT_GLOBALLY_HYPOELLIPTIC
    assert v.rigor is Rigor.CERTIFIED
    ws = v.resonance.resonant_witnesses
    assert ws and all(w.k == -1 for w in ws)
    assert all(su2.rep(w.label).mu[w.r] == 0 for w in ws)


def test_float_speed_is_undecided(su2):
    c = TrigPoly.from_rows([(0, float(np.sqrt(2)), 0.0)])
    v = classify(su2, c, 0j)
    assert v.decision is Decision.UNDECIDED
    assert v.rigor is Rigor.HEURISTIC


def test_constant_imaginary_part_certified(su2):
    # c = 1/3 + i: b constant nonzero -> solvable at every mode
    c = TrigPoly.from_rows([(0, "1/3", 1)])
    v = classify(su2, c, ("1/2", 0))
    assert v.decision is Decision.GLOBALLY_HYPOELLIPTIC
    assert v.rigor is Rigor.CERTIFIED


def test_rational_speed_on_torus_not_gh(torus):
    # b = 0, c0 = 1/3: dense resonances on the integer frequencies
    c = TrigPoly.from_rows([(0, "1/3", 0)])
    v = classify(torus, c, (0, 0))
    assert v.decision is Decision.NOT_GLOBALLY_HYPOELLIPTIC
    assert v.rigor is Rigor.CERTIFIED


def test_explain_is_readable(su2):
    c = TrigPoly.from_rows([(0, 0, 1), (1, 1, 0)])
    v = classify(su2, c, (0, "1/2"))
    text = explain(v)
    assert "GloballyHypoelliptic" in text
    assert "resonant set" in text
    assert "lower bound" in text


def test_verdict_records_bound_constants(su2):
    c = TrigPoly.from_rows([(0, 0, 1)])
    v = classify(su2, c, (0, "1/2"))
    assert v.decision is Decision.GLOBALLY_HYPOELLIPTIC
    assert v.bound is not None
    assert v.bound.bound_constants.c_best == 0.5
