"""Unit tests for decay classification, synthesis, and pairing diagnostics."""

import math

import numpy as np
import pytest

from hypoell import (
    CoefficientField,
    decay_classify,
    default_battery,
    distribution_pairing,
    plancherel_norm,
    synthesize_torus,
)
from hypoell.analysis import DecayClass
from hypoell.errors import InsufficientData

GRID = 64
TS = np.arange(GRID) * 2 * np.pi / GRID


def su2_diag_field(su2, scale_fn, lmax):
    field = CoefficientField(su2, grid_size=GRID)
    for label in range(lmax + 1):
        amp = scale_fn(su2.rep(label).weight)
        field.set_mode(label, 0, 0, amp * np.exp(1j * TS))
    return field


def test_exponential_coefficients_classify_as_rapid(su2):
    field = su2_diag_field(su2, lambda w: math.exp(-w), 20)
    profile = decay_classify(field)
    assert profile.classification is DecayClass.RAPID_DECAY
    assert all(s <= -6.0 for s in profile.slopes)


def test_power_law_coefficients_classify_as_polynomial(su2):
    field = su2_diag_field(su2, lambda w: (1.0 + w) ** -1.5, 20)
    profile = decay_classify(field)
    assert profile.classification is DecayClass.POLYNOMIAL_BOUND
    assert -2.0 < profile.slopes[0] < -1.0


def test_stretched_exponential_growth_is_not_tempered(su2):
    field = su2_diag_field(su2, lambda w: math.exp(0.5 * math.sqrt(w)), 20)
    profile = decay_classify(field)
    assert profile.classification is DecayClass.NO_TEMPERED_BOUND
    assert profile.sqrt_growth_rate == pytest.approx(0.5, abs=1e-9)


def test_too_few_weights_is_an_error(su2):
    field = su2_diag_field(su2, lambda w: 1.0, 4)
    with pytest.raises(InsufficientData):
        decay_classify(field)


def test_profile_report_and_table(su2):
    field = su2_diag_field(su2, lambda w: math.exp(-w), 20)
    profile = decay_classify(field)
    text = profile.describe()
    assert "RapidDecay" in text
    table = profile.to_table()
    lines = table.strip().splitlines()
    assert lines[0].startswith("weight,beta,sup_norm")
    assert len(lines) == 1 + 3 * len(profile.records)


def make_torus_field(torus, coeffs):
    field = CoefficientField(torus, grid_size=GRID)
    for label, amp in coeffs.items():
        field.set_mode(label, 0, 0, amp * np.exp(1j * np.cos(TS)))
    return field


def test_torus_synthesis_matches_direct_fourier_sum(torus):
    coeffs = {0: 1.0, 1: 0.5, -1: 0.25, 3: 0.1}
    field = make_torus_field(torus, coeffs)
    t0, x0 = 0.7, 1.3
    direct = sum(
        amp * np.exp(1j * np.cos(t0)) * np.exp(1j * label * x0)
        for label, amp in coeffs.items()
    )
    assert synthesize_torus(field, t0, x0) == pytest.approx(direct, abs=1e-12)


def test_torus_plancherel_matches_coefficient_sum(torus):
    coeffs = {0: 1.0, 1: 0.5, -1: 0.25, 3: 0.1}
    field = make_torus_field(torus, coeffs)
    t0 = 0.7
    direct = math.sqrt(sum(abs(amp) ** 2 for amp in coeffs.values()))
    assert plancherel_norm(field, t0) == pytest.approx(direct, abs=1e-12)


def test_default_battery_is_a_fixed_wave_set():
    battery = default_battery()
    assert len(battery) == 8


def test_pairing_is_finite_and_linear_in_the_field(torus):
    coeffs = {0: 1.0, 1: 0.5, -1: 0.25, 3: 0.1}
    field = make_torus_field(torus, coeffs)
    doubled = make_torus_field(torus, {k: 2 * v for k, v in coeffs.items()})
    battery = default_battery()
    base = distribution_pairing(field, battery)
    assert math.isfinite(base) and base > 0
    assert distribution_pairing(doubled, battery) == pytest.approx(2 * base, rel=1e-12)


def test_pairing_accepts_plain_callables(torus):
    field = make_torus_field(torus, {0: 1.0, 2: 0.5})
    value = distribution_pairing(field, [lambda t: 1.0 + 0.5 * np.cos(t)])
    assert math.isfinite(value) and value > 0
