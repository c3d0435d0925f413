"""Unit tests for the singular-solution recipes and their self-checks."""

import math
from fractions import Fraction

import pytest

from hypoell import (
    TrigPoly,
    homogeneous_resonant,
    sign_change_singular,
    small_gap_singular,
    verify_report,
)
from hypoell.errors import RecipeInapplicable
from hypoell.spectra import CustomTable

EXACT_AREA = 2 * math.pi / 3 - 2 * math.sqrt(3)


def test_sign_change_window_and_checks(su2):
    c = TrigPoly.from_rows([(0, 0, 1), (1, 2, 0)])     # 2e^{it} + i
    report = sign_change_singular(su2, c, (0, "1/2"), 6)
    assert report.recipe == "sign_change_singular"
    assert report.params["variant"] == "b0pos"
    assert report.params["branch"] == "sin"
    assert report.params["gauge_restored"] is True
    assert report.params["window_area"] == pytest.approx(EXACT_AREA, abs=1e-9)
    assert report.all_checks_pass
    names = [item.name for item in report.checks]
    assert "laplace-floor" in names and "forcing-envelope" in names
    assert all(item.status == "pass" for item in report.checks)


def test_sign_change_mirrored_variant(su2):
    c = TrigPoly.from_rows([(0, 0, -1), (1, 2, 0)])    # 2e^{it} - i
    report = sign_change_singular(su2, c, (0, "1/2"), 6)
    assert report.params["variant"] == "b0neg"
    assert report.params["window_area"] == pytest.approx(-EXACT_AREA, abs=1e-9)
    assert report.all_checks_pass


def test_sign_change_rejects_wrong_variant(su2):
    c = TrigPoly.from_rows([(0, 0, -1), (1, 2, 0)])
    with pytest.raises(RecipeInapplicable, match="mirrored variant 'b0neg'"):
        sign_change_singular(su2, c, (0, "1/2"), 4, variant="b0pos")


def test_sign_change_needs_a_sign_change(su2):
    c = TrigPoly.from_rows([(0, 0, 1), (1, 0, -0.5), (-1, 0, -0.5)])  # b = 1 - cos t
    with pytest.raises(RecipeInapplicable, match="does not change sign"):
        sign_change_singular(su2, c, (0, "1/2"), 4)


def test_sign_change_verifies_from_fields_alone(su2):
    c = TrigPoly.from_rows([(0, 0, 1), (1, 2, 0)])
    report = sign_change_singular(su2, c, (0, "1/2"), 6)
    summary = verify_report(report)
    assert summary.passed
    names = [item.name for item in summary.items]
    assert names == [
        "forcing-decay",
        "solution-not-rapid",
        "equation-residual",
        "solution-tempered",
        "construction-checks",
    ]


def test_homogeneous_resonant_unit_modes(su2):
    c = TrigPoly.from_rows([(0, 0, 1), (1, 1, 0)])     # e^{it} + i
    report = homogeneous_resonant(su2, c, (0, 1), 6)
    assert report.all_checks_pass
    for rec in report.records:
        assert rec.mu == 0.0
        assert rec.sup_f == 0.0
        assert abs(rec.sup_u - 1.0) < 1e-9
        assert rec.residual < 1e-10
    # zero weights live only on even labels for this model
    assert [rec.label for rec in report.records] == [0, 2, 4, 6, 8, 10]
    assert verify_report(report).passed


def test_homogeneous_resonant_torus_ordering(torus):
    c = TrigPoly.from_rows([(0, 1, 0), (1, 0, 1)])     # 1 + i e^{it}
    report = homogeneous_resonant(torus, c, (0, 0), 5)
    assert [rec.label for rec in report.records] == [0, -1, 1, -2, 2]
    assert report.all_checks_pass


def test_homogeneous_needs_infinite_family(torus):
    c = TrigPoly.from_rows([(0, "1/3", 1)])            # resonant only at mu = 0
    with pytest.raises(RecipeInapplicable, match="infinite resonant family"):
        homogeneous_resonant(torus, c, (0, 0), 4)


def _gap_table(count=4):
    rows = []
    for j in range(1, count + 1):
        w = j + 1
        target = 0.4 * w ** (-float(j))
        eps = Fraction(math.asin(target / 2) / math.pi).limit_denominator(10**15)
        rows.append(f"{j} 1 {w * w - 1} {j + eps}")
    return "\n".join(rows)


def test_small_gap_forcing_collapses_solution_does_not():
    model = CustomTable.from_text(_gap_table())
    c = TrigPoly.from_rows([(0, 1, 0)])
    report = small_gap_singular(model, c, (0, 0), [(j, 0) for j in range(1, 5)])
    assert report.all_checks_pass
    sup_u = [rec.sup_u for rec in report.records]
    assert max(sup_u) / min(sup_u) < 1.0 + 1e-9       # no decay across slots
    # forcing sup collapses like the divisor gap ~ 0.4 * weight^{-j}
    for j, rec in enumerate(report.records, start=1):
        assert rec.sup_f <= 0.5 * rec.weight ** (-float(j))
        assert rec.residual < 1e-8
    assert verify_report(report).passed


def test_small_gap_guards():
    model = CustomTable.from_text(_gap_table())
    c = TrigPoly.from_rows([(0, 1, 0)])
    with pytest.raises(RecipeInapplicable, match="increase strictly"):
        small_gap_singular(model, c, (0, 0), [(1, 0), (1, 0)])
    resonant = CustomTable.from_text("1 1 3 1\n2 1 8 5/2")
    with pytest.raises(RecipeInapplicable, match="use the homogeneous recipe"):
        small_gap_singular(resonant, c, (0, 0), [(1, 0), (2, 0)])
    wide = CustomTable.from_text("1 1 3 4/3\n2 1 8 5/2")
    with pytest.raises(RecipeInapplicable, match="exceeds weight"):
        small_gap_singular(wide, c, (0, 0), [(1, 0), (2, 0)])


def test_report_describe_is_readable(su2):
    c = TrigPoly.from_rows([(0, 0, 1), (1, 1, 0)])
    report = homogeneous_resonant(su2, c, (0, 1), 4)
    text = report.describe()
    assert "homogeneous" in text
    assert "pass" in text
    assert report.summary_table().strip()
