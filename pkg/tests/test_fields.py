"""Unit tests for grid functions and coefficient fields."""

import numpy as np
import pytest

from hypoell import CoefficientField, GridFn, TWO_PI, grid_points
from hypoell.errors import DomainError


def test_gridfn_interpolates_band_limited_exactly():
    n = 64
    tg = grid_points(n)
    f = np.exp(1j * 5 * tg) + 0.5 * np.cos(3 * tg)
    g = GridFn(f)
    ts = np.linspace(0.1, 6.2, 23)
    want = np.exp(1j * 5 * ts) + 0.5 * np.cos(3 * ts)
    assert np.max(np.abs(np.asarray(g(ts)) - want)) < 1e-12


def test_gridfn_real_samples_give_real_interpolant():
    n = 16
    tg = grid_points(n)
    g = GridFn(np.cos(8 * tg) + 0.0j)   # exactly the Nyquist mode
    ts = np.linspace(0, TWO_PI, 57)
    vals = np.asarray(g(ts))
    assert np.max(np.abs(vals.imag)) < 1e-12
    assert np.max(np.abs(vals.real - np.cos(8 * ts))) < 1e-12


def test_gridfn_derivative_matches_analytic():
    n = 128
    tg = grid_points(n)
    g = GridFn(np.exp(1j * 7 * tg))
    d = g.derivative()
    assert np.max(np.abs(np.asarray(d(tg)) - 7j * np.exp(1j * 7 * tg))) < 1e-10


def test_gridfn_derivative_zeroes_nyquist():
    n = 16
    tg = grid_points(n)
    g = GridFn(np.cos(8 * tg) + 0.0j)
    d = g.derivative()
    # the Nyquist cosine's spectral derivative is taken as zero
    assert np.max(np.abs(d.values)) < 1e-12


def test_gridfn_sup_and_mean():
    n = 32
    tg = grid_points(n)
    g = GridFn(2.0 * np.exp(1j * tg) + 3.0)
    assert abs(g.sup() - 5.0) < 1e-12
    assert abs(g.mean_value() - 3.0) < 1e-12


def test_field_set_get_contains(su2):
    f = CoefficientField(su2, 64)
    tg = grid_points(64)
    vals = np.exp(1j * tg)
    f.set_mode(2, 0, 1, vals)
    assert (2, 0, 1) in f
    assert (2, 1, 0) not in f
    got = f.get(2, 0, 1)
    assert np.max(np.abs(got.values - vals)) < 1e-15
    assert len(f) == 1
    assert f.labels() == [2]
    with pytest.raises(DomainError):
        f.get(4, 0, 0)


def test_field_slot_validation(su2):
    f = CoefficientField(su2, 64)
    with pytest.raises(DomainError):
        f.set_mode(2, 5, 0, np.zeros(64, dtype=complex))   # r out of range
    with pytest.raises(DomainError):
        f.set_mode(2, 0, 0, np.zeros(32, dtype=complex))   # wrong grid


def test_field_mode_mu(su2):
    f = CoefficientField(su2, 64)
    f.set_mode(4, 1, 2, np.zeros(64, dtype=complex))
    assert f.mode_mu((4, 1, 2)) == -1.0       # spin 2: mu = -2,-1,0,1,2


def test_empty_like(su2):
    f = CoefficientField(su2, 128, tol=1e-10)
    f.set_mode(0, 0, 0, np.ones(128, dtype=complex))
    g = f.empty_like()
    assert g.grid_size == 128
    assert len(g) == 0
    assert g.model is f.model


def test_dump_load_roundtrip(tmp_path, su2):
    f = CoefficientField(su2, 32)
    tg = grid_points(32)
    f.set_mode(2, 0, 1, np.exp(1j * tg))
    f.set_mode(0, 0, 0, (1.5 - 0.5j) * np.ones(32))
    path = str(tmp_path / "field.csv")
    f.dump_csv(path)
    g = CoefficientField.load_csv(path)
    assert sorted(g.keys()) == sorted(f.keys())
    for key in f.keys():
        a = f.get(*key).values
        b = g.get(*key).values
        assert np.max(np.abs(a - b)) < 1e-15


def test_load_skips_comment_lines(tmp_path, su2):
    f = CoefficientField(su2, 16)
    f.set_mode(0, 0, 0, np.ones(16, dtype=complex))
    path = str(tmp_path / "field.csv")
    f.dump_csv(path)
    with open(path) as fh:
        content = fh.read()
    with open(path, "w") as fh:
        fh.write("# extra: embedded metadata\n" + content)
    g = CoefficientField.load_csv(path)
    assert (0, 0, 0) in g


def test_load_rejects_incomplete_mode(tmp_path, su2):
    f = CoefficientField(su2, 16)
    f.set_mode(0, 0, 0, np.ones(16, dtype=complex))
    path = str(tmp_path / "field.csv")
    f.dump_csv(path)
    lines = open(path).read().splitlines()
    with open(path, "w") as fh:
        fh.write("\n".join(lines[:-1]) + "\n")   # drop the last sample row
    with pytest.raises(DomainError):
        CoefficientField.load_csv(path)
