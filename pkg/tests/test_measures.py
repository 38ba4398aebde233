"""Measure construction, statistics, transforms, and JSON round trips."""

import json

import numpy as np
import pytest

import zoloto as z
from zoloto.errors import DimensionMismatch, ParseError

# variance of the n-atom quantile discretization of N(0, 1); frozen from an
# independent run of sum w (sigma PhiInv((k - 1/2)/n))^2
QUANTILE_VARIANCE = {20: 0.9385568635, 50: 0.9749104067, 200: 0.9935962236}


def test_duplicate_atoms_merge():
    m = z.from_atoms([[0.0], [0.0], [1.0]], [0.25, 0.25, 0.5])
    assert m.n_atoms == 2
    i = int(np.argmin(np.abs(m.positions[:, 0])))
    assert m.weights[i] == pytest.approx(0.5, abs=1e-15)


def test_rejects_bad_weights():
    with pytest.raises(ParseError):
        z.from_atoms([[0.0], [1.0]], [0.5, 0.6])
    with pytest.raises(ParseError):
        z.from_atoms([[0.0], [1.0]], [1.1, -0.1])
    with pytest.raises(ParseError):
        z.from_atoms([[0.0], [1.0]], [0.5, np.nan])
    with pytest.raises(ParseError):
        z.from_atoms([[np.inf], [1.0]], [0.5, 0.5])


def test_stats_on_hand_pair():
    m = z.from_atoms([[-1.0, 0.0], [3.0, 0.0]], [0.75, 0.25])
    s = z.stats(m)
    assert s.barycentre == pytest.approx([0.0, 0.0], abs=1e-15)
    assert s.variance == pytest.approx(3.0, abs=1e-12)
    assert s.std_dev == pytest.approx(np.sqrt(3.0), abs=1e-12)


def test_center_and_dilate():
    m = z.from_atoms([[1.0], [3.0]], [0.5, 0.5])
    c = z.center(m)
    assert np.abs(z.stats(c).barycentre).max() <= 1e-15
    d = z.dilate(c, 2.0)
    assert z.stats(d).variance == pytest.approx(4.0 * z.stats(c).variance,
                                                rel=1e-14)
    with pytest.raises(ParseError):
        z.dilate(m, 0.0)


def test_dirac():
    m = z.dirac([1.0, 2.0])
    assert m.n_atoms == 1
    assert z.stats(m).variance == 0.0


@pytest.mark.parametrize("n", [20, 50, 200])
def test_gaussian_quantile_discretization(n):
    m = z.gaussian_quantile_discretize(1.0, n)
    s = z.stats(m)
    assert np.abs(s.barycentre).max() <= 1e-15
    assert s.variance == pytest.approx(QUANTILE_VARIANCE[n], abs=1e-9)
    x = np.sort(m.positions[:, 0])
    assert np.max(np.abs(x + x[::-1])) == 0.0
    m2 = z.gaussian_quantile_discretize(2.0, n)
    assert z.stats(m2).variance == pytest.approx(4.0 * s.variance, rel=1e-13)


def test_random_measure_deterministic_and_centred():
    a = z.random_measure(2, 5, 42)
    b = z.random_measure(2, 5, 42)
    assert a == b
    assert np.abs(z.stats(a).barycentre).max() <= 1e-14
    assert z.random_measure(2, 5, 43) != a


def test_measures_equal_matching():
    a = z.from_atoms([[0.0], [1.0]], [0.5, 0.5])
    b = z.from_atoms([[1.0], [0.0]], [0.5, 0.5])
    assert z.measures_equal(a, b, 1e-9)
    c = z.from_atoms([[0.0], [1.0 + 1e-6]], [0.5, 0.5])
    assert not z.measures_equal(a, c, 1e-9)
    assert z.measures_equal(a, c, 1e-4)
    d = z.from_atoms([[0.0], [1.0]], [0.4, 0.6])
    assert not z.measures_equal(a, d, 1e-9)
    with pytest.raises(DimensionMismatch):
        z.measures_equal(a, z.dirac([0.0, 0.0]), 1e-9)


def test_json_round_trip(tmp_path):
    m = z.random_measure(3, 4, 7)
    path = tmp_path / "m.json"
    z.save_measure(m, path)
    back = z.load_measure(path)
    assert z.measures_equal(m, back, 1e-12)


def test_json_renormalizes_within_budget():
    data = {"dim": 1, "atoms": [{"x": [0.0], "w": 0.5 + 3e-10},
                                {"x": [1.0], "w": 0.5}]}
    m = z.from_json_dict(data)
    assert m.weights.sum() == pytest.approx(1.0, abs=1e-15)


def test_json_rejects_malformed():
    with pytest.raises(ParseError):
        z.from_json_dict({"dim": 2, "atoms": [{"x": [0.0], "w": 1.0}]})
    with pytest.raises(ParseError):
        z.from_json_dict({"atoms": []})
    with pytest.raises(ParseError):
        z.from_json_dict({"dim": 1, "atoms": [{"x": [0.0], "w": 0.9}]})
    with pytest.raises(ParseError):
        z.from_json_dict({"dim": 1, "atoms": [{"x": [0.0], "w": -1.0},
                                              {"x": [1.0], "w": 2.0}]})


def test_load_rejects_bad_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ParseError):
        z.load_measure(path)
    with pytest.raises(ParseError):
        z.load_measure(tmp_path / "missing.json")


def test_positions_are_frozen():
    m = z.from_atoms([[0.0], [1.0]], [0.5, 0.5])
    with pytest.raises(ValueError):
        m.positions[0, 0] = 5.0
