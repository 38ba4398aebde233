"""Bound chain reports, equality classification, ratio scans, sup estimate."""

import numpy as np
import pytest

import zoloto as z
from zoloto.inequalities import SCAN_COLUMNS


def test_two_atom_pair_shape():
    mu, nu = z.two_atom_pair(1.0, 2.0)
    assert np.abs(z.stats(mu).barycentre).max() <= 1e-15
    assert np.abs(z.stats(nu).barycentre).max() <= 1e-15
    assert z.stats(mu).variance == pytest.approx(2.0, abs=1e-12)
    assert z.stats(nu).variance == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(ValueError):
        z.two_atom_pair(2.0, 1.0)


def test_check_bounds_chain_on_random_pairs():
    for seed in (0, 1, 2, 3, 4):
        mu = z.random_measure(2, 4, 500 + 2 * seed)
        nu = z.random_measure(2, 5, 501 + 2 * seed)
        rep = z.check_bounds(mu, nu)
        assert rep.z2_lower >= rep.lower_bound_lhs - 1e-8
        assert rep.z2_upper <= rep.upper_bound_rhs_sigma + 1e-8
        assert rep.upper_bound_rhs_sigma <= rep.upper_bound_rhs_var + 1e-12
        assert rep.gap >= -1e-15


def test_lower_equality_classification():
    m = z.random_measure(1, 3, 123)
    rep = z.check_bounds(m, m)
    assert rep.eq_lower
    assert z.classify_lower_equality(m, m, rep)
    mu, nu = z.two_atom_pair(1.0, 2.0)
    rep2 = z.check_bounds(mu, nu)
    assert not z.classify_lower_equality(mu, nu, rep2)


def test_upper_equality_classification():
    mu, nu = z.symmetric_dilation_pair(2.0)
    is_dil, lam = z.classify_upper_equality(mu, nu)
    assert is_dil and lam == pytest.approx(2.0, abs=1e-12)
    rep = z.check_bounds(mu, nu)
    assert rep.eq_upper_sigma
    a, b = z.two_atom_pair(1.0, 2.0)
    is_dil2, _ = z.classify_upper_equality(a, b)
    assert not is_dil2
    d = z.dirac([0.0])
    assert z.classify_upper_equality(d, d) == (True, None)
    assert z.classify_upper_equality(d, nu)[0] is False


def test_scan_two_atom_ratio_bounded():
    spec = z.FamilySpec("two_atom", {"a": 1.0, "b_from": 1.05, "b_to": 2.0})
    rows = z.scan_ratio(spec, 6, 0)
    assert len(rows) == 6
    for row in rows:
        b = row["param2"]
        assert 0.25 - 1e-7 <= row["ratio_sq"] <= b / (2 * (1 + b)) + 1e-7
        assert row["gap"] <= 1e-6


def test_scan_dilation_saturates_upper():
    spec = z.FamilySpec("dilation", {"lam_from": 1.2, "lam_to": 3.0})
    rows = z.scan_ratio(spec, 5, 0)
    assert all(row["eq_upper"] for row in rows)


def test_scan_deterministic_csv():
    spec = z.FamilySpec("random", {"dim": 2, "atoms": 4})
    a = z.scan_rows_to_csv(z.scan_ratio(spec, 4, 7))
    b = z.scan_rows_to_csv(z.scan_ratio(spec, 4, 7))
    assert a == b
    assert a.splitlines()[0].split(",") == SCAN_COLUMNS


def test_family_spec_rejects_unknown_kind():
    with pytest.raises(ValueError):
        z.FamilySpec("unknown")


def test_sup_ratio_estimate_approaches_cap_mean():
    best = z.estimate_h(1.0, 1.0, 6, 0)
    # includes a dilation draw sitting on the caps, where the ratio equals
    # (sigma_mu + sigma_nu)/2; random draws never exceed the supremum
    assert 0.98 <= best <= 1.0 + 1e-6
    with pytest.raises(ValueError):
        z.estimate_h(-1.0, 1.0, 3, 0)
