"""Exact W2 solver: closed forms, invariances, and the 1D monotone oracle."""

import numpy as np
import pytest

import zoloto as z
from zoloto.errors import DimensionMismatch


def translate(m, t):
    return z.DiscreteMeasure(m.positions + np.asarray(t, float), m.weights)


@pytest.mark.parametrize("a,b", [(1.0, 2.0), (0.5, 1.7), (1.0, 1.001)])
def test_two_atom_closed_form(a, b):
    # monotone matching moves both atoms by (b - a), so W2^2 = 2a(b - a)
    # after weighting; verified against the 1D monotone oracle below
    mu, nu = z.two_atom_pair(a, b)
    w2, plan = z.solve_w2(mu, nu)
    assert w2 ** 2 == pytest.approx(2 * a * (b - a), abs=1e-12)
    assert np.abs(plan.row_sums() - mu.weights).max() <= 1e-12
    assert np.abs(plan.col_sums() - nu.weights).max() <= 1e-12


@pytest.mark.parametrize("seed", range(20))
def test_monotone_coupling_matches_lp_in_1d(seed):
    rng = np.random.default_rng(seed)
    mu = z.random_measure(1, int(rng.integers(2, 7)), 300 + 2 * seed)
    nu = z.random_measure(1, int(rng.integers(2, 7)), 301 + 2 * seed)
    w_lp, _ = z.solve_w2(mu, nu)
    w_mono, coupling = z.solve_w2_1d_monotone(mu, nu)
    assert w_mono == pytest.approx(w_lp, abs=1e-10)
    assert np.abs(coupling.row_sums() - mu.weights).max() <= 1e-12
    assert np.abs(coupling.col_sums() - nu.weights).max() <= 1e-12


def test_gaussian_1d_closed_form_and_discretization():
    assert z.w2_gaussian_1d(1.0, 2.0) == 1.0
    assert z.w2_gaussian_1d(0.0, 3.0) == 3.0
    mu, nu = z.gaussian_pair(1.0, 2.0, 100)
    w2, _ = z.solve_w2_1d_monotone(mu, nu)
    assert w2 == pytest.approx(1.0, abs=0.02)


def test_identical_measures_give_zero():
    m = z.random_measure(2, 5, 11)
    w2, _ = z.solve_w2(m, m)
    assert w2 <= 1e-10


def test_symmetry_and_invariances():
    mu = z.random_measure(2, 4, 21)
    nu = z.random_measure(2, 6, 22)
    w, _ = z.solve_w2(mu, nu)
    w_rev, _ = z.solve_w2(nu, mu)
    assert w_rev == pytest.approx(w, abs=1e-12)
    t = [0.3, -0.7]
    wt, _ = z.solve_w2(translate(mu, t), translate(nu, t))
    assert wt == pytest.approx(w, abs=1e-10)
    ws, _ = z.solve_w2(z.dilate(mu, 2.5), z.dilate(nu, 2.5))
    assert ws == pytest.approx(2.5 * w, rel=1e-10)


@pytest.mark.parametrize("seed", range(10))
def test_triangle_inequality(seed):
    mu = z.random_measure(2, 4, 400 + 3 * seed)
    nu = z.random_measure(2, 4, 401 + 3 * seed)
    rho = z.random_measure(2, 4, 402 + 3 * seed)
    w_mn, _ = z.solve_w2(mu, nu)
    w_mr, _ = z.solve_w2(mu, rho)
    w_rn, _ = z.solve_w2(rho, nu)
    assert w_mn <= w_mr + w_rn + 1e-10


def test_coupling_cost_consistency():
    mu = z.random_measure(3, 5, 31)
    nu = z.random_measure(3, 5, 32)
    w2, plan = z.solve_w2(mu, nu)
    assert plan.cost_squared() == pytest.approx(w2 ** 2, abs=1e-12)


def test_dimension_mismatch_raises():
    with pytest.raises(DimensionMismatch):
        z.solve_w2(z.dirac([0.0]), z.dirac([0.0, 0.0]))
    with pytest.raises(DimensionMismatch):
        z.solve_w2_1d_monotone(z.dirac([0.0, 0.0]), z.dirac([0.0, 0.0]))
