"""Convex order, 3-plans, certification bracket, and joint optimality."""

import numpy as np
import pytest

import zoloto as z
from zoloto.errors import (DimensionMismatch, InfeasibleSupport,
                           NotInConvexOrder)


def test_convex_order_detection():
    mu, nu = z.symmetric_dilation_pair(2.0)
    assert z.check_convex_order(mu, nu)
    assert not z.check_convex_order(nu, mu)
    assert z.check_convex_order(mu, mu)
    # the two-atom family is incomparable in both directions
    a, b = z.two_atom_pair(1.0, 2.0)
    assert not z.check_convex_order(a, b)
    assert not z.check_convex_order(b, a)


def test_martingale_coupling_residuals():
    mu = z.dirac([0.0, 0.0])
    nu = z.from_atoms([[-1.0, 0.0], [1.0, 0.0]], [0.5, 0.5])
    coupling = z.martingale_coupling(mu, nu)
    assert np.abs(coupling.row_sums() - mu.weights).max() <= 1e-10
    assert np.abs(coupling.col_sums() - nu.weights).max() <= 1e-10
    assert np.abs(coupling.barycentre_residuals()).max() <= 1e-10
    with pytest.raises(NotInConvexOrder):
        z.martingale_coupling(nu, mu)


def test_convex_order_closed_form():
    mu, nu = z.symmetric_dilation_pair(3.0)
    assert z.z2_convex_order_closed_form(mu, nu) == pytest.approx(4.0,
                                                                  abs=1e-12)
    with pytest.raises(NotInConvexOrder):
        z.z2_convex_order_closed_form(nu, mu)


def test_three_plan_validation_and_cost():
    mu, nu = z.two_atom_pair(1.0, 2.0)
    plan = z.two_atom_plan(1.0, 2.0)
    report = z.validate_three_plan(plan, mu, nu)
    assert report.valid
    assert z.three_plan_cost(plan) == pytest.approx(2.0 / 3.0, abs=1e-15)
    # moving a z coordinate breaks the martingale rows but nothing else
    broken = z.ThreePlan(plan.xs, plan.ys, plan.zs + 0.1, plan.masses)
    bad = z.validate_three_plan(broken, mu, nu)
    assert not bad.valid
    assert bad.martingale_x_residual > 1e-3


def test_three_plan_json_round_trip():
    plan = z.two_atom_plan(1.0, 2.0)
    back = z.ThreePlan.from_json_dict(plan.to_json_dict())
    assert np.allclose(back.xs, plan.xs) and np.allclose(back.masses,
                                                         plan.masses)
    assert back.n_triples == plan.n_triples


def test_three_plan_rejects_negative_mass():
    with pytest.raises(ValueError):
        z.ThreePlan(np.zeros((1, 1)), np.zeros((1, 1)), np.zeros((1, 1)),
                    np.array([-0.5]))
    with pytest.raises(DimensionMismatch):
        z.ThreePlan(np.zeros((2, 1)), np.zeros((2, 1)), np.zeros((1, 1)),
                    np.array([0.5, 0.5]))


def test_third_marginal_merges():
    plan = z.ThreePlan.from_triples([
        ([0.0], [1.0], [0.5], 0.5),
        ([0.0], [-1.0], [0.5], 0.5),
    ])
    pts, w = plan.third_marginal()
    assert pts.shape[0] == 1 and w[0] == pytest.approx(1.0)


def test_restricted_variance_lp_on_dominating_support():
    mu, nu = z.symmetric_dilation_pair(2.0)
    v, pim, pin = z.solve_variance_lp(mu, nu, nu.positions)
    # nu itself is the cheapest dominator of both when it dominates mu
    assert v == pytest.approx(z.stats(nu).variance, abs=1e-10)
    assert np.abs(pim.mass.sum() - 1.0) <= 1e-9
    assert np.abs(pin.mass.sum() - 1.0) <= 1e-9


def test_restricted_variance_lp_infeasible_support():
    mu, nu = z.two_atom_pair(1.0, 2.0)
    # a single support point can only carry a Dirac, which dominates nothing
    with pytest.raises(InfeasibleSupport):
        z.solve_variance_lp(mu, nu, np.array([[0.0]]))


def test_certify_bracket_orders_and_closes():
    mu, nu = z.two_atom_pair(1.0, 1.5)
    cert = z.certify_z2(mu, nu, 1e-8)
    assert cert.lower <= cert.upper + 1e-15
    assert cert.gap <= 1e-8
    assert z.validate_three_plan(cert.primal, mu, nu).valid
    ok, _, _ = z.check_field_admissible(cert.dual.field, 1e-9)
    assert ok


def test_certify_convex_order_pair_exact():
    mu = z.dirac([0.0])
    nu = z.from_atoms([[-1.0], [1.0]], [0.5, 0.5])
    cert = z.certify_z2(mu, nu, 1e-8)
    assert cert.lower == pytest.approx(0.5, abs=1e-10)
    assert cert.upper == pytest.approx(0.5, abs=1e-10)
    assert z.validate_three_plan(cert.primal, mu, nu).valid


def test_certify_identical_measures():
    m = z.random_measure(2, 4, 77)
    cert = z.certify_z2(m, m, 1e-8)
    assert abs(cert.lower) <= 1e-10 and cert.upper <= 1e-10


def test_joint_optimality_report():
    mu, nu = z.two_atom_pair(1.0, 2.0)
    cert = z.certify_z2(mu, nu, 1e-8)
    report = z.verify_optimality_conditions(cert.dual, cert.primal, 1e-6)
    assert report.ok
    assert report.max_z_residual <= 1e-6
    assert report.max_abs_constraint <= 1e-6


def test_certified_value_symmetric():
    for seed in (10, 11):
        mu = z.random_measure(1, 4, 800 + seed)
        nu = z.random_measure(1, 5, 850 + seed)
        a = z.certify_z2(mu, nu, 1e-7)
        b = z.certify_z2(nu, mu, 1e-7)
        mid_a = 0.5 * (a.lower + a.upper)
        mid_b = 0.5 * (b.lower + b.upper)
        assert mid_b == pytest.approx(mid_a, abs=1e-6)


def test_build_candidate_support_contains_working_set():
    mu, nu = z.two_atom_pair(1.0, 2.0)
    dual = z.solve_dual_z2(mu, nu, 1e-8)
    Z0 = z.build_candidate_support(dual, mu, nu)
    P = dual.field.points
    D = np.linalg.norm(Z0[:, None, :] - P[None, :, :], axis=2)
    assert np.all(D.min(axis=0) <= 1e-12)
