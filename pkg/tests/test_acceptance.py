"""Acceptance gate: twelve checks covering the certified-solver contract.

Each test is one criterion at its stated tolerance, reported as a single
pass/fail line under pytest -v.  Suite-wide checks share the session-scoped
200-pair fixtures from conftest.
"""

import numpy as np
import pytest

import zoloto as z


def bracket(mu, nu, tol=1e-8):
    try:
        cert = z.certify_z2(mu, nu, tol)
    except z.NotCertified as exc:
        cert = exc.result
    return cert


def test_two_atom_reference_reproduction():
    mu, nu = z.two_atom_pair(1.0, 2.0)
    w2, _ = z.solve_w2(mu, nu)
    assert abs(w2 ** 2 - 2.0) <= 1e-10

    plan = z.two_atom_plan(1.0, 2.0)
    rep = z.validate_three_plan(plan, mu, nu)
    assert rep.mass_sum_residual <= 1e-12
    assert rep.mu_marginal_residual <= 1e-12
    assert rep.nu_marginal_residual <= 1e-12
    assert rep.martingale_x_residual <= 1e-12
    assert rep.martingale_y_residual <= 1e-12
    assert abs(z.three_plan_cost(plan) - 2.0 / 3.0) <= 1e-12

    cert = bracket(mu, nu)
    assert 0.5 <= cert.lower <= cert.upper <= 2.0 / 3.0 + 1e-8


def test_lower_constant_sharpness_near_equal_atoms():
    for b in (1.1, 1.01, 1.001):
        mu, nu = z.two_atom_pair(1.0, b)
        w2, _ = z.solve_w2(mu, nu)
        cert = bracket(mu, nu)
        lo = cert.lower / w2 ** 2
        hi = cert.upper / w2 ** 2
        assert lo >= 0.25 - 1e-7
        assert hi <= b / (2.0 * (1.0 + b)) + 1e-7
        if b == 1.001:
            assert hi - lo <= 2.6e-4


def test_lower_bound_on_random_suite(certified_suite):
    for row in certified_suite:
        slack = row["cert"].lower - 0.25 * row["w2"] ** 2
        assert slack >= -1e-8, f"pair {row['seed']}: lower bound violated"
        if not z.measures_equal(row["mu"], row["nu"], 1e-7):
            assert slack > 0.0, f"pair {row['seed']}: strictness violated"


def test_upper_bounds_on_random_suite(certified_suite):
    for row in certified_suite:
        s_mu = z.stats(row["mu"])
        s_nu = z.stats(row["nu"])
        rhs_sigma = 0.5 * (s_mu.std_dev + s_nu.std_dev) * row["w2"]
        rhs_var = np.sqrt(0.5 * (s_mu.variance + s_nu.variance)) * row["w2"]
        assert row["cert"].upper <= rhs_sigma + 1e-8, f"pair {row['seed']}"
        assert row["cert"].upper <= rhs_var + 1e-8, f"pair {row['seed']}"


def test_dilation_attains_upper_bound():
    for lam in (1.5, 2.0, 3.0):
        mu, nu = z.symmetric_dilation_pair(lam)
        w2, _ = z.solve_w2(mu, nu)
        cert = bracket(mu, nu)
        mid = 0.5 * (cert.lower + cert.upper)
        rhs = 0.5 * (z.stats(mu).std_dev + z.stats(nu).std_dev) * w2
        assert abs(mid - rhs) <= 1e-6
        assert abs(mid - 0.5 * (lam ** 2 - 1.0)) <= 1e-8
        assert abs(w2 - (lam - 1.0)) <= 1e-8


def comparable_pair(k):
    """Pair with nu dominating mu by construction.

    Every fifth pair is a centred dilation; the rest split each mu atom into
    two symmetric children, which preserves conditional means exactly.
    """
    rng = np.random.default_rng(7000 + k)
    d = k % 3 + 1
    mu = z.random_measure(d, int(rng.integers(2, 6)), 7100 + k)
    if k % 5 == 0:
        return mu, z.dilate(mu, float(rng.uniform(1.1, 2.0)))
    offs = rng.normal(size=(mu.n_atoms, d))
    t = rng.uniform(0.1, 1.0, size=mu.n_atoms)[:, None]
    pos = np.vstack([mu.positions + t * offs, mu.positions - t * offs])
    w = np.concatenate([mu.weights / 2.0, mu.weights / 2.0])
    return mu, z.DiscreteMeasure(pos, w)


def test_convex_order_closed_form_on_generated_pairs():
    for k in range(50):
        mu, nu = comparable_pair(k)
        assert z.check_convex_order(mu, nu)
        cert = bracket(mu, nu)
        mid = 0.5 * (cert.lower + cert.upper)
        target = 0.5 * (z.stats(nu).variance - z.stats(mu).variance)
        assert abs(mid - target) <= 1e-7, f"pair {k}"


def test_certification_gap_on_random_suite(certified_suite):
    closed = sum(1 for row in certified_suite if row["cert"].gap <= 1e-6)
    assert closed >= 0.95 * len(certified_suite)
    for row in certified_suite:
        if not row["certified"]:
            assert row["cert"].gap <= 1e-4, \
                f"pair {row['seed']}: bracket too wide after enrichment"


def test_gradient_identity_at_certified_optimum(certified_suite):
    for row in certified_suite:
        if not row["certified"]:
            continue
        dual = row["cert"].dual
        dev = abs(dual.value - z.magic_formula_value(dual.field,
                                                     row["mu"], row["nu"]))
        assert dev <= 1e-6, f"pair {row['seed']}: deviation {dev:.3e}"


def test_joint_optimality_on_random_suite(certified_suite):
    for row in certified_suite:
        if not row["certified"]:
            continue
        rep = z.verify_optimality_conditions(row["cert"].dual,
                                             row["cert"].primal, 1e-5)
        assert rep.max_z_residual <= 1e-5, f"pair {row['seed']}"
        assert rep.max_abs_constraint <= 1e-5, f"pair {row['seed']}"


def test_ratio_blowup_family():
    for n in (1, 5, 10, 50, 100):
        mu, nu = z.symmetric_dilation_pair(1.0 + 1.0 / n)
        w2, _ = z.solve_w2_1d_monotone(mu, nu)
        ratio = z.z2_convex_order_closed_form(mu, nu) / w2 ** 2
        assert abs(ratio - (2 * n + 1) / 2.0) <= 1e-6
        if n <= 10:
            cert = bracket(mu, nu)
            mid = 0.5 * (cert.lower + cert.upper)
            assert abs(mid - 0.5 * ((1.0 + 1.0 / n) ** 2 - 1.0)) <= 1e-7


def test_discretized_gaussian_convergence():
    errs = []
    for n in (20, 50, 200):
        mu, nu = z.gaussian_pair(1.0, 2.0, n)
        w2, _ = z.solve_w2_1d_monotone(mu, nu)
        z2 = z.z2_convex_order_closed_form(mu, nu)
        errs.append((abs(w2 - 1.0), abs(z2 - 1.5)))
    assert errs[2][0] <= 0.02 and errs[2][1] <= 0.05
    assert errs[0][0] > errs[1][0] > errs[2][0]
    assert errs[0][1] > errs[1][1] > errs[2][1]


def feasible_random_field(P, rng):
    """Random pairwise-feasible field: scale down until every C(p, q) < 0."""
    u = rng.normal(size=P.shape[0])
    G = rng.normal(size=P.shape)
    for _ in range(80):
        field = z.OneField(P, u, G)
        ok, _, worst = z.check_field_admissible(field, 0.0)
        if ok and worst < -1e-15:
            return field
        u = 0.5 * u
        G = 0.5 * G
    raise AssertionError("field shrink did not reach feasibility")


def convolution_plan(mu, nu, rng=None):
    """Valid plan with z = x + y (common barycentre 0), optionally smeared.

    Smearing splits each triple's z into z +- delta v with equal masses,
    which preserves both martingale conditions exactly.
    """
    n, m = mu.n_atoms, nu.n_atoms
    X = np.repeat(mu.positions, m, axis=0)
    Y = np.tile(nu.positions, (n, 1))
    W = np.outer(mu.weights, nu.weights).ravel()
    Zc = X + Y
    if rng is None:
        return z.ThreePlan(X, Y, Zc, W)
    V = rng.normal(size=Zc.shape)
    D = rng.uniform(0.0, 0.5, size=(Zc.shape[0], 1))
    return z.ThreePlan(np.vstack([X, X]), np.vstack([Y, Y]),
                       np.vstack([Zc + D * V, Zc - D * V]),
                       np.concatenate([W / 2.0, W / 2.0]))


def test_weak_duality_randomized():
    checked = 0
    for inst in range(50):
        rng = np.random.default_rng(3000 + inst)
        d = inst % 2 + 1
        mu = z.random_measure(d, int(rng.integers(2, 5)), 31000 + 2 * inst)
        nu = z.random_measure(d, int(rng.integers(2, 5)), 31001 + 2 * inst)
        P, wmu, wnu = z.union_support(mu, nu)
        dw = wnu - wmu
        plans = [convolution_plan(mu, nu), convolution_plan(mu, nu, rng)]
        costs = []
        for plan in plans:
            assert z.validate_three_plan(plan, mu, nu).valid
            costs.append(z.three_plan_cost(plan))
        for _ in range(10):
            field = feasible_random_field(P, rng)
            obj = float(dw @ field.values)
            for cost in costs:
                assert obj <= cost + 1e-10
                checked += 1
    assert checked == 1000
