"""The sharp bound chain W2^2/4 <= Z2 <= (sigma_mu + sigma_nu) W2 / 2.

Checks the chain on random pairs, visits both equality regimes, scans
the two-atom family down to the 1/4 limit, and shows that no reverse
inequality Z2 <= c W2^2 can hold.
"""

import numpy as np

import zoloto as z

# the chain holds on every common-barycentre pair
print("random pairs, certified bound chain:")
for seed in range(3):
    mu = z.random_measure(2, 5, 100 + 2 * seed)
    nu = z.random_measure(2, 5, 101 + 2 * seed)
    rep = z.check_bounds(mu, nu)
    print(f"  w2^2/4 = {rep.lower_bound_lhs:.6f} <= z2 = {rep.z2:.6f}"
          f" <= {rep.upper_bound_rhs_sigma:.6f}"
          f" <= {rep.upper_bound_rhs_var:.6f}")

# upper equality holds exactly when one measure is a centred dilation
# of the other
mu_d, nu_d = z.symmetric_dilation_pair(2.0)
rep = z.check_bounds(mu_d, nu_d)
is_dil, lam = z.classify_upper_equality(mu_d, nu_d)
print(f"\ndilation pair: upper bound tight = {rep.eq_upper_sigma}, "
      f"detected dilation factor = {lam}")

# lower equality only at mu = nu; slack stays strictly positive otherwise
m = z.random_measure(1, 4, 42)
rep_same = z.check_bounds(m, m)
print(f"identical measures: lower bound tight = {rep_same.eq_lower}")

# the constant 1/4 is sharp: two-atom pairs with nearly equal atoms push
# the ratio Z2/W2^2 down to it
print("\ntwo-atom family, ratio Z2/W2^2 against the envelope b/(2(1+b)):")
for b in (2.0, 1.5, 1.1, 1.01, 1.001):
    mu_b, nu_b = z.two_atom_pair(1.0, b)
    w2, _ = z.solve_w2(mu_b, nu_b)
    cert = z.certify_z2(mu_b, nu_b, 1e-9)
    ratio = 0.5 * (cert.lower + cert.upper) / w2 ** 2
    print(f"  b = {b:6.3f}: ratio = {ratio:.9f}"
          f"   envelope = {b / (2 * (1 + b)):.9f}")

# ratio scans emit plot-ready CSV
spec = z.FamilySpec("two_atom", {"a": 1.0, "b_from": 1.05, "b_to": 2.0})
rows = z.scan_ratio(spec, n=5, seed=0)
print("\nscan CSV head:")
print("\n".join(z.scan_rows_to_csv(rows).splitlines()[:3]))

# no reverse inequality: Z2/W2^2 blows up along shrinking dilations
print("\nshrinking dilations lam = 1 + 1/n:")
for n in (1, 10, 100):
    mu_n, nu_n = z.symmetric_dilation_pair(1.0 + 1.0 / n)
    w2, _ = z.solve_w2_1d_monotone(mu_n, nu_n)
    z2 = z.z2_convex_order_closed_form(mu_n, nu_n)
    print(f"  n = {n:3d}: Z2/W2^2 = {z2 / w2 ** 2:10.3f}"
          f"   ((2n+1)/2 = {(2 * n + 1) / 2})")

# empirical supremum of Z2/W2 under standard-deviation caps approaches
# the cap mean (a + b)/2, attained by dilation pairs on the caps
best = z.estimate_h(1.0, 2.0, budget=10, seed=0)
print(f"\nsup Z2/W2 estimate under caps (1, 2): {best:.6f}"
      f"  (supremum {(1.0 + 2.0) / 2})")
