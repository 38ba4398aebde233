"""Shared fixtures: the 200-pair random suite and its certification results.

Suite convention: pair s has dimension s % 3 + 1, between 2 and 8 atoms per
side (drawn from generator seed s), and centred measures seeded 10000 + 2s
and 10001 + 2s, so every pair shares the barycentre 0.  Certification runs
once per session at tol 1e-6 and is reused by every suite-wide test.
"""

import numpy as np
import pytest

import zoloto as z


def suite_pair(s):
    d = s % 3 + 1
    rng = np.random.default_rng(s)
    n1 = int(rng.integers(2, 9))
    n2 = int(rng.integers(2, 9))
    mu = z.random_measure(d, n1, 10000 + 2 * s)
    nu = z.random_measure(d, n2, 10001 + 2 * s)
    return mu, nu


@pytest.fixture(scope="session")
def random_suite():
    return [(s, *suite_pair(s)) for s in range(200)]


@pytest.fixture(scope="session")
def certified_suite(random_suite):
    rows = []
    for s, mu, nu in random_suite:
        w2, _ = z.solve_w2(mu, nu)
        try:
            cert = z.certify_z2(mu, nu, 1e-6)
            certified = True
        except z.NotCertified as exc:
            cert = exc.result
            certified = False
        rows.append({"seed": s, "mu": mu, "nu": nu, "w2": w2,
                     "cert": cert, "certified": certified})
    return rows
