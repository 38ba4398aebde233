"""Sharp bounds relating Z2 and W2, equality classification, ratio scans.

For common-barycentre measures the certified distances satisfy

    W2^2/4  <=  Z2  <=  (sigma_mu + sigma_nu) W2 / 2  <=  sqrt((var_mu + var_nu)/2) W2.

The lower constant 1/4 is approached by two-atom pairs with equal variances
and nearly equal atoms; the upper bound is attained exactly when one measure
is a centred dilation of the other.  This module checks the chain on
certified brackets, classifies the equality cases, and scans parametric
families for the ratio landscape.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import NotCertified
from .measures import (DiscreteMeasure, center, dilate, dirac, from_atoms,
                       gaussian_quantile_discretize, measures_equal,
                       random_measure, stats)
from .transport_plans import ThreePlan, certify_z2
from .wasserstein import solve_w2
from .zolotarev import check_barycentres

EQUALITY_TOL = 1e-6

SCAN_COLUMNS = ["family", "param1", "param2", "w2", "z2_lower", "z2_upper",
                "gap", "ratio_sq", "ratio_lin", "sigma_mu", "sigma_nu",
                "bound_sigma", "bound_var", "eq_lower", "eq_upper"]


@dataclass(frozen=True)
class BoundReport:
    """Certified bound chain for one pair: values, slacks, equality flags."""

    w2: float
    z2: float
    z2_lower: float
    z2_upper: float
    gap: float
    lower_bound_lhs: float
    upper_bound_rhs_sigma: float
    upper_bound_rhs_var: float
    slack_lower: float
    slack_upper_sigma: float
    slack_upper_var: float
    eq_lower: bool
    eq_upper_sigma: bool
    eq_upper_var: bool
    sigma_mu: float
    sigma_nu: float

    def to_json_dict(self) -> dict:
        return {
            "w2": self.w2, "z2": self.z2,
            "z2_lower": self.z2_lower, "z2_upper": self.z2_upper,
            "gap": self.gap,
            "lower_bound_lhs": self.lower_bound_lhs,
            "upper_bound_rhs_sigma": self.upper_bound_rhs_sigma,
            "upper_bound_rhs_var": self.upper_bound_rhs_var,
            "slack_lower": self.slack_lower,
            "slack_upper_sigma": self.slack_upper_sigma,
            "slack_upper_var": self.slack_upper_var,
            "eq_lower": self.eq_lower,
            "eq_upper_sigma": self.eq_upper_sigma,
            "eq_upper_var": self.eq_upper_var,
            "sigma_mu": self.sigma_mu, "sigma_nu": self.sigma_nu,
        }


@dataclass(frozen=True)
class FamilySpec:
    """A parametric family of measure pairs for ratio scans.

    kinds and their params (with defaults):
      two_atom:    asymmetric pairs; a (1.0), b_from (1.001), b_to (2.0)
      gaussian_1d: quantile-discretized Gaussian pairs; sigma1 (1.0),
                   sigma_from (1.1), sigma_to (3.0), n_atoms (50)
      dilation:    symmetric two-atom base; lam_from (1.1), lam_to (3.0)
      random:      seeded common-barycentre pairs; dim (2), atoms (5)
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        kinds = ("two_atom", "gaussian_1d", "dilation", "random")
        if self.kind not in kinds:
            raise ValueError(f"unknown family {self.kind!r}; expected {kinds}")


def two_atom_pair(a: float, b: float):
    """Two-atom pair with common barycentre 0 and equal variances ab.

    mu puts mass b/(a+b) at -a and a/(a+b) at b; nu mirrors it with atoms
    -b and a.  As b decreases to a the ratio Z2/W2^2 approaches 1/4, making
    this family the sharpness witness for the lower bound.
    """
    if not 0 < a < b:
        raise ValueError("requires 0 < a < b")
    s = a + b
    mu = from_atoms([[-a], [b]], [b / s, a / s])
    nu = from_atoms([[-b], [a]], [a / s, b / s])
    return mu, nu


def two_atom_plan(a: float, b: float) -> ThreePlan:
    """Explicit feasible 3-plan for two_atom_pair(a, b) with cost ab(b-a)/(a+b).

    Three triples: (-a,-b,-b), (-a,a,0), (b,a,b) with masses a, b-a, a over
    a+b; both martingale conditions hold exactly.
    """
    s = a + b
    return ThreePlan.from_triples([
        ([-a], [-b], [-b], a / s),
        ([-a], [a], [0.0], (b - a) / s),
        ([b], [a], [b], a / s),
    ])


def symmetric_dilation_pair(lam: float):
    """mu = (d_-1 + d_1)/2 and its centred dilation nu = lam * mu."""
    mu = from_atoms([[-1.0], [1.0]], [0.5, 0.5])
    return mu, dilate(mu, lam)


def gaussian_pair(sigma1: float, sigma2: float, n: int):
    """Quantile discretizations of centred Gaussians N(0, s1^2), N(0, s2^2)."""
    return (gaussian_quantile_discretize(sigma1, n),
            gaussian_quantile_discretize(sigma2, n))


def _certified_bracket(mu, nu, tol=1e-8):
    """(lower, upper, gap), falling back to the best bracket when uncertified."""
    try:
        cert = certify_z2(mu, nu, tol)
    except NotCertified as exc:
        cert = exc.result
    return cert.lower, cert.upper, cert.gap


def _bound_report(w2, lo, up, s_mu, s_nu, tol=EQUALITY_TOL) -> BoundReport:
    z2 = 0.5 * (lo + up)
    lhs = 0.25 * w2 * w2
    rhs_sigma = 0.5 * (s_mu.std_dev + s_nu.std_dev) * w2
    rhs_var = np.sqrt(0.5 * (s_mu.variance + s_nu.variance)) * w2
    slack_lower = z2 - lhs
    slack_sigma = rhs_sigma - z2
    slack_var = rhs_var - z2
    scale = tol * max(1.0, w2 * w2)
    return BoundReport(
        w2=float(w2), z2=float(z2), z2_lower=float(lo), z2_upper=float(up),
        gap=float(up - lo),
        lower_bound_lhs=float(lhs),
        upper_bound_rhs_sigma=float(rhs_sigma),
        upper_bound_rhs_var=float(rhs_var),
        slack_lower=float(slack_lower),
        slack_upper_sigma=float(slack_sigma),
        slack_upper_var=float(slack_var),
        eq_lower=bool(abs(slack_lower) <= scale),
        eq_upper_sigma=bool(abs(slack_sigma) <= scale),
        eq_upper_var=bool(abs(slack_var) <= scale),
        sigma_mu=float(s_mu.std_dev), sigma_nu=float(s_nu.std_dev))


def check_bounds(mu: DiscreteMeasure, nu: DiscreteMeasure,
                 tol: float = EQUALITY_TOL) -> BoundReport:
    """Certify both distances and fill the bound chain with slacks and flags.

    Equality flags compare |slack| against tol scaled by max(1, w2^2) so
    detection is dilation-invariant.
    """
    check_barycentres(mu, nu)
    w2, _ = solve_w2(mu, nu)
    lo, up, _ = _certified_bracket(mu, nu)
    return _bound_report(w2, lo, up, stats(mu), stats(nu), tol)


def classify_lower_equality(mu: DiscreteMeasure, nu: DiscreteMeasure,
                            report: BoundReport, tol: float = 1e-7) -> bool:
    """Lower-bound equality holds iff the measures coincide."""
    equal = measures_equal(mu, nu, tol)
    # a flagged equality with distinct measures would contradict strictness
    assert not (report.eq_lower and not measures_equal(mu, nu, 10 * tol)), \
        "lower-bound equality flagged for distinct measures"
    return equal


def classify_upper_equality(mu: DiscreteMeasure, nu: DiscreteMeasure,
                            tol: float = 1e-7):
    """(is_dilation, lam): nu coincides with the centred dilation lam * mu.

    Point-mass edge: when sigma_mu = 0 the pair counts as a dilation only
    when nu is the same point mass (lam is then undefined and None is
    returned in its place).
    """
    check_barycentres(mu, nu)
    mu_c = center(mu)
    nu_c = center(nu)
    s_mu = stats(mu_c).std_dev
    s_nu = stats(nu_c).std_dev
    if s_mu <= 1e-15 or s_nu <= 1e-15:
        if s_mu <= 1e-15 and s_nu <= 1e-15:
            return True, None
        return False, None
    lam = s_nu / s_mu
    if measures_equal(dilate(mu_c, lam), nu_c, tol):
        return True, float(lam)
    return False, None


def _scan_pairs(family: FamilySpec, n: int, seed: int):
    """Yield (param1, param2, mu, nu) rows for the requested family."""
    p = family.params
    if family.kind == "two_atom":
        a = float(p.get("a", 1.0))
        grid = np.linspace(float(p.get("b_from", 1.001)),
                           float(p.get("b_to", 2.0)), n)
        for b in grid:
            mu, nu = two_atom_pair(a, float(b))
            yield a, float(b), mu, nu
    elif family.kind == "gaussian_1d":
        s1 = float(p.get("sigma1", 1.0))
        n_atoms = int(p.get("n_atoms", 50))
        grid = np.linspace(float(p.get("sigma_from", 1.1)),
                           float(p.get("sigma_to", 3.0)), n)
        for s2 in grid:
            mu, nu = gaussian_pair(s1, float(s2), n_atoms)
            yield s1, float(s2), mu, nu
    elif family.kind == "dilation":
        grid = np.linspace(float(p.get("lam_from", 1.1)),
                           float(p.get("lam_to", 3.0)), n)
        for lam in grid:
            mu, nu = symmetric_dilation_pair(float(lam))
            yield float(lam), 0.0, mu, nu
    else:
        dim = int(p.get("dim", 2))
        atoms = int(p.get("atoms", 5))
        for i in range(n):
            mu = random_measure(dim, atoms, seed + 2 * i)
            nu = random_measure(dim, atoms, seed + 2 * i + 1)
            yield float(dim), float(seed + 2 * i), mu, nu


def scan_ratio(family: FamilySpec, n: int, seed: int) -> list:
    """Certified ratio table over a parametric family; deterministic per seed.

    Each row is a dict matching SCAN_COLUMNS: certified Z2 bracket, exact W2,
    both ratios (midpoint-based), standard deviations, upper-bound values,
    and the equality flags of the bound chain.
    """
    rows = []
    for p1, p2, mu, nu in _scan_pairs(family, n, seed):
        w2, _ = solve_w2(mu, nu)
        lo, up, gap = _certified_bracket(mu, nu)
        rep = _bound_report(w2, lo, up, stats(mu), stats(nu))
        mid = rep.z2
        rows.append({
            "family": family.kind, "param1": p1, "param2": p2,
            "w2": w2, "z2_lower": lo, "z2_upper": up, "gap": gap,
            "ratio_sq": mid / w2 ** 2 if w2 > 0 else float("nan"),
            "ratio_lin": mid / w2 if w2 > 0 else float("nan"),
            "sigma_mu": rep.sigma_mu, "sigma_nu": rep.sigma_nu,
            "bound_sigma": rep.upper_bound_rhs_sigma,
            "bound_var": rep.upper_bound_rhs_var,
            "eq_lower": rep.eq_lower, "eq_upper": rep.eq_upper_sigma,
        })
    return rows


def scan_rows_to_csv(rows: list) -> str:
    """Render scan rows as deterministic CSV (header, UTF-8, '.' decimals)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCAN_COLUMNS)
    for row in rows:
        out = []
        for col in SCAN_COLUMNS:
            v = row[col]
            if isinstance(v, bool):
                out.append("true" if v else "false")
            elif isinstance(v, float):
                out.append(repr(v))
            else:
                out.append(str(v))
        writer.writerow(out)
    return buf.getvalue()


def _scaled_to(measure: DiscreteMeasure, sigma: float) -> DiscreteMeasure:
    """Centred copy rescaled to standard deviation sigma exactly."""
    c = center(measure)
    s = stats(c).std_dev
    if sigma <= 0.0 or s <= 1e-15:
        return dirac(np.zeros(measure.dim))
    return dilate(c, sigma / s)


def estimate_h(a: float, b: float, budget: int, seed: int) -> float:
    """Empirical lower estimate of sup Z2/W2 over pairs with sigmas below (a, b).

    Samples `budget` random centred pairs rescaled into the caps (every fifth
    draw is a dilation pair sitting exactly on the caps, where the ratio
    reaches (a + b)/2).  Returns the best certified midpoint ratio observed;
    the true supremum equals (a + b)/2 and is approached, never exceeded
    beyond the certification gap.
    """
    if a < 0 or b < 0:
        raise ValueError("caps must be nonnegative")
    rng = np.random.default_rng(seed)
    best = 0.0
    base = from_atoms([[-1.0], [1.0]], [0.5, 0.5])
    for t in range(budget):
        if t % 5 == 0:
            if a == 0.0 and b == 0.0:
                continue
            s_mu = a
            s_nu = b if abs(a - b) > 1e-12 else b / 1.001
            mu = _scaled_to(base, s_mu)
            nu = _scaled_to(base, s_nu)
        else:
            dim = int(rng.integers(1, 3))
            n_mu = int(rng.integers(2, 6))
            n_nu = int(rng.integers(2, 6))
            sub_mu = int(rng.integers(0, 2 ** 31))
            sub_nu = int(rng.integers(0, 2 ** 31))
            u_mu = float(rng.uniform(0.5, 1.0))
            u_nu = float(rng.uniform(0.5, 1.0))
            mu = _scaled_to(random_measure(dim, n_mu, sub_mu), a * u_mu)
            nu = _scaled_to(random_measure(dim, n_nu, sub_nu), b * u_nu)
        w2, _ = solve_w2(mu, nu)
        if w2 <= 1e-12:
            continue
        lo, up, _ = _certified_bracket(mu, nu)
        best = max(best, 0.5 * (lo + up) / w2)
    return float(best)
