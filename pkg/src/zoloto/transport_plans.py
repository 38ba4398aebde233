"""Convex order, martingale couplings, 3-plans, and Z2 certification.

The primal side of the field dual: Z2(mu, nu) equals the minimal cost
int 0.5(|z - x|^2 + |z - y|^2) over 3-plans whose (x, z) and (y, z) pairs
are martingale couplings of mu and nu with a shared third marginal rho.
Subtracting the constant lets the search run over rho alone:

    Z2 = V - (var mu + var nu)/2,   V = inf { var rho : rho >=_c mu, nu }.

V restricted to a finite candidate support is an LP; any feasible value is
an upper bound for Z2, and together with a feasible dual field it brackets
the exact distance.  Candidate supports come from the dual solution (optimal
plans concentrate z at zbar(x, y)), enriched with midpoints, convolution
points x + y - m, and LP column generation with closed-form pricing when the
first rounds leave a gap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._lp import (martingale_lp, minimize_variance_free_support,
                  plan_lp_on_pairs, variance_lp)
from ._polish import polish_field
from .errors import (BarycentreMismatch, DimensionMismatch, InfeasibleSupport,
                     NotCertified, NotInConvexOrder)
from .measures import TOL_MERGE, DiscreteMeasure, _merge_atoms, stats
from .wasserstein import Coupling
from .zolotarev import (TOL_ACTIVE, DualReport, OneField, check_barycentres,
                        field_constraint_values, pairwise_constraint,
                        solve_dual_z2, union_support)

RHO_DROP = 1e-12
DEDUP_TOL = 1e-9


@dataclass(frozen=True)
class ThreePlan:
    """Finitely supported plan on (x, y, z) triples with positive masses."""

    xs: np.ndarray
    ys: np.ndarray
    zs: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        xs = np.atleast_2d(np.asarray(self.xs, float))
        ys = np.atleast_2d(np.asarray(self.ys, float))
        zs = np.atleast_2d(np.asarray(self.zs, float))
        masses = np.asarray(self.masses, float).ravel()
        if not (xs.shape == ys.shape == zs.shape):
            raise DimensionMismatch("x, y, z blocks must share a shape")
        if xs.shape[0] != masses.shape[0]:
            raise DimensionMismatch("one mass per triple required")
        if masses.min(initial=0.0) < 0.0 or not np.all(np.isfinite(masses)):
            raise ValueError("triple masses must be finite and nonnegative")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "zs", zs)
        object.__setattr__(self, "masses", masses)

    @classmethod
    def from_triples(cls, triples) -> "ThreePlan":
        """Build from a list of (x, y, z, mass) tuples."""
        xs = [np.atleast_1d(np.asarray(t[0], float)) for t in triples]
        ys = [np.atleast_1d(np.asarray(t[1], float)) for t in triples]
        zs = [np.atleast_1d(np.asarray(t[2], float)) for t in triples]
        ms = [float(t[3]) for t in triples]
        return cls(np.array(xs), np.array(ys), np.array(zs), np.array(ms))

    @property
    def triples(self) -> list:
        return [(self.xs[t], self.ys[t], self.zs[t], float(self.masses[t]))
                for t in range(self.n_triples)]

    @property
    def n_triples(self) -> int:
        return self.masses.shape[0]

    def third_marginal(self):
        """(points, weights) of the z-marginal, merged."""
        return _merge_atoms(self.zs, self.masses, TOL_MERGE)

    def to_json_dict(self) -> dict:
        return {"triples": [{"x": x.tolist(), "y": y.tolist(),
                             "z": z.tolist(), "m": m}
                            for x, y, z, m in self.triples]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "ThreePlan":
        return cls.from_triples([(t["x"], t["y"], t["z"], t["m"])
                                 for t in data["triples"]])


@dataclass(frozen=True)
class ValidationReport:
    """Residuals of the 3-plan feasibility conditions for a pair (mu, nu)."""

    mass_sum_residual: float
    mu_marginal_residual: float
    nu_marginal_residual: float
    martingale_x_residual: float
    martingale_y_residual: float
    valid: bool


@dataclass(frozen=True)
class OptimalityReport:
    """Joint optimality checks for a (dual field, 3-plan) pair."""

    max_z_residual: float
    min_constraint_value: float
    max_abs_constraint: float
    z_ok: bool
    constraint_ok: bool
    ok: bool


@dataclass(frozen=True)
class CertifiedZ2:
    """Two-sided bracket for Z2: feasible dual value and feasible plan cost."""

    lower: float
    upper: float
    gap: float
    dual: DualReport
    primal: ThreePlan

    def to_json_dict(self) -> dict:
        return {"z2_lower": self.lower, "z2_upper": self.upper,
                "gap": self.gap}


def check_convex_order(mu: DiscreteMeasure, nu: DiscreteMeasure) -> bool:
    """True iff nu dominates mu in convex order (martingale LP feasible)."""
    if mu.dim != nu.dim:
        raise DimensionMismatch(f"dim {mu.dim} vs {nu.dim}")
    return martingale_lp(mu.positions, mu.weights,
                         nu.positions, nu.weights) is not None


def martingale_coupling(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Coupling:
    """A feasible martingale coupling from mu to nu (any LP-feasible point)."""
    if mu.dim != nu.dim:
        raise DimensionMismatch(f"dim {mu.dim} vs {nu.dim}")
    plan = martingale_lp(mu.positions, mu.weights, nu.positions, nu.weights)
    if plan is None:
        raise NotInConvexOrder("no martingale coupling exists; "
                               "nu does not dominate mu in convex order")
    return Coupling(mu.positions, nu.positions, plan)


def z2_convex_order_closed_form(mu: DiscreteMeasure,
                                nu: DiscreteMeasure) -> float:
    """Z2 = (var nu - var mu)/2 when nu dominates mu in convex order."""
    if not check_convex_order(mu, nu):
        raise NotInConvexOrder("closed form requires nu to dominate mu")
    return 0.5 * (stats(nu).variance - stats(mu).variance)


def _marginal_residual(points, masses, measure: DiscreteMeasure) -> float:
    """Worst per-atom weight mismatch between aggregated points and measure."""
    P, w = _merge_atoms(points, masses, TOL_MERGE)
    D = np.linalg.norm(P[:, None, :] - measure.positions[None, :, :], axis=2)
    nearest = np.argmin(D, axis=1)
    matched = D[np.arange(len(P)), nearest] <= 1e-9
    residual = float(np.max(w[~matched])) if np.any(~matched) else 0.0
    agg = np.zeros(measure.n_atoms)
    np.add.at(agg, nearest[matched], w[matched])
    return max(residual, float(np.max(np.abs(agg - measure.weights))))


def _martingale_residual(anchor, zs, masses) -> float:
    """Max abs coordinate of sum mass (z - a) over triples grouped by anchor atom."""
    A, _ = _merge_atoms(anchor, masses, TOL_MERGE)
    worst = 0.0
    for a in A:
        sel = np.linalg.norm(anchor - a, axis=1) <= TOL_MERGE
        r = masses[sel] @ (zs[sel] - anchor[sel])
        worst = max(worst, float(np.max(np.abs(r))))
    return worst


def validate_three_plan(pi: ThreePlan, mu: DiscreteMeasure,
                        nu: DiscreteMeasure, tol: float = 1e-8) -> ValidationReport:
    """Check the plan's marginals and both martingale conditions against (mu, nu)."""
    if pi.xs.shape[1] != mu.dim or mu.dim != nu.dim:
        raise DimensionMismatch("plan and measures must share a dimension")
    mass_res = abs(float(pi.masses.sum()) - 1.0)
    mu_res = _marginal_residual(pi.xs, pi.masses, mu)
    nu_res = _marginal_residual(pi.ys, pi.masses, nu)
    mx = _martingale_residual(pi.xs, pi.zs, pi.masses)
    my = _martingale_residual(pi.ys, pi.zs, pi.masses)
    valid = (mass_res <= 1e-10 and max(mu_res, nu_res, mx, my) <= tol)
    return ValidationReport(mass_res, mu_res, nu_res, mx, my, valid)


def three_plan_cost(pi: ThreePlan) -> float:
    """Expected 0.5(|z - x|^2 + |z - y|^2) under the plan."""
    cx = np.sum((pi.zs - pi.xs) ** 2, axis=1)
    cy = np.sum((pi.zs - pi.ys) ** 2, axis=1)
    return float(pi.masses @ (0.5 * (cx + cy)))


def _dedup_points(Z, tol: float = DEDUP_TOL):
    """Drop near-duplicate rows (grid rounding at tol; keeps first occurrence)."""
    keys = np.round(np.asarray(Z, float) / tol).astype(np.int64)
    _, idx = np.unique(keys, axis=0, return_index=True)
    return Z[np.sort(idx)]


def solve_variance_lp(mu: DiscreteMeasure, nu: DiscreteMeasure,
                      candidate_support):
    """Minimize var rho over rho on the candidate support dominating mu and nu.

    Returns (v, pi_mu, pi_nu): the restricted minimum (an upper bound for the
    free-support value) and the two martingale couplings onto the optimal rho.
    """
    check_barycentres(mu, nu)
    Z = np.atleast_2d(np.asarray(candidate_support, float))
    if Z.size == 0:
        raise InfeasibleSupport("empty candidate support")
    if Z.shape[1] != mu.dim:
        raise DimensionMismatch(f"support dim {Z.shape[1]} vs measures {mu.dim}")
    m_bar = stats(mu).barycentre
    out = variance_lp(mu.positions, mu.weights, nu.positions, nu.weights,
                      Z, m_bar)
    if out is None:
        raise InfeasibleSupport(
            "candidate support admits no common martingale dominator")
    v, pim, pin = out
    return v, Coupling(mu.positions, Z, pim), Coupling(nu.positions, Z, pin)


def build_candidate_support(dual: DualReport, mu: DiscreteMeasure,
                            nu: DiscreteMeasure):
    """Support points zbar(p, q) over active cross pairs, plus the working set.

    zbar(p, q) = (p + q)/2 + (g(q) - g(p))/2 maximizes the 3-point gap;
    optimal plans concentrate their third coordinate there.
    """
    P = dual.field.points
    G = dual.field.gradients
    in_mu = np.min(np.linalg.norm(
        P[:, None, :] - mu.positions[None, :, :], axis=2), axis=1) <= 1e-9
    in_nu = np.min(np.linalg.norm(
        P[:, None, :] - nu.positions[None, :, :], axis=2), axis=1) <= 1e-9
    pts = [P]
    if dual.active_pairs:
        pairs = np.asarray(dual.active_pairs, int)
        keep = in_mu[pairs[:, 0]] & in_nu[pairs[:, 1]]
        ip, iq = pairs[keep, 0], pairs[keep, 1]
        pts.append((P[ip] + P[iq]) / 2 + (G[iq] - G[ip]) / 2)
    return _dedup_points(np.vstack(pts))


def _glue(X, Y, Z, pim, pin) -> ThreePlan:
    """Conditionally independent gluing of two couplings through shared rho.

    Triple mass at (x_i, y_j, z_k) is pim[i,k] pin[j,k] / rho_k; columns with
    rho_k below RHO_DROP are dropped and the result renormalized (relative
    change at most ~1e-10, within the plan's validity tolerances).
    """
    rho = pim.sum(axis=0)
    xs, ys, zs, ms = [], [], [], []
    for k in np.nonzero(rho > RHO_DROP)[0]:
        ii = np.nonzero(pim[:, k] > 0.0)[0]
        jj = np.nonzero(pin[:, k] > 0.0)[0]
        block = np.outer(pim[ii, k], pin[jj, k]) / rho[k]
        for a, i in enumerate(ii):
            for b, j in enumerate(jj):
                xs.append(X[i])
                ys.append(Y[j])
                zs.append(Z[k])
                ms.append(block[a, b])
    masses = np.array(ms)
    return ThreePlan(np.array(xs), np.array(ys), np.array(zs),
                     masses / masses.sum())


def _convex_order_plan(mu: DiscreteMeasure, nu: DiscreteMeasure):
    """Exact optimal plan when one measure convexly dominates the other.

    A martingale coupling kappa of the dominated onto the dominating measure
    yields the plan with z pinned at the dominating side's atom: triples
    (x, y, y, kappa) when nu dominates, (x, y, x, kappa) when mu does.  All
    martingale rows then hold exactly and the cost equals |var nu - var mu|/2.
    """
    kappa = martingale_lp(mu.positions, mu.weights, nu.positions, nu.weights)
    if kappa is not None:
        ii, jj = np.nonzero(kappa > 0.0)
        return ThreePlan(mu.positions[ii], nu.positions[jj],
                         nu.positions[jj], kappa[ii, jj])
    kappa = martingale_lp(nu.positions, nu.weights, mu.positions, mu.weights)
    if kappa is not None:
        jj, ii = np.nonzero(kappa > 0.0)
        return ThreePlan(mu.positions[ii], nu.positions[jj],
                         mu.positions[ii], kappa[jj, ii])
    return None


def _validated_polish(dual, P, wmu, wnu, pairs, lam0, mu, nu):
    """One polish attempt followed by the full validation chain.

    Accepts only when Newton converged, the polished field is globally
    feasible (so its value is a certified lower bound), the value did not
    drop, and the re-priced plan is itself valid with a consistent cost.
    Returns (dual, plan, lower, upper) or None.
    """
    N = P.shape[0]
    u1, G1, lam1, hist = polish_field(P, wmu, wnu, pairs,
                                      dual.field.values,
                                      dual.field.gradients, lam0)
    if hist[-1] > 1e-10 or not (np.all(np.isfinite(u1))
                                and np.all(np.isfinite(G1))):
        return None, lam1, hist
    field = OneField(P, u1, G1)
    value = float((wnu - wmu) @ u1)
    IP1, IQ1, C1 = field_constraint_values(field)
    max_c = float(C1.max(initial=0.0))
    if max_c > 1e-12 * max(1.0, abs(value)) or value < dual.value - 1e-9:
        return None, lam1, hist
    # the multipliers of the pairwise dual sum to one, so a uniform
    # constraint violation of max_c costs at most max_c of objective
    lower = value - max(0.0, max_c)
    keep = (C1 >= -1e-6) & (wmu[IP1] > 0) & (wnu[IQ1] > 0)
    cand = np.stack([IP1[keep], IQ1[keep]], axis=1)
    diag = np.array([(r, r) for r in range(N) if wmu[r] > 0 and wnu[r] > 0],
                    dtype=int).reshape(-1, 2)
    allp = np.vstack([cand, diag])
    out = plan_lp_on_pairs(P, wmu, wnu, allp, G1)
    if out is None:
        return None, lam1, hist
    cost, gamma, Zb = out
    total = gamma.sum()
    if not np.isfinite(cost) or abs(total - 1.0) > 1e-9:
        return None, lam1, hist
    pos = gamma > 0.0
    new_plan = ThreePlan(P[allp[pos, 0]], P[allp[pos, 1]], Zb[pos],
                         gamma[pos] / total)
    upper = three_plan_cost(new_plan)
    if upper < lower - 1e-9:
        return None, lam1, hist
    if not validate_three_plan(new_plan, mu, nu).valid:
        return None, lam1, hist
    dual2 = DualReport(value=lower, field=field,
                       max_violation=max(0.0, max_c),
                       active_pairs=[(int(i), int(j)) for i, j in
                                     zip(IP1[C1 >= -TOL_ACTIVE],
                                         IQ1[C1 >= -TOL_ACTIVE])],
                       iterations=dual.iterations + len(hist) - 1,
                       converged=True)
    return (dual2, new_plan, lower, upper), lam1, hist


def _refine_certificate(dual: DualReport, plan: ThreePlan,
                        mu: DiscreteMeasure, nu: DiscreteMeasure):
    """Sharpen a certificate by polishing the field on its active pairs.

    The glued plan's pair masses seed a Newton solve of the stationarity
    system (see _polish); on success the polished field is feasible to
    machine precision and a small LP re-prices the plan with z fixed at the
    polished barycentre points, so every triple sits exactly at zbar with a
    vanishing two-point residual.

    The active set is not observable directly: restricted-support vertices
    park small mass on pairs whose constraint is far from tight, and forcing
    those to equality drags the polish off the optimal face.  A descending
    ladder of activity thresholds, each with one retry that drops pairs
    whose multiplier went negative, is attempted until an attempt passes
    validation.  Returns (dual, plan, lower, upper) or None when every
    attempt fails, leaving the original certificate in use.
    """
    P = dual.field.points
    N, d = P.shape
    P2, wmu, wnu = union_support(mu, nu)
    if P2.shape != P.shape or np.max(np.abs(P2 - P)) > 0.0:
        return None

    def locate(p):
        dists = np.linalg.norm(P - p, axis=1)
        k = int(np.argmin(dists))
        return k if dists[k] <= 1e-7 else None

    pair_mass = {}
    for x, y, _, m in plan.triples:
        i, j = locate(x), locate(y)
        if i is None or j is None:
            return None
        pair_mass[(i, j)] = pair_mass.get((i, j), 0.0) + m
    IP, IQ, C = field_constraint_values(dual.field)
    cmap = {(int(i), int(j)): float(c) for i, j, c in zip(IP, IQ, C)}
    both = (wmu[IP] > 0) & (wnu[IQ] > 0)
    diag_set = {(r, r) for r in range(N) if wmu[r] > 0 and wnu[r] > 0}
    for tau in (1e-6, 1e-7, 1e-8, 1e-9):
        near = both & (C >= -tau)
        pair_set = set(zip(IP[near].tolist(), IQ[near].tolist()))
        pair_set |= {pq for pq in pair_mass if cmap.get(pq, 0.0) >= -tau}
        pair_set |= diag_set
        pairs = np.array(sorted(pair_set), dtype=int)
        if pairs.shape[0] > 1500 or N * (1 + d) > 1200 or pairs.size == 0:
            return None
        lam0 = np.array([pair_mass.get((i, j), 0.0) for i, j in pairs])
        result, lam1, hist = _validated_polish(dual, P, wmu, wnu, pairs,
                                               lam0, mu, nu)
        if result is not None:
            return result
        # a stalled Newton often signals pairs that cannot stay active;
        # their multipliers go negative, so drop them and retry once
        drop = lam1 < -1e-12
        if hist[-1] > 1e-10 and np.any(drop) and not np.all(drop):
            result, _, _ = _validated_polish(dual, P, wmu, wnu, pairs[~drop],
                                             np.clip(lam1[~drop], 0.0, None),
                                             mu, nu)
            if result is not None:
                return result
    return None


def certify_z2(mu: DiscreteMeasure, nu: DiscreteMeasure,
               tol: float = 1e-8) -> CertifiedZ2:
    """Two-sided certification of Z2 with gap at most tol.

    Runs the field dual for the lower bound, then solves restricted variance
    LPs over staged candidate supports for the upper bound: (1) the dual's
    zbar points with the working set, (2) plus all cross-pair midpoints,
    (3) plus convolution points x + y - m and axis-aligned far points, with
    column generation until pricing certifies the restricted value or the
    bracket closes.  A Newton polish of the field on its active pairs then
    re-prices the plan on exact barycentre points, typically closing the
    bracket to machine precision.  Raises NotCertified carrying the best
    bracket when the gap stays above tol.
    """
    check_barycentres(mu, nu)
    dual = solve_dual_z2(mu, nu, min(tol, 1e-8))
    lower = dual.value
    if dual.iterations == 0:
        # convex-order fast path: the quadratic field is exactly optimal and
        # a martingale coupling provides the matching plan
        plan = _convex_order_plan(mu, nu)
        if plan is not None:
            upper = three_plan_cost(plan)
            gap = max(0.0, upper - lower)
            result = CertifiedZ2(lower=lower, upper=upper, gap=gap,
                                 dual=dual, primal=plan)
            if gap <= tol:
                return result
    X, Y = mu.positions, nu.positions
    wmu, wnu = mu.weights, nu.weights
    m_bar = stats(mu).barycentre
    half = 0.5 * (stats(mu).variance + stats(nu).variance)
    target = lower + half + 0.25 * tol

    P = dual.field.points
    G = dual.field.gradients
    if dual.active_pairs:
        pairs = np.asarray(dual.active_pairs, int)
        ip, iq = pairs[:, 0], pairs[:, 1]
        zbar = (P[ip] + P[iq]) / 2 + (G[iq] - G[ip]) / 2
    else:
        zbar = np.empty((0, mu.dim))
    d = mu.dim
    n_pts = P.shape[0]
    # quadratic-size enrichments are only worthwhile on small instances;
    # column generation discovers missing support points on large ones
    if n_pts * (n_pts - 1) <= 4096:
        ip_all, iq_all = np.where(~np.eye(n_pts, dtype=bool))
        mid = 0.5 * (P[ip_all] + P[iq_all])
    else:
        mid = np.empty((0, d))
    eye = np.eye(d)
    rad = 1.5 * max(np.max(np.linalg.norm(X - m_bar, axis=1)),
                    np.max(np.linalg.norm(Y - m_bar, axis=1)), 1e-6)
    cross = np.concatenate([
        (X[:, None, :] + rad * eye[None, :, :]).reshape(-1, d),
        (X[:, None, :] - rad * eye[None, :, :]).reshape(-1, d),
        (Y[:, None, :] + rad * eye[None, :, :]).reshape(-1, d),
        (Y[:, None, :] - rad * eye[None, :, :]).reshape(-1, d),
    ])
    if X.shape[0] * Y.shape[0] <= 4096:
        conv = (X[:, None, :] + Y[None, :, :] - m_bar).reshape(-1, d)
    else:
        conv = np.empty((0, d))

    stages = [(np.vstack([P, zbar]), False),
              (np.vstack([P, zbar, mid]), False),
              (np.vstack([P, zbar, mid, conv, cross]), True)]
    best = None
    for Zc, do_price in stages:
        Z0 = _dedup_points(Zc)
        if do_price:
            out = minimize_variance_free_support(X, wmu, Y, wnu, Z0, m_bar,
                                                 stop_at=target)
        else:
            o = variance_lp(X, wmu, Y, wnu, Z0, m_bar)
            out = None if o is None else (o[0], o[1], o[2], Z0)
        if out is None:
            continue
        v, pim, pin, Z = out[:4]
        if best is None or v < best[0]:
            best = (v, pim, pin, Z)
        if best[0] - half - lower <= tol:
            break
    if best is None:
        raise InfeasibleSupport(
            "no candidate support stage admitted a feasible variance LP")

    plan = _glue(X, Y, best[3], best[1], best[2])
    upper = three_plan_cost(plan)
    refined = _refine_certificate(dual, plan, mu, nu)
    if refined is not None and refined[3] - refined[2] <= max(1e-12,
                                                              upper - lower):
        dual, plan, lower, upper = refined
    gap = max(0.0, upper - lower)
    result = CertifiedZ2(lower=lower, upper=upper, gap=gap,
                         dual=dual, primal=plan)
    if gap > tol:
        raise NotCertified(
            f"duality gap {gap:.3e} above tol {tol:.1e} "
            f"after support enrichment", result)
    return result


def verify_optimality_conditions(dual: DualReport, pi: ThreePlan,
                                 tol: float = 1e-6) -> OptimalityReport:
    """Check joint optimality: z sits at zbar(x, y) and C(x, y) vanishes.

    For every mass-carrying triple: (a) |z - zbar(x, y)| <= tol where zbar
    uses the dual field's gradients; (b) the two-point constraint at (x, y)
    is >= -tol, i.e. active up to tolerance.  Both hold iff the field and
    the plan are simultaneously optimal.
    """
    P = dual.field.points
    u = dual.field.values
    G = dual.field.gradients

    def locate(p):
        dists = np.linalg.norm(P - p, axis=1)
        k = int(np.argmin(dists))
        return k if dists[k] <= 1e-9 else None

    max_z = 0.0
    min_c = np.inf
    max_abs_c = 0.0
    for x, y, z, m in pi.triples:
        if m <= 0.0:
            continue
        i = locate(x)
        j = locate(y)
        if i is None or j is None:
            max_z = np.inf
            min_c = -np.inf
            break
        zbar = (x + y) / 2 + (G[j] - G[i]) / 2
        max_z = max(max_z, float(np.linalg.norm(z - zbar)))
        c = pairwise_constraint(x, u[i], G[i], y, u[j], G[j])
        min_c = min(min_c, c)
        max_abs_c = max(max_abs_c, abs(c))
    z_ok = bool(max_z <= tol)
    c_ok = bool(min_c >= -tol)
    return OptimalityReport(max_z_residual=max_z,
                            min_constraint_value=float(min_c),
                            max_abs_constraint=float(max_abs_c),
                            z_ok=z_ok, constraint_ok=c_ok, ok=z_ok and c_ok)
