"""Second-order Zolotarev distance via the finite field dual.

Z2(mu, nu) is the supremum of int u d(nu - mu) over functions whose gradient
is 1-Lipschitz.  On finite supports the supremum is attained by a 1-field
(values + gradients on the working set S = supp mu  union  supp nu) subject to
the two-point constraint C(p,q) <= 0 for every ordered pair; restricting to S
loses nothing because any pairwise-feasible field satisfies the 3-point
inequality for every z, so its objective is dominated by every admissible
3-plan cost, while restrictions of admissible functions stay feasible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import measures as _measures
from ._barrier import gauge_index, solve_field_dual
from ._lp import martingale_lp
from .errors import BarycentreMismatch, DimensionMismatch, NotConverged, ParseError
from .measures import DiscreteMeasure, stats

FEASIBILITY_TOL = 1e-9
TOL_ACTIVE = 1e-7
BARYCENTRE_TOL = 1e-9
MAX_TOTAL_ATOMS = 200


@dataclass(frozen=True)
class OneField:
    """Scalar value and gradient vector attached to each working-set point."""

    points: np.ndarray
    values: np.ndarray
    gradients: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "points", np.atleast_2d(np.asarray(self.points, float)))
        object.__setattr__(self, "values", np.asarray(self.values, float).ravel())
        object.__setattr__(self, "gradients",
                           np.atleast_2d(np.asarray(self.gradients, float)))


@dataclass(frozen=True)
class DualReport:
    """Solved field dual with honesty diagnostics."""

    value: float
    field: OneField
    max_violation: float
    active_pairs: list
    iterations: int
    converged: bool

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "max_violation": self.max_violation,
            "active_pairs": [[int(i), int(j)] for i, j in self.active_pairs],
            "field": {
                "points": self.field.points.tolist(),
                "values": self.field.values.tolist(),
                "gradients": self.field.gradients.tolist(),
            },
        }


def pairwise_constraint(p, u_p, g_p, q, u_q, g_q) -> float:
    """Two-point constraint C(p,q); the field is admissible iff all <= 0."""
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    g_p = np.asarray(g_p, float)
    g_q = np.asarray(g_q, float)
    if p.shape != q.shape:
        raise DimensionMismatch(f"point dims {p.shape} vs {q.shape}")
    dpq = q - p
    return float(u_q - u_p - 0.5 * (g_p + g_q) @ dpq
                 + 0.25 * np.sum((g_q - g_p) ** 2) - 0.25 * dpq @ dpq)


def three_point_gap(x, u_x, g_x, y, u_y, g_y, z) -> float:
    """3-point inequality gap at the free point z (<= 0 for admissible fields).

    Maximized over z at z* = (x+y)/2 + (g_y - g_x)/2, where it equals
    pairwise_constraint(x, ..., y, ...).
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    z = np.asarray(z, float)
    g_x = np.asarray(g_x, float)
    g_y = np.asarray(g_y, float)
    if not (x.shape == y.shape == z.shape):
        raise DimensionMismatch("x, y, z must share a dimension")
    return float((u_y + g_y @ (z - y)) - (u_x + g_x @ (z - x))
                 - 0.5 * (np.sum((z - x) ** 2) + np.sum((z - y) ** 2)))


def field_constraint_values(field: OneField):
    """All ordered-pair constraint values C(p,q), vectorized.

    Returns (IP, IQ, C) with C[k] = C(points[IP[k]], points[IQ[k]]).
    """
    P = field.points
    u = field.values
    G = field.gradients
    N = P.shape[0]
    IP, IQ = np.where(~np.eye(N, dtype=bool))
    D = P[IQ] - P[IP]
    dg = G[IQ] - G[IP]
    C = (u[IQ] - u[IP] - 0.5 * np.sum((G[IP] + G[IQ]) * D, axis=1)
         + 0.25 * np.sum(dg * dg, axis=1) - 0.25 * np.sum(D * D, axis=1))
    return IP, IQ, C


def check_field_admissible(field: OneField, tol: float):
    """(ok, worst_pair, worst_value): ok iff max over pairs C(p,q) <= tol."""
    IP, IQ, C = field_constraint_values(field)
    if len(C) == 0:
        return True, None, 0.0
    k = int(np.argmax(C))
    return bool(C[k] <= tol), (int(IP[k]), int(IQ[k])), float(C[k])


def union_support(mu: DiscreteMeasure, nu: DiscreteMeasure):
    """Working set S = supp mu  union  supp nu with per-measure weights on S."""
    if mu.dim != nu.dim:
        raise DimensionMismatch(f"dim {mu.dim} vs {nu.dim}")
    P = [p for p in mu.positions]
    mu_w = list(mu.weights)
    nu_w = [0.0] * mu.n_atoms
    for y, w in zip(nu.positions, nu.weights):
        for k, p in enumerate(P):
            if np.linalg.norm(y - p) <= _measures.TOL_MERGE:
                nu_w[k] += w
                break
        else:
            P.append(y)
            mu_w.append(0.0)
            nu_w.append(w)
    return np.array(P), np.array(mu_w), np.array(nu_w)


def _gauge_shift(P, u, G, i0):
    """Subtract the affine part so u(p0) = 0 and g(p0) = 0; C is unchanged."""
    g0 = G[i0].copy()
    u = u - u[i0] - (P - P[i0]) @ g0
    G = G - g0
    return u, G


def _quadratic_field(P, m_bar, sign, i0):
    """sign * 0.5|p - m|^2 field, gauge-shifted; C(p,q) == 0 identically."""
    u = sign * 0.5 * np.sum((P - m_bar) ** 2, axis=1)
    G = sign * (P - m_bar)
    u, G = _gauge_shift(P, u, G, i0)
    return u, G


def check_barycentres(mu: DiscreteMeasure, nu: DiscreteMeasure):
    """Raise BarycentreMismatch when [mu] != [nu] beyond tolerance."""
    mismatch = float(np.linalg.norm(stats(mu).barycentre - stats(nu).barycentre))
    if mismatch > BARYCENTRE_TOL:
        raise BarycentreMismatch(
            f"barycentres differ by {mismatch:.3e}; Z2 is infinite", mismatch)
    return mismatch


def solve_dual_z2(mu: DiscreteMeasure, nu: DiscreteMeasure,
                  tol: float = 1e-8) -> DualReport:
    """Maximize the field dual of Z2 on the union support.

    Fast path: when the measures are in convex order the quadratic field
    +-0.5|x - m|^2 is optimal with C identically zero (value 0.5|var nu -
    var mu|).  Otherwise a log-barrier Newton solve runs; its iterates are
    strictly feasible, so the reported value is always a valid lower bound
    and max_violation is honestly zero.
    """
    if mu.dim != nu.dim:
        raise DimensionMismatch(f"dim {mu.dim} vs {nu.dim}")
    if mu.n_atoms + nu.n_atoms > MAX_TOTAL_ATOMS:
        raise ParseError(
            f"{mu.n_atoms + nu.n_atoms} atoms exceed the supported total "
            f"{MAX_TOTAL_ATOMS}")
    check_barycentres(mu, nu)
    P, mu_w, nu_w = union_support(mu, nu)

    quad_sign = 0
    if martingale_lp(mu.positions, mu.weights, nu.positions, nu.weights) is not None:
        quad_sign = 1    # nu dominates: optimal field +0.5|x-m|^2
    elif martingale_lp(nu.positions, nu.weights, mu.positions, mu.weights) is not None:
        quad_sign = -1   # mu dominates: optimal field -0.5|x-m|^2

    if quad_sign != 0:
        m_bar = mu.weights @ mu.positions
        i0 = gauge_index(P, mu_w)
        u, G = _quadratic_field(P, m_bar, quad_sign, i0)
        field = OneField(P, u, G)
        IP, IQ, C = field_constraint_values(field)
        value = float((nu_w - mu_w) @ u)
        active = [(int(i), int(j)) for i, j in zip(IP[C >= -TOL_ACTIVE],
                                                   IQ[C >= -TOL_ACTIVE])]
        return DualReport(value=value, field=field,
                          max_violation=float(max(0.0, C.max(initial=0.0))),
                          active_pairs=active, iterations=0, converged=True)

    out = solve_field_dual(P, mu_w, nu_w, tol=tol)
    if not np.all(np.isfinite(out["u"])) or not np.all(np.isfinite(out["G"])):
        raise NotConverged("field dual produced non-finite iterates",
                           {"iterations": out["iterations"]})
    field = OneField(P, out["u"], out["G"])
    C = out["C"]
    IP, IQ = out["IP"], out["IQ"]
    mask = C >= -TOL_ACTIVE
    active = [(int(i), int(j)) for i, j in zip(IP[mask], IQ[mask])]
    return DualReport(value=float((nu_w - mu_w) @ out["u"]),
                      field=field,
                      max_violation=float(max(0.0, C.max(initial=0.0))),
                      active_pairs=active,
                      iterations=out["iterations"],
                      converged=out["converged"])


def magic_formula_value(field: OneField, mu: DiscreteMeasure,
                        nu: DiscreteMeasure) -> float:
    """Gradient-only certification value: int 0.5 <x, grad u(x)> d(nu - mu)."""
    def half_inner(measure):
        total = 0.0
        for p, w in zip(measure.positions, measure.weights):
            dists = np.linalg.norm(field.points - p, axis=1)
            k = int(np.argmin(dists))
            if dists[k] > 1e-9:
                raise ParseError("measure atom missing from the field's points")
            total += w * 0.5 * float(p @ field.gradients[k])
        return total

    return half_inner(nu) - half_inner(mu)
