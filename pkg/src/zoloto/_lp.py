"""Internal LP cores shared by the public modules.

All solves go through scipy's HiGHS interface.  HiGHS simplex ships its own
anti-cycling safeguards (equivalent to Bland's rule for our purposes), and
vertex solutions come with exact basic duals, which the support-pricing step
relies on.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

# marginal and martingale rows feed 1e-9 validity budgets downstream, so
# every solve holds its rows far tighter than the 1e-7 HiGHS default; on
# ill-conditioned instances HiGHS can misreport infeasibility at the tightest
# setting, hence the one-step relaxation before giving up
_FEAS_LADDER = (1e-10, 1e-9)


def _linprog_eq(c, A, b):
    for ptol in _FEAS_LADDER:
        res = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs",
                      options={"primal_feasibility_tolerance": ptol,
                               "dual_feasibility_tolerance": 1e-9})
        if res.status == 0:
            return res
    return res


def transport_lp(X, wmu, Y, wnu, cost):
    """Exact transportation LP: min <plan, cost> with fixed marginals.

    Returns (value, plan) at an optimal vertex, or raises RuntimeError when
    HiGHS fails (balanced problems are always feasible).
    """
    n, m = len(wmu), len(wnu)
    data, rows, cols = [], [], []
    for i in range(n):
        rows += [i] * m
        cols += list(range(i * m, (i + 1) * m))
        data += [1.0] * m
    for j in range(m):
        rows += [n + j] * n
        cols += list(range(j, n * m, m))
        data += [1.0] * n
    A = sparse.csc_matrix((data, (rows, cols)), shape=(n + m, n * m))
    b = np.concatenate([wmu, wnu])
    res = _linprog_eq(cost.ravel(), A, b)
    if res.status != 0:
        raise RuntimeError(f"transport LP failed: {res.message}")
    plan = res.x.reshape(n, m)
    return float(res.fun), np.maximum(plan, 0.0)


def martingale_lp(X, wmu, Y, wnu):
    """Feasibility LP for a martingale coupling mu -> nu.

    Constraints: row sums wmu, column sums wnu, and per-row barycentre
    sum_j gamma_ij (y_j - x_i) = 0.  Returns the coupling matrix or None
    when no martingale coupling exists.
    """
    n, d = X.shape
    m = Y.shape[0]
    data, rows, cols = [], [], []
    r = 0
    for i in range(n):
        rows += [r] * m
        cols += list(range(i * m, (i + 1) * m))
        data += [1.0] * m
        r += 1
    for j in range(m):
        rows += [r] * n
        cols += list(range(j, n * m, m))
        data += [1.0] * n
        r += 1
    for i in range(n):
        for c in range(d):
            rows += [r] * m
            cols += list(range(i * m, (i + 1) * m))
            data += list(Y[:, c] - X[i, c])
            r += 1
    A = sparse.csc_matrix((data, (rows, cols)), shape=(r, n * m))
    b = np.concatenate([wmu, wnu, np.zeros(n * d)])
    res = _linprog_eq(np.zeros(n * m), A, b)
    if res.status != 0:
        return None
    return np.maximum(res.x.reshape(n, m), 0.0)


def plan_lp_on_pairs(P, wmu, wnu, pairs, G):
    """Minimum-cost three-point plan supported on given (p, q) pairs.

    Each pair carries its barycentre point zbar = (p + q)/2 + (g_q - g_p)/2
    as the fixed third coordinate; the LP chooses pair masses gamma >= 0
    matching both marginals exactly and satisfying the per-atom martingale
    rows sum_a gamma_a (zbar_a - p) = 0 and sum_a gamma_a (zbar_a - q) = 0.
    Returns (cost, gamma, Zbar) or None when the pair set cannot support
    such a plan.
    """
    pairs = np.asarray(pairs, dtype=int)
    K = pairs.shape[0]
    N, d = P.shape
    if K == 0:
        return None
    X = P[pairs[:, 0]]
    Y = P[pairs[:, 1]]
    Zb = 0.5 * (X + Y) + 0.5 * (G[pairs[:, 1]] - G[pairs[:, 0]])
    cost = 0.5 * (np.sum((Zb - X) ** 2, axis=1) + np.sum((Zb - Y) ** 2, axis=1))
    isrc = np.nonzero(wmu > 0)[0]
    jsrc = np.nonzero(wnu > 0)[0]
    irow = {int(i): r for r, i in enumerate(isrc)}
    jrow = {int(j): r for r, j in enumerate(jsrc)}
    n, m = len(isrc), len(jsrc)
    rows, cols, vals = [], [], []
    for a in range(K):
        i, j = int(pairs[a, 0]), int(pairs[a, 1])
        if i not in irow or j not in jrow:
            return None
        ri, rj = irow[i], jrow[j]
        rows += [ri, n + rj]
        cols += [a, a]
        vals += [1.0, 1.0]
        for c in range(d):
            rows.append(n + m + ri * d + c)
            cols.append(a)
            vals.append(Zb[a, c] - X[a, c])
            rows.append(n + m + n * d + rj * d + c)
            cols.append(a)
            vals.append(Zb[a, c] - Y[a, c])
    A = sparse.csc_matrix((vals, (rows, cols)),
                          shape=(n + m + (n + m) * d, K))
    b = np.concatenate([wmu[isrc], wnu[jsrc], np.zeros((n + m) * d)])
    res = _linprog_eq(cost, A, b)
    if res.status != 0:
        return None
    gamma = np.maximum(res.x, 0.0)
    return float(cost @ gamma), gamma, Zb


def variance_lp(X, wmu, Y, wnu, Z, m_bar, want_duals=False):
    """Minimal variance of rho on support Z dominating both measures.

    Joint LP in pi_mu (n x K) and pi_nu (m x K): row marginals, shared
    column marginal rho, and per-row barycentre (martingale) conditions.
    Objective sums 0.5|z_k - m_bar|^2 over both blocks, i.e. var(rho).

    Returns None when infeasible; otherwise (value, pi_mu, pi_nu) and, when
    want_duals, the equality duals (alpha, beta, eta, theta).
    """
    n, d = X.shape
    m = Y.shape[0]
    K = Z.shape[0]
    cost_z = 0.5 * np.sum((Z - m_bar) ** 2, axis=1)
    c = np.concatenate([np.tile(cost_z, n), np.tile(cost_z, m)])

    data, rows, cols = [], [], []
    r = 0
    for i in range(n):
        rows += [r] * K
        cols += list(range(i * K, (i + 1) * K))
        data += [1.0] * K
        r += 1
    for j in range(m):
        rows += [r] * K
        cols += list(range(n * K + j * K, n * K + (j + 1) * K))
        data += [1.0] * K
        r += 1
    for k in range(K):
        rows += [r] * (n + m)
        cols += ([i * K + k for i in range(n)]
                 + [n * K + j * K + k for j in range(m)])
        data += [1.0] * n + [-1.0] * m
        r += 1
    for i in range(n):
        for c_ in range(d):
            rows += [r] * K
            cols += list(range(i * K, (i + 1) * K))
            data += list(Z[:, c_] - X[i, c_])
            r += 1
    for j in range(m):
        for c_ in range(d):
            rows += [r] * K
            cols += list(range(n * K + j * K, n * K + (j + 1) * K))
            data += list(Z[:, c_] - Y[j, c_])
            r += 1
    A = sparse.csc_matrix((data, (rows, cols)), shape=(r, (n + m) * K))
    b = np.concatenate([wmu, wnu, np.zeros(K + (n + m) * d)])
    res = _linprog_eq(c, A, b)
    if res.status != 0:
        return None
    pim = np.maximum(res.x[:n * K].reshape(n, K), 0.0)
    pin = np.maximum(res.x[n * K:].reshape(m, K), 0.0)
    if not want_duals:
        return float(res.fun), pim, pin
    y = res.eqlin.marginals
    alpha = y[:n]
    beta = y[n:n + m]
    eta = y[n + m + K:n + m + K + n * d].reshape(n, d)
    theta = y[n + m + K + n * d:].reshape(m, d)
    return float(res.fun), pim, pin, (alpha, beta, eta, theta)


def price_support(X, Y, m_bar, duals):
    """Closed-form pricing of all candidate support points.

    For LP duals (alpha, beta, eta, theta) the joint reduced cost of a new
    support point z decomposes over (mu-atom, nu-atom) pairs into strictly
    convex quadratics with common minimiser structure
        z*_ij = m_bar + (eta_i + theta_j)/2.
    A nonnegative minimum over all pairs certifies that no support point
    anywhere in R^d can lower the restricted LP value (after shifting the
    dual objective by the negative part).

    Returns (z_candidates (n, m, d), reduced_costs (n, m)).
    """
    alpha, beta, eta, theta = duals
    Zs = m_bar + 0.5 * (eta[:, None, :] + theta[None, :, :])
    q = (np.sum((Zs - m_bar) ** 2, axis=2)
         - np.einsum("id,ijd->ij", eta, Zs - X[:, None, :])
         - np.einsum("jd,ijd->ij", theta, Zs - Y[None, :, :])
         - alpha[:, None] - beta[None, :])
    return Zs, q


def _append_distinct(Z, cand, tol=1e-10):
    """Rows of cand not already present in Z (or each other) within tol."""
    fresh = []
    for z in cand:
        if Z.shape[0] and np.min(np.sum((Z - z) ** 2, axis=1)) <= tol * tol:
            continue
        if fresh and np.min(np.sum((np.asarray(fresh) - z) ** 2, axis=1)) <= tol * tol:
            continue
        fresh.append(z)
    return np.asarray(fresh) if fresh else None


def minimize_variance_free_support(X, wmu, Y, wnu, Z0, m_bar, stop_at=None,
                                   max_rounds=40, price_tol=1e-10):
    """Column generation over support points for the variance LP.

    Starting from Z0, alternately solves the restricted LP and adds the
    best-priced new support points until pricing certifies optimality, the
    value reaches stop_at, or the round budget runs out.

    Returns None if Z0 is infeasible, else
    (value, pi_mu, pi_nu, Z, price_min, rounds).
    """
    Z = np.asarray(Z0, dtype=float)
    scale = max(1.0, float(np.max(np.abs(Z - m_bar))) ** 2)
    rad = 2.0 * max(np.max(np.linalg.norm(X - m_bar, axis=1)),
                    np.max(np.linalg.norm(Y - m_bar, axis=1)), 1e-9)
    best = None
    for it in range(max_rounds):
        out = variance_lp(X, wmu, Y, wnu, Z, m_bar, want_duals=True)
        if out is None:
            return None
        v, pim, pin, duals = out
        Zs, q = price_support(X, Y, m_bar, duals)
        dmin = float(q.min())
        if best is None or v < best[0]:
            best = (v, pim, pin, Z, dmin, it + 1)
        if (stop_at is not None and v <= stop_at) or dmin >= -price_tol * scale:
            return best
        mask = q < -price_tol * scale
        cand = Zs[mask].copy()
        # degenerate duals can fling candidates far out; pull them back to
        # the support scale (harmless: candidates only ever enlarge the LP)
        r = np.linalg.norm(cand - m_bar, axis=1)
        far = r > rad
        cand[far] = m_bar + (cand[far] - m_bar) * (rad / r[far])[:, None]
        order = np.argsort(q[mask])
        fresh = _append_distinct(Z, cand[order][:16])
        if fresh is None:
            return best
        if Z.shape[0] > 400:
            rho = pim.sum(axis=0) + pin.sum(axis=0)
            Z = Z[rho > 1e-14]
        Z = np.vstack([Z, fresh])
    return best
