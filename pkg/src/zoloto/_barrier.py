"""Interior-point solver for the pairwise-constrained field maximization.

The problem: maximize (nu - mu) @ u over 1-fields (u, G) on the working set,
subject to the two-point constraints C(p,q) <= 0 for all ordered pairs and a
gauge pinning (u, G) at one base point.  Every constraint is a convex
quadratic, so a damped-Newton log-barrier path follower converges globally
from the strictly feasible zero field and every iterate is itself a feasible
field, which is what makes the returned objective a certified lower bound.

The alternative of a general conic solver was dropped: on this problem class
the barrier reaches duality gaps near 1e-11 reliably, needs no feasibility
repair, and keeps the dependency footprint to numpy/scipy.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla
from scipy import sparse


def gauge_index(P, weights_mu):
    """Support point nearest the mu-barycentre; lexicographic tie-break."""
    bary = weights_mu @ P
    dist = np.linalg.norm(P - bary, axis=1)
    dmin = dist.min()
    tied = np.flatnonzero(dist == dmin)
    if len(tied) > 1:
        order = np.lexsort(P[tied].T[::-1])
        return int(tied[order[0]])
    return int(tied[0])


def _constraints(u, G, IP, IQ, D, r):
    dg = G[IQ] - G[IP]
    lin = u[IQ] - u[IP] - 0.5 * np.sum((G[IP] + G[IQ]) * D, axis=1)
    return lin + 0.25 * np.sum(dg * dg, axis=1) - r, dg


def solve_field_dual(P, mu_w, nu_w, tol=1e-9, max_newton=800):
    """Barrier solve on the working set P with weight vectors mu_w, nu_w.

    Returns a dict with the field (u, G), the recomputed objective, the
    constraint values C per ordered pair (IP, IQ), pair multipliers, the
    gauge index, Newton iteration count, and a converged flag.
    """
    N, d = P.shape
    i0 = gauge_index(P, mu_w)
    c_obj = nu_w - mu_w
    if N == 1:
        return {
            "u": np.zeros(1), "G": np.zeros((1, d)), "value": 0.0,
            "IP": np.empty(0, dtype=int), "IQ": np.empty(0, dtype=int),
            "C": np.empty(0), "lam": np.empty(0), "gauge": i0,
            "iterations": 0, "converged": True,
        }

    # scale positions to unit radius: u lives on s^2, G on s
    bary = mu_w @ P
    s = max(float(np.max(np.linalg.norm(P - bary, axis=1))), 1e-12)
    Ps = (P - bary) / s

    IP, IQ = np.where(~np.eye(N, dtype=bool))
    D = Ps[IQ] - Ps[IP]
    r = 0.25 * np.sum(D * D, axis=1)
    M = len(IP)

    nv = N * (1 + d)
    free = np.ones(nv, dtype=bool)
    free[i0] = False
    free[N + i0 * d: N + (i0 + 1) * d] = False
    nfree = int(free.sum())
    cvec = np.concatenate([c_obj, np.zeros(N * d)])[free]

    rows_u = np.concatenate([np.arange(M), np.arange(M)])
    cols_u = np.concatenate([IQ, IP])
    rows_g = np.repeat(np.arange(M), 2 * d)
    cols_g = (N + np.concatenate(
        [IQ[:, None] * d + np.arange(d)[None, :],
         IP[:, None] * d + np.arange(d)[None, :]], axis=1).reshape(-1))
    jac_rows = np.concatenate([rows_u, rows_g])
    jac_cols = np.concatenate([cols_u, cols_g])

    # constant factor of the constraints' second derivative (G_q - G_p rows)
    rows_b = np.repeat(np.arange(M * d), 2)
    cols_b = np.empty(M * d * 2, dtype=np.int64)
    cols_b[0::2] = (N + IQ[:, None] * d + np.arange(d)[None, :]).reshape(-1)
    cols_b[1::2] = (N + IP[:, None] * d + np.arange(d)[None, :]).reshape(-1)
    B = sparse.csr_matrix((np.tile([1.0, -1.0], M * d), (rows_b, cols_b)),
                          shape=(M * d, nv))[:, free].tocsr()

    def jacobian(dg):
        # gradient block data must interleave (q, p) per pair like cols_g
        data_g = np.concatenate([-0.5 * D + 0.5 * dg,
                                 -0.5 * D - 0.5 * dg], axis=1).reshape(-1)
        data = np.concatenate([np.ones(M), -np.ones(M), data_g])
        return sparse.csr_matrix((data, (jac_rows, jac_cols)),
                                 shape=(M, nv))[:, free].tocsr()

    u = np.zeros(N)
    G = np.zeros((N, d))
    C, dg = _constraints(u, G, IP, IQ, D, r)
    w = np.zeros(nfree)

    def set_w(wvec):
        full = np.zeros(nv)
        full[free] = wvec
        return full[:N], full[N:].reshape(N, d)

    t = 10.0
    total = 0
    converged = False
    while True:
        for _ in range(60):
            if total >= max_newton:
                break
            total += 1
            sC = 1.0 / (-C)
            J = jacobian(dg)
            H = (J.T @ sparse.diags(sC * sC) @ J
                 + B.T @ sparse.diags(np.repeat(0.5 * sC, d)) @ B).toarray()
            grad = t * cvec - J.T @ sC
            try:
                cho = sla.cho_factor(H + 1e-13 * np.eye(nfree), lower=True)
                step = sla.cho_solve(cho, grad)
            except sla.LinAlgError:
                step = np.linalg.lstsq(H + 1e-9 * np.eye(nfree), grad,
                                       rcond=None)[0]
            if not np.all(np.isfinite(step)):
                break
            lam2 = float(grad @ step)
            if lam2 <= 0:
                break
            merit0 = t * float(cvec @ w) + float(np.sum(np.log(-C)))
            alpha = 1.0
            accepted = False
            for _ in range(60):
                wn = w + alpha * step
                un, Gn = set_w(wn)
                Cn, dgn = _constraints(un, Gn, IP, IQ, D, r)
                if Cn.max() < 0:
                    meritn = t * float(cvec @ wn) + float(np.sum(np.log(-Cn)))
                    if meritn > merit0 + 0.25 * alpha * lam2:
                        accepted = True
                        break
                alpha *= 0.5
            if not accepted:
                break
            w, u, G, C, dg = wn, un, Gn, Cn, dgn
            if lam2 * alpha < 1e-12 * max(1.0, t):
                break
            if lam2 < 0.3 and alpha == 1.0:
                break
        gap_true = s * s * M / t
        value_true = s * s * float(cvec @ w)
        if gap_true <= max(0.1 * tol, 1e-13 * max(1.0, abs(value_true))):
            converged = True
            break
        if t > 1e15 or total >= max_newton:
            break
        t *= 20.0

    lam = 1.0 / (t * s * s * (-C))
    # undo the scaling; C scales by s^2 like the objective
    return {
        "u": u * s * s, "G": G * s, "value": float(c_obj @ u) * s * s,
        "IP": IP, "IQ": IQ, "C": C * s * s, "lam": lam, "gauge": i0,
        "iterations": total, "converged": converged,
    }
