"""Newton refinement of the field dual on its active pair set.

The stationarity system of the pairwise dual couples the field (u, g) with
nonnegative multipliers lam on the active two-point constraints: marginal
rows tie the multiplier imbalance at each support point to nu - mu, per-atom
martingale rows pin the barycentre points zbar(p, q) = (p + q)/2 +
(g_q - g_p)/2 of the mass-carrying pairs, and the active constraints
themselves must vanish.  Counting unknowns (u, g, lam) against rows shows
the system is square up to the constant-shift gauge in u, so a damped
Newton iteration started from the interior-point iterate and the glued
plan's pair masses converges quadratically.  The caller validates the
result by rechecking global feasibility and the certified value; the
multipliers are only a warm start and carry no certificate weight.
"""

import numpy as np

__all__ = ["polish_field"]


def _residual(P, wmu, wnu, pairs, irow, jrow, u, G, lam):
    N, d = P.shape
    X = P[pairs[:, 0]]
    Y = P[pairs[:, 1]]
    gp = G[pairs[:, 0]]
    gq = G[pairs[:, 1]]
    Zb = 0.5 * (X + Y) + 0.5 * (gq - gp)
    Fm = np.zeros(N)
    np.add.at(Fm, pairs[:, 1], lam)
    np.add.at(Fm, pairs[:, 0], -lam)
    Fm -= wnu - wmu
    Fx = np.zeros((len(irow), d))
    Fy = np.zeros((len(jrow), d))
    rx = np.array([irow[i] for i in pairs[:, 0]])
    ry = np.array([jrow[j] for j in pairs[:, 1]])
    np.add.at(Fx, rx, lam[:, None] * (Zb - X))
    np.add.at(Fy, ry, lam[:, None] * (Zb - Y))
    FC = (u[pairs[:, 1]] - u[pairs[:, 0]]
          - 0.5 * np.sum((gp + gq) * (Y - X), axis=1)
          + 0.25 * np.sum((gq - gp) ** 2, axis=1)
          - 0.25 * np.sum((Y - X) ** 2, axis=1))
    return np.concatenate([Fm, Fx.ravel(), Fy.ravel(), FC]), Zb, X, Y


def polish_field(P, wmu, wnu, pairs, u0, G0, lam0, max_steps=8):
    """Damped Newton on the active-set stationarity system.

    pairs is an integer (K, 2) array of (p, q) row indices into P; lam0
    should carry the plan masses of those pairs (zero for extras).  Returns
    (u, G, lam, residual_history) where the history holds 2-norms of the
    full stationarity residual; acceptance is the caller's decision.
    """
    N, d = P.shape
    pairs = np.asarray(pairs, dtype=int)
    K = pairs.shape[0]
    isrc = sorted(set(pairs[:, 0].tolist()))
    jsrc = sorted(set(pairs[:, 1].tolist()))
    irow = {i: r for r, i in enumerate(isrc)}
    jrow = {j: r for r, j in enumerate(jsrc)}
    n, m = len(isrc), len(jsrc)
    nv = N + N * d + K

    u = np.array(u0, dtype=float)
    G = np.array(G0, dtype=float)
    lam = np.array(lam0, dtype=float)
    F, Zb, X, Y = _residual(P, wmu, wnu, pairs, irow, jrow, u, G, lam)
    hist = [float(np.linalg.norm(F))]
    for _ in range(max_steps):
        if hist[-1] <= 1e-13:
            break
        J = np.zeros((N + (n + m) * d + K, nv))
        for a in range(K):
            i, j = pairs[a]
            col = N + N * d + a
            J[j, col] += 1.0
            J[i, col] -= 1.0
            r0 = N + irow[i] * d
            J[r0:r0 + d, col] = Zb[a] - X[a]
            # dzbar/dg_q = I/2 and dzbar/dg_p = -I/2 enter both martingale rows
            J[r0:r0 + d, N + j * d:N + (j + 1) * d] += 0.5 * lam[a] * np.eye(d)
            J[r0:r0 + d, N + i * d:N + (i + 1) * d] -= 0.5 * lam[a] * np.eye(d)
            r1 = N + n * d + jrow[j] * d
            J[r1:r1 + d, col] = Zb[a] - Y[a]
            J[r1:r1 + d, N + j * d:N + (j + 1) * d] += 0.5 * lam[a] * np.eye(d)
            J[r1:r1 + d, N + i * d:N + (i + 1) * d] -= 0.5 * lam[a] * np.eye(d)
            rC = N + (n + m) * d + a
            J[rC, j] = 1.0
            J[rC, i] = -1.0
            J[rC, N + i * d:N + (i + 1) * d] = -(Zb[a] - X[a])
            J[rC, N + j * d:N + (j + 1) * d] = Zb[a] - Y[a]
        step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        if not np.all(np.isfinite(step)):
            break
        alpha = 1.0
        base = hist[-1]
        for _ in range(30):
            u_t = u + alpha * step[:N]
            G_t = G + alpha * step[N:N + N * d].reshape(N, d)
            lam_t = lam + alpha * step[N + N * d:]
            F_t, Zb_t, X, Y = _residual(P, wmu, wnu, pairs, irow, jrow,
                                        u_t, G_t, lam_t)
            if np.linalg.norm(F_t) <= (1.0 - 0.25 * alpha) * base:
                break
            alpha *= 0.5
        u, G, lam, F, Zb = u_t, G_t, lam_t, F_t, Zb_t
        hist.append(float(np.linalg.norm(F)))
    return u, G, lam, hist
