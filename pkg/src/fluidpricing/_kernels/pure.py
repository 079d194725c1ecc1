"""Pure-numpy dual active-set solver for small strictly convex box QPs.

Reference twin of the compiled kernel in ``_fast.pyx``: same algorithm,
same constraint ordering, same tie-breaking, so the two backends agree to
floating-point round-off.

Solves
    minimize    0.5 x'Qx + c'x
    subject to  G x <= h,   lo <= x <= hi
with Q symmetric positive definite, by the dual method of Goldfarb and
Idnani: start at the unconstrained minimizer (dual feasible) and add the
most violated constraint one at a time, dropping active constraints whose
multiplier would cross zero. Finite termination for positive definite Q.

Constraints are indexed in the fixed order [rows of G, upper bounds,
lower bounds]; ties in the violation scan and in the dual ratio test are
broken by the lowest index, making the solver deterministic.
"""

import numpy as np

from ..errors import QPSolverError

STATUS_OPTIMAL = 0
STATUS_INFEASIBLE = 1

BACKEND_NAME = "pure"


def solve_qp(Q, c, G, h, lo, hi, max_iter=0):
    """Returns (x, lam, status, iterations).

    lam has one entry per constraint in the order [G rows, upper bounds,
    lower bounds]; it is zero off the final active set. On infeasible
    problems x holds the last iterate and lam is meaningless.
    """
    Q = np.asarray(Q, dtype=float)
    c = np.asarray(c, dtype=float)
    n = Q.shape[0]
    G = np.asarray(G, dtype=float).reshape(-1, n)
    h = np.asarray(h, dtype=float)
    m = G.shape[0]
    M = m + 2 * n

    eye = np.eye(n)
    C = np.vstack([G, eye, -eye])
    b = np.concatenate([h, np.asarray(hi, dtype=float), -np.asarray(lo, dtype=float)])
    # Per-constraint entry tolerance; infinite bounds never activate.
    tol_entry = 1e-10 * (1.0 + np.abs(np.where(np.isfinite(b), b, 0.0)))

    if max_iter <= 0:
        max_iter = 100 * (M + 1)

    x = np.linalg.solve(Q, -c)
    W: list[int] = []
    lam_w: list[float] = []
    iters = 0

    while True:
        viol = C @ x - b
        if W:
            viol[W] = -np.inf
        q = int(np.argmax(viol))
        if not viol[q] > tol_entry[q]:
            lam = np.zeros(M)
            for idx, val in zip(W, lam_w):
                lam[idx] = val
            return x, lam, STATUS_OPTIMAL, iters

        a = C[q]
        lam_plus = 0.0
        while True:
            iters += 1
            if iters > max_iter:
                raise QPSolverError(f"active-set iteration cap {max_iter} exceeded")

            nw = len(W)
            if nw == 0:
                z = np.linalg.solve(Q, a)
                r = np.empty(0)
            else:
                N = C[W].T
                K = np.block([[Q, N], [N.T, np.zeros((nw, nw))]])
                sol = np.linalg.solve(K, np.concatenate([a, np.zeros(nw)]))
                z, r = sol[:n], sol[n:]

            denom = a @ z
            if denom > 1e-13 * max(1.0, a @ a):
                s_full = (a @ x - b[q]) / denom
            else:
                s_full = np.inf

            s_part = np.inf
            drop = -1
            for k in range(nw):
                if r[k] > 1e-13:
                    ratio = lam_w[k] / r[k]
                    if ratio < s_part:
                        s_part = ratio
                        drop = k

            step = min(s_full, s_part)
            if not np.isfinite(step):
                return x, np.zeros(M), STATUS_INFEASIBLE, iters

            if nw:
                x = x - step * z
                lam_w = [lw - step * rk for lw, rk in zip(lam_w, r)]
            else:
                x = x - step * z
            lam_plus += step

            if s_full <= s_part:
                W.append(q)
                lam_w.append(lam_plus)
                break
            del W[drop]
            del lam_w[drop]
