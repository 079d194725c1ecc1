# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled dual active-set solver for small strictly convex box QPs.

Mirror of ``pure.solve_qp``: identical algorithm, constraint ordering and
tie-breaking; only the linear algebra is hand-rolled (dense LU with
partial pivoting) so the hot re-solve loop runs without numpy overhead.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fabs

from ..errors import QPSolverError

cnp.import_array()

STATUS_OPTIMAL = 0
STATUS_INFEASIBLE = 1

BACKEND_NAME = "compiled"


cdef int _lu_solve(double* A, double* rhs, int dim) noexcept nogil:
    """Gaussian elimination with partial pivoting, in place. Returns -1 on
    (numerically) singular systems."""
    cdef int i, j, k, piv
    cdef double best, mag, factor, tmp
    for k in range(dim):
        piv = k
        best = fabs(A[k * dim + k])
        for i in range(k + 1, dim):
            mag = fabs(A[i * dim + k])
            if mag > best:
                best = mag
                piv = i
        if best == 0.0:
            return -1
        if piv != k:
            for j in range(dim):
                tmp = A[k * dim + j]
                A[k * dim + j] = A[piv * dim + j]
                A[piv * dim + j] = tmp
            tmp = rhs[k]
            rhs[k] = rhs[piv]
            rhs[piv] = tmp
        for i in range(k + 1, dim):
            factor = A[i * dim + k] / A[k * dim + k]
            if factor != 0.0:
                for j in range(k + 1, dim):
                    A[i * dim + j] -= factor * A[k * dim + j]
                rhs[i] -= factor * rhs[k]
    for k in range(dim - 1, -1, -1):
        tmp = rhs[k]
        for j in range(k + 1, dim):
            tmp -= A[k * dim + j] * rhs[j]
        rhs[k] = tmp / A[k * dim + k]
    return 0


def solve_qp(Q, c, G, h, lo, hi, int max_iter=0):
    """Same contract as the pure backend: (x, lam, status, iterations)."""
    cdef cnp.ndarray[double, ndim=2, mode='c'] Q_ = np.ascontiguousarray(Q, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1, mode='c'] c_ = np.ascontiguousarray(c, dtype=np.float64)
    cdef int n = Q_.shape[0]
    cdef cnp.ndarray[double, ndim=2, mode='c'] G_ = np.ascontiguousarray(
        np.asarray(G, dtype=np.float64).reshape(-1, n))
    cdef cnp.ndarray[double, ndim=1, mode='c'] h_ = np.ascontiguousarray(h, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1, mode='c'] lo_ = np.ascontiguousarray(lo, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1, mode='c'] hi_ = np.ascontiguousarray(hi, dtype=np.float64)
    cdef int m = G_.shape[0]
    cdef int M = m + 2 * n

    # Constraint normals [G rows; +I; -I] and right-hand sides.
    cdef cnp.ndarray[double, ndim=2, mode='c'] C_ = np.zeros((M, n))
    cdef cnp.ndarray[double, ndim=1, mode='c'] b_ = np.empty(M)
    cdef cnp.ndarray[double, ndim=1, mode='c'] tol_entry = np.empty(M)
    cdef int i, j
    for i in range(m):
        for j in range(n):
            C_[i, j] = G_[i, j]
        b_[i] = h_[i]
    for i in range(n):
        C_[m + i, i] = 1.0
        b_[m + i] = hi_[i]
        C_[m + n + i, i] = -1.0
        b_[m + n + i] = -lo_[i]
    for i in range(M):
        if b_[i] == INFINITY or b_[i] == -INFINITY:
            tol_entry[i] = 1e-10
        else:
            tol_entry[i] = 1e-10 * (1.0 + fabs(b_[i]))

    if max_iter <= 0:
        max_iter = 100 * (M + 1)

    cdef cnp.ndarray[double, ndim=1, mode='c'] x = np.empty(n)
    cdef cnp.ndarray[double, ndim=1, mode='c'] lam = np.zeros(M)
    # Work buffers: KKT system is at most (2n) x (2n).
    cdef int kdim_max = 2 * n
    cdef cnp.ndarray[double, ndim=1, mode='c'] K = np.empty(kdim_max * kdim_max)
    cdef cnp.ndarray[double, ndim=1, mode='c'] rhs = np.empty(kdim_max)
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode='c'] W = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1, mode='c'] lam_w = np.empty(n)

    cdef double* Qp = <double*> Q_.data
    cdef double* Cp = <double*> C_.data
    cdef double* bp = <double*> b_.data
    cdef double* xp = <double*> x.data
    cdef double* Kp = <double*> K.data
    cdef double* rp = <double*> rhs.data
    cdef double* lwp = <double*> lam_w.data
    cdef cnp.int64_t* Wp = <cnp.int64_t*> W.data

    # Unconstrained minimizer: solve Q x = -c.
    cdef int kdim = n
    for i in range(n):
        for j in range(n):
            Kp[i * n + j] = Qp[i * n + j]
        rp[i] = -c_[i]
    if _lu_solve(Kp, rp, n) != 0:
        raise QPSolverError("Q is numerically singular")
    for i in range(n):
        xp[i] = rp[i]

    cdef int nw = 0
    cdef int iters = 0
    cdef int q, k, drop, ci, status
    cdef double vmax, v, aTz, aTa, s_full, s_part, step, lam_plus, ratio, acc

    status = STATUS_OPTIMAL
    while True:
        # Most violated constraint outside the working set, lowest index wins ties.
        q = -1
        vmax = -INFINITY
        for i in range(M):
            ci = 0
            for k in range(nw):
                if Wp[k] == i:
                    ci = 1
                    break
            if ci:
                continue
            v = -bp[i]
            for j in range(n):
                v += Cp[i * n + j] * xp[j]
            if v > vmax:
                vmax = v
                q = i
        if q < 0 or not vmax > tol_entry[q]:
            break  # optimal

        lam_plus = 0.0
        while True:
            iters += 1
            if iters > max_iter:
                raise QPSolverError(f"active-set iteration cap {max_iter} exceeded")

            # Solve [Q N; N' 0] [z; r] = [a; 0] with N the active normals.
            kdim = n + nw
            for i in range(kdim):
                for j in range(kdim):
                    Kp[i * kdim + j] = 0.0
            for i in range(n):
                for j in range(n):
                    Kp[i * kdim + j] = Qp[i * n + j]
                rp[i] = Cp[q * n + i]
            for k in range(nw):
                for i in range(n):
                    Kp[i * kdim + (n + k)] = Cp[Wp[k] * n + i]
                    Kp[(n + k) * kdim + i] = Cp[Wp[k] * n + i]
                rp[n + k] = 0.0
            if _lu_solve(Kp, rp, kdim) != 0:
                raise QPSolverError("singular KKT system")
            # rp[:n] = z, rp[n:] = r

            aTz = 0.0
            aTa = 0.0
            for j in range(n):
                aTz += Cp[q * n + j] * rp[j]
                aTa += Cp[q * n + j] * Cp[q * n + j]
            if aTa < 1.0:
                aTa = 1.0
            if aTz > 1e-13 * aTa:
                v = -bp[q]
                for j in range(n):
                    v += Cp[q * n + j] * xp[j]
                s_full = v / aTz
            else:
                s_full = INFINITY

            s_part = INFINITY
            drop = -1
            for k in range(nw):
                if rp[n + k] > 1e-13:
                    ratio = lwp[k] / rp[n + k]
                    if ratio < s_part:
                        s_part = ratio
                        drop = k

            step = s_full if s_full < s_part else s_part
            if step == INFINITY:
                status = STATUS_INFEASIBLE
                break

            for j in range(n):
                xp[j] -= step * rp[j]
            for k in range(nw):
                lwp[k] -= step * rp[n + k]
            lam_plus += step

            if s_full <= s_part:
                Wp[nw] = q
                lwp[nw] = lam_plus
                nw += 1
                break
            # Drop the blocking constraint, keep working on q.
            for k in range(drop, nw - 1):
                Wp[k] = Wp[k + 1]
                lwp[k] = lwp[k + 1]
            nw -= 1
        if status == STATUS_INFEASIBLE:
            break

    if status == STATUS_OPTIMAL:
        for k in range(nw):
            lam[Wp[k]] = lwp[k]
    return x, lam, status, iters
