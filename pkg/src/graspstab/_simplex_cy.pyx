# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled simplex pivot kernel (hot loop of every feasibility query).

Mirrors ``_simplex_py.pivot_loop`` exactly; see that module for the
contract. Keep the two implementations pivot-for-pivot identical.
"""

BACKEND = "cython"

OPTIMAL = 0
UNBOUNDED = 1
ITERATION_LIMIT = 2


def pivot_loop(double[:, ::1] T, long long[::1] basis, int enterable,
               double tol, int max_iter):
    cdef int nrows = T.shape[0] - 1
    cdef int ncols = T.shape[1]
    cdef int it, i, j, r, k
    cdef double piv, best, ratio, f, tie_eps
    cdef long long bmin

    for it in range(max_iter):
        # Bland: lowest-index column with negative reduced cost
        j = -1
        for k in range(enterable):
            if T[nrows, k] < -tol:
                j = k
                break
        if j < 0:
            return OPTIMAL

        # ratio test, pass 1: minimal ratio
        r = -1
        best = 0.0
        for i in range(nrows):
            if T[i, j] > tol:
                ratio = T[i, ncols - 1] / T[i, j]
                if r < 0 or ratio < best:
                    r = i
                    best = ratio
        if r < 0:
            return UNBOUNDED

        # pass 2 (Bland): among near-minimal ratios leave the lowest basic index
        tie_eps = 1e-15 * (1.0 + (best if best >= 0 else -best))
        bmin = basis[r]
        for i in range(nrows):
            if T[i, j] > tol:
                ratio = T[i, ncols - 1] / T[i, j]
                if ratio <= best + tie_eps and basis[i] < bmin:
                    bmin = basis[i]
                    r = i

        piv = T[r, j]
        for k in range(ncols):
            T[r, k] /= piv
        for i in range(nrows + 1):
            if i == r:
                continue
            f = T[i, j]
            if f != 0.0:
                for k in range(ncols):
                    T[i, k] -= f * T[r, k]
        for i in range(nrows + 1):
            T[i, j] = 0.0
        T[r, j] = 1.0
        basis[r] = j
    return ITERATION_LIMIT
