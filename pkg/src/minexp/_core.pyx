# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: simplex pivoting and subset-scan inner loops.

Mirrors ``minexp._kernels.pycore`` operation for operation (same pivot
rules, tie-breaking, pruning, and floating-point order; the module is built
with -ffp-contract=off so arithmetic matches the numpy fallback). Subset
scans here use 64-bit neighborhood masks; wider problems stay on the Python
path.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long x)

cdef double RHS_CLAMP = 1e-10
cdef long long INF_DEF = <long long>1 << 60


cdef inline void _clamp_rhs(double[:, ::1] t, Py_ssize_t m, Py_ssize_t rhs) noexcept:
    cdef Py_ssize_t i
    for i in range(m):
        if t[i, rhs] < 0.0 and t[i, rhs] > -RHS_CLAMP:
            t[i, rhs] = 0.0


cdef Py_ssize_t UNBOUNDED_ROW = -1
cdef Py_ssize_t NUMERICAL_ROW = -2


cdef inline Py_ssize_t _choose_row(double[:, ::1] t, long long[::1] basis,
                                   Py_ssize_t m, Py_ssize_t e, Py_ssize_t rhs,
                                   double tol, bint bland, double* ratio_out) noexcept:
    # Same guards as the Python kernel: negative rhs counts as zero in the
    # ratio, pivot eligibility is relative to the column maximum, and ratio
    # ties break toward the largest pivot (Dantzig) or lowest basis index
    # (Bland).
    cdef Py_ssize_t i, best_i = -1
    cdef double piv, r, ratio, colmax = 0.0, elig, rmin = -1.0, thresh, best_piv = 0.0
    for i in range(m):
        if t[i, e] > colmax:
            colmax = t[i, e]
    ratio_out[0] = 0.0
    if colmax <= tol:
        return UNBOUNDED_ROW
    elig = tol if tol > 1e-9 * colmax else 1e-9 * colmax
    for i in range(m):
        piv = t[i, e]
        if piv > elig:
            r = t[i, rhs]
            ratio = (r if r > 0.0 else 0.0) / piv
            if rmin < 0.0 or ratio < rmin:
                rmin = ratio
    if rmin < 0.0:
        return NUMERICAL_ROW
    thresh = rmin + 1e-9 + 1e-9 * rmin
    for i in range(m):
        piv = t[i, e]
        if piv > elig:
            r = t[i, rhs]
            if (r if r > 0.0 else 0.0) / piv <= thresh:
                if bland:
                    if best_i < 0 or basis[i] < basis[best_i]:
                        best_i = i
                elif best_i < 0 or piv > best_piv or (piv == best_piv and basis[i] < basis[best_i]):
                    best_i = i
                    best_piv = piv
    ratio_out[0] = rmin
    return best_i


cdef inline void _pivot(double[:, ::1] t, double[::1] z, long long[::1] basis,
                        Py_ssize_t best_i, Py_ssize_t e,
                        Py_ssize_t m, Py_ssize_t width, Py_ssize_t rhs) noexcept:
    cdef Py_ssize_t i, j
    cdef double piv = t[best_i, e]
    cdef double f, ze
    for j in range(width):
        t[best_i, j] /= piv
    for i in range(m):
        if i == best_i:
            continue
        f = t[i, e]
        if f != 0.0:
            for j in range(width):
                t[i, j] -= f * t[best_i, j]
    ze = z[e]
    if ze != 0.0:
        for j in range(width):
            z[j] -= ze * t[best_i, j]
    basis[best_i] = e
    _clamp_rhs(t, m, rhs)


cdef int _run_phase(double[:, ::1] t, double[::1] z, long long[::1] basis,
                    Py_ssize_t n, Py_ssize_t m, Py_ssize_t rhs, double tol,
                    long long degen_limit, long long max_iter, long long* iters,
                    bint detect_unbounded, double stop_at) noexcept:
    cdef long long degen = 0
    cdef Py_ssize_t e, j, best_i
    cdef double best, ratio
    cdef Py_ssize_t width = rhs + 1
    cdef bint bland
    while True:
        if -z[rhs] <= stop_at:
            return 0
        bland = degen >= degen_limit
        if bland:
            e = -1
            for j in range(n):
                if z[j] < -tol:
                    e = j
                    break
            if e < 0:
                return 0
        else:
            e = 0
            best = z[0]
            for j in range(1, n):
                if z[j] < best:
                    best = z[j]
                    e = j
            if z[e] >= -tol:
                return 0
        best_i = _choose_row(t, basis, m, e, rhs, tol, bland, &ratio)
        if best_i == UNBOUNDED_ROW:
            return 2 if detect_unbounded else 3
        if best_i == NUMERICAL_ROW:
            return 3
        if iters[0] >= max_iter:
            return 3
        iters[0] += 1
        if ratio <= tol:
            degen += 1
        else:
            degen = 0
        _pivot(t, z, basis, best_i, e, m, width, rhs)


def simplex_standard(const double[:, ::1] a, const double[::1] b, const double[::1] c,
                     long long max_iter, long long degen_limit, double tol):
    """Two-phase simplex for min c.x s.t. a x = b (b >= 0), x >= 0."""
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    cdef Py_ssize_t total = n + m
    cdef Py_ssize_t i, j, e
    cdef double bsum = 0.0, feas_tol
    cdef long long iters = 0
    cdef int status

    if m == 0:
        return 0, np.zeros(n), 0, np.zeros(0, dtype=np.int64)
    if n == 0:
        for i in range(m):
            bsum += abs(b[i])
        status = 0 if bsum <= 1e-8 * (1.0 + bsum) else 1
        return status, np.zeros(0), 0, np.arange(n, n + m, dtype=np.int64)

    t_arr = np.zeros((m, total + 1))
    z_arr = np.zeros(total + 1)
    basis_arr = np.arange(n, n + m, dtype=np.int64)
    cdef double[:, ::1] t = t_arr
    cdef double[::1] z = z_arr
    cdef long long[::1] basis = basis_arr

    for i in range(m):
        for j in range(n):
            t[i, j] = a[i, j]
        t[i, n + i] = 1.0
        t[i, total] = b[i]
    for i in range(m):
        for j in range(n):
            z[j] -= t[i, j]
        z[total] -= t[i, total]

    for i in range(m):
        bsum += abs(b[i])
    feas_tol = 1e-8 * (1.0 + bsum)
    status = _run_phase(t, z, basis, n, m, total, tol, degen_limit, max_iter, &iters,
                        0, 0.1 * feas_tol)
    if status != 0:
        return 3, np.zeros(n), iters, basis_arr
    if -z[total] > feas_tol:
        return 1, np.zeros(n), iters, basis_arr

    for i in range(m):
        if basis[i] >= n:
            e = -1
            for j in range(n):
                if abs(t[i, j]) > tol:
                    e = j
                    break
            if e >= 0:
                iters += 1
                _pivot(t, z, basis, i, e, m, total + 1, total)

    cdef double cbi
    for j in range(total + 1):
        z[j] = 0.0
    for j in range(n):
        z[j] = c[j]
    for i in range(m):
        if basis[i] < n:
            cbi = c[basis[i]]
            if cbi != 0.0:
                for j in range(n):
                    z[j] -= cbi * t[i, j]
                z[total] -= cbi * t[i, total]

    status = _run_phase(t, z, basis, n, m, total, tol, degen_limit, max_iter, &iters,
                        1, -np.inf)
    if status != 0:
        return status, np.zeros(n), iters, basis_arr

    x_arr = np.zeros(n)
    cdef double[::1] x = x_arr
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = t[i, total] if t[i, total] > 0.0 else 0.0
    return 0, x_arr, iters, basis_arr


def expansion_scan(const cnp.uint64_t[::1] masks, long long k, const long long[::1] req,
                   long long budget):
    """First subset S (|S| <= k, lex order) with |Gamma(S)| < req[|S|]."""
    cdef Py_ssize_t n = masks.shape[0]
    cdef long long kk = k if k < n else n
    cdef long long visited = 0
    cdef long long req_max = req[kk] if kk >= 1 else 0
    cdef Py_ssize_t depth = 0
    cdef long long s, g
    cdef unsigned long long u
    if kk == 0:
        return 0, []
    stack_j_arr = np.zeros(kk + 1, dtype=np.int64)
    stack_u_arr = np.zeros(kk + 1, dtype=np.uint64)
    cdef long long[::1] stack_j = stack_j_arr
    cdef cnp.uint64_t[::1] stack_u = stack_u_arr
    while depth >= 0:
        if stack_j[depth] >= n:
            depth -= 1
            if depth >= 0:
                stack_j[depth] += 1
            continue
        u = stack_u[depth] | masks[stack_j[depth]]
        s = depth + 1
        visited += 1
        if visited > budget:
            return 1, []
        g = __builtin_popcountll(u)
        if g < req[s]:
            return 0, [stack_j[i] for i in range(depth + 1)]
        if s < kk and g < req_max:
            stack_j[depth + 1] = stack_j[depth] + 1
            stack_u[depth + 1] = u
            depth += 1
        else:
            stack_j[depth] += 1
    return 0, []


def deficiency_scan(const cnp.uint64_t[::1] masks, long long t, long long budget):
    """Per-size minima of |Gamma(S)| - |S| over nonempty subsets, |S| <= t."""
    cdef Py_ssize_t n = masks.shape[0]
    cdef long long tt = t if t < n else n
    mins_arr = np.full(tt + 1, INF_DEF, dtype=np.int64)
    cdef long long[::1] mins = mins_arr
    if tt == 0:
        return 0, mins_arr
    cdef long long visited = 0
    cdef long long thresh = INF_DEF
    cdef Py_ssize_t depth = 0
    cdef long long s, g, q, cand
    cdef unsigned long long u
    stack_j_arr = np.zeros(tt + 1, dtype=np.int64)
    stack_u_arr = np.zeros(tt + 1, dtype=np.uint64)
    cdef long long[::1] stack_j = stack_j_arr
    cdef cnp.uint64_t[::1] stack_u = stack_u_arr
    while depth >= 0:
        if stack_j[depth] >= n:
            depth -= 1
            if depth >= 0:
                stack_j[depth] += 1
            continue
        u = stack_u[depth] | masks[stack_j[depth]]
        s = depth + 1
        visited += 1
        if visited > budget:
            return 1, mins_arr
        g = __builtin_popcountll(u)
        if g - s < mins[s]:
            mins[s] = g - s
            thresh = mins[1] + 1
            for q in range(2, tt + 1):
                cand = mins[q] + q
                if cand > thresh:
                    thresh = cand
        if s < tt and g < thresh:
            stack_j[depth + 1] = stack_j[depth] + 1
            stack_u[depth + 1] = u
            depth += 1
        else:
            stack_j[depth] += 1
    return 0, mins_arr


def complete_rank_scan(const double[:, ::1] cols, const cnp.uint64_t[::1] masks,
                       long long max_r, double tol, long long budget):
    """Smallest dependent column subset of size <= max_r (columns as rows)."""
    cdef Py_ssize_t n = cols.shape[0]
    cdef Py_ssize_t mdim = cols.shape[1]
    cdef long long cap = max_r if max_r < n else n
    if cap == 0:
        return 0, 0, []
    cdef long long best = cap + 1
    cdef list witness = []
    cdef long long visited = 0
    cdef Py_ssize_t depth = 0
    cdef long long s
    cdef unsigned long long u
    cdef Py_ssize_t i, j, col
    cdef double dot, nrm, colnorm

    stack_j_arr = np.zeros(cap + 1, dtype=np.int64)
    stack_u_arr = np.zeros(cap + 1, dtype=np.uint64)
    qbuf_arr = np.zeros((cap, mdim))
    vbuf_arr = np.zeros(mdim)
    norms_arr = np.sqrt(np.einsum("ij,ij->i", np.asarray(cols), np.asarray(cols)))
    cdef long long[::1] stack_j = stack_j_arr
    cdef cnp.uint64_t[::1] stack_u = stack_u_arr
    cdef double[:, ::1] qbuf = qbuf_arr
    cdef double[::1] v = vbuf_arr
    cdef double[::1] norms = norms_arr

    while depth >= 0:
        if stack_j[depth] >= n:
            depth -= 1
            if depth >= 0:
                stack_j[depth] += 1
            continue
        s = depth + 1
        if s >= best:
            stack_j[depth] = n
            continue
        col = stack_j[depth]
        u = stack_u[depth] | masks[col]
        visited += 1
        if visited > budget:
            return 1, (best - 1 if best - 1 < cap else cap), witness
        if __builtin_popcountll(u) < s:
            best = s
            witness = [stack_j[i] for i in range(depth + 1)]
            stack_j[depth] += 1
            continue
        for i in range(mdim):
            v[i] = cols[col, i]
        for j in range(depth):
            dot = 0.0
            for i in range(mdim):
                dot += qbuf[j, i] * v[i]
            for i in range(mdim):
                v[i] -= dot * qbuf[j, i]
        for j in range(depth):
            dot = 0.0
            for i in range(mdim):
                dot += qbuf[j, i] * v[i]
            for i in range(mdim):
                v[i] -= dot * qbuf[j, i]
        nrm = 0.0
        for i in range(mdim):
            nrm += v[i] * v[i]
        nrm = nrm ** 0.5
        if nrm <= tol * norms[col]:
            best = s
            witness = [stack_j[i] for i in range(depth + 1)]
            stack_j[depth] += 1
            continue
        if s < cap:
            for i in range(mdim):
                qbuf[depth, i] = v[i] / nrm
            stack_j[depth + 1] = stack_j[depth] + 1
            stack_u[depth + 1] = u
            depth += 1
        else:
            stack_j[depth] += 1
    return 0, (best - 1 if best - 1 < cap else cap), witness
