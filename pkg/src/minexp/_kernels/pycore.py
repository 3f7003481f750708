"""Pure-Python reference kernels.

These are the fallback implementations of the four hot inner loops:

* two-phase dense-tableau simplex on standard-form problems,
* exhaustive expansion checking over column subsets,
* per-size neighborhood-deficiency minima over column subsets,
* smallest-dependent-subset search (Kruskal rank) with incremental
  Gram-Schmidt rank tests.

The compiled extension ``minexp._core`` implements the same functions with
identical pivot rules, tie-breaking, pruning, and floating-point operation
order, so the two backends are interchangeable. Subset scans here use
arbitrary-precision Python ints as neighborhood bitsets, which also covers
right-node counts beyond the 64-bit fast path of the compiled core.

Status codes shared by both backends:

* simplex: 0 optimal, 1 infeasible, 2 unbounded, 3 iteration limit
* scans:   0 completed, 1 node budget exceeded
"""

from __future__ import annotations

import numpy as np

RATIO_TOL = 1e-9
RHS_CLAMP = 1e-10
_INF_DEF = 1 << 60


def _clamp_rhs(t: np.ndarray, rhs_col: int) -> None:
    col = t[:, rhs_col]
    np.copyto(col, 0.0, where=(col < 0.0) & (col > -RHS_CLAMP))


_UNBOUNDED = -1
_NUMERICAL = -2


def _choose_row(t, basis, m, e, rhs_col, tol, bland):
    """Minimum-ratio row for entering column e.

    Stability guards: slightly negative right-hand sides count as zero in
    the ratio (they are degeneracy noise, and negative ratios would win the
    test and amplify), and pivot eligibility is relative to the column's
    largest entry so noise-scale pivots never blow the tableau up. Rows
    whose ratio ties the minimum within the 1e-9 ratio tolerance are broken
    toward the largest pivot element (numerical safety) under the Dantzig
    rule and toward the lowest basis index under Bland's rule (anti-cycling).
    """
    colmax = 0.0
    for i in range(m):
        if t[i, e] > colmax:
            colmax = t[i, e]
    if colmax <= tol:
        return _UNBOUNDED, 0.0
    elig = tol if tol > 1e-9 * colmax else 1e-9 * colmax
    rmin = -1.0
    for i in range(m):
        piv = t[i, e]
        if piv > elig:
            r = t[i, rhs_col]
            ratio = (r if r > 0.0 else 0.0) / piv
            if rmin < 0.0 or ratio < rmin:
                rmin = ratio
    if rmin < 0.0:
        return _NUMERICAL, 0.0
    thresh = rmin + 1e-9 + 1e-9 * rmin
    best_i = -1
    best_piv = 0.0
    for i in range(m):
        piv = t[i, e]
        if piv > elig:
            r = t[i, rhs_col]
            if (r if r > 0.0 else 0.0) / piv <= thresh:
                if bland:
                    if best_i < 0 or basis[i] < basis[best_i]:
                        best_i = i
                elif best_i < 0 or piv > best_piv or (piv == best_piv and basis[i] < basis[best_i]):
                    best_i = i
                    best_piv = piv
    return best_i, rmin


def _pivot(t, z, basis, best_i, e, rhs_col):
    piv = t[best_i, e]
    t[best_i, :] /= piv
    row = t[best_i, :].copy()
    factors = t[:, e].copy()
    t -= np.outer(factors, row)
    t[best_i, :] = row
    z -= z[e] * row
    basis[best_i] = e
    _clamp_rhs(t, rhs_col)


def _run_phase(t, z, basis, n, m, rhs_col, tol, degen_limit, max_iter, iters,
               detect_unbounded, stop_at=-np.inf):
    """Pivot until the reduced costs of structural columns are nonnegative.

    ``stop_at`` short-circuits once the phase objective (-z[rhs]) falls to
    that level; phase 1 is bounded below by zero, so reaching ~0 is optimal
    and further certification pivots are pure degeneracy churn.

    Returns (status, iters); status 0 done, 2 unbounded, 3 iteration limit.
    """
    degen = 0
    while True:
        if -z[rhs_col] <= stop_at:
            return 0, iters
        bland = degen >= degen_limit
        if bland:
            # Bland: lowest structural index with a negative reduced cost.
            e = -1
            for j in range(n):
                if z[j] < -tol:
                    e = j
                    break
            if e < 0:
                return 0, iters
        else:
            e = int(np.argmin(z[:n]))
            if z[e] >= -tol:
                return 0, iters
        best_i, best_ratio = _choose_row(t, basis, m, e, rhs_col, tol, bland)
        if best_i == _UNBOUNDED:
            return (2 if detect_unbounded else 3), iters
        if best_i == _NUMERICAL:
            return 3, iters
        if iters >= max_iter:
            return 3, iters
        iters += 1
        degen = degen + 1 if best_ratio <= tol else 0
        _pivot(t, z, basis, best_i, e, rhs_col)


def simplex_standard(a, b, c, max_iter, degen_limit, tol=RATIO_TOL):
    """Two-phase simplex for  min c.x  s.t.  a x = b, x >= 0,  with b >= 0.

    Entering rule is Dantzig (most negative reduced cost, lowest index on
    ties) with Bland's rule engaged while the degenerate-pivot streak is at
    least ``degen_limit``. Artificial variables never re-enter the basis.

    Returns (status, x, iters).
    """
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    c = np.ascontiguousarray(c, dtype=float)
    m, n = a.shape
    if m == 0:
        return 0, np.zeros(n), 0, np.zeros(0, dtype=np.int64)
    if n == 0:
        bsum = float(np.abs(b).sum())
        status = 0 if bsum <= 1e-8 * (1.0 + bsum) else 1
        return status, np.zeros(0), 0, np.arange(n, n + m, dtype=np.int64)
    total = n + m
    t = np.zeros((m, total + 1))
    t[:, :n] = a
    t[np.arange(m), n + np.arange(m)] = 1.0
    t[:, total] = b
    basis = np.arange(n, n + m, dtype=np.int64)

    # Phase 1: minimize the artificial sum. With the all-artificial basis the
    # reduced cost of structural column j is -sum_i a[i, j]. Accumulate row by
    # row so the compiled backend rounds identically.
    z = np.zeros(total + 1)
    for i in range(m):
        z[:n] -= t[i, :n]
        z[total] -= t[i, total]

    feas_tol = 1e-8 * (1.0 + float(np.abs(b).sum()))
    status, iters = _run_phase(t, z, basis, n, m, total, tol, degen_limit, max_iter, 0,
                               False, stop_at=0.1 * feas_tol)
    if status != 0:
        return 3, np.zeros(n), iters, basis
    if -z[total] > feas_tol:
        return 1, np.zeros(n), iters, basis

    # Drive artificials out of the basis where a structural pivot exists;
    # rows with none are redundant and keep a zero-valued artificial.
    for i in range(m):
        if basis[i] >= n:
            e = -1
            for j in range(n):
                if abs(t[i, j]) > tol:
                    e = j
                    break
            if e >= 0:
                iters += 1
                _pivot(t, z, basis, i, e, total)

    # Phase 2 reduced costs from scratch (redundant-row artificials cost 0).
    cb = np.where(basis < n, c[np.minimum(basis, n - 1)], 0.0)
    z = np.zeros(total + 1)
    z[:n] = c
    for i in range(m):
        if cb[i] != 0.0:
            z[:n] -= cb[i] * t[i, :n]
            z[total] -= cb[i] * t[i, total]

    status, iters = _run_phase(t, z, basis, n, m, total, tol, degen_limit, max_iter, iters, True)
    if status != 0:
        return status, np.zeros(n), iters, basis

    x = np.zeros(n)
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = max(t[i, total], 0.0)
    return 0, x, iters, basis


def expansion_scan(masks, k, req, budget):
    """Search subsets S, |S| <= k, violating popcount(union) >= req[|S|].

    ``req`` must be nondecreasing. Returns (code, witness); witness is the
    lexicographically first violating subset, or an empty list if none.
    """
    n = len(masks)
    k = min(k, n)
    visited = 0
    req_max = req[k] if k >= 1 else 0
    stack_j = [0]
    stack_u = [0]
    while stack_j:
        depth = len(stack_j) - 1
        j = stack_j[-1]
        if j >= n:
            stack_j.pop()
            stack_u.pop()
            if stack_j:
                stack_j[-1] += 1
            continue
        u = stack_u[-1] | masks[j]
        s = depth + 1
        visited += 1
        if visited > budget:
            return 1, []
        g = u.bit_count()
        if g < req[s]:
            return 0, list(stack_j)
        if s < k and g < req_max:
            stack_j.append(j + 1)
            stack_u.append(u)
        else:
            stack_j[-1] += 1
    return 0, []


def deficiency_scan(masks, t, budget):
    """Per-size minima of |Gamma(S)| - |S| over nonempty subsets of size <= t.

    Returns (code, mins) with mins[s] the minimum over |S| = s (index 0
    unused). Branch-and-bound: a subtree below a prefix with neighborhood
    size g cannot beat mins[s'] at size s' unless g < mins[s'] + s'.
    """
    n = len(masks)
    t = min(t, n)
    mins = np.full(t + 1, _INF_DEF, dtype=np.int64)
    if t == 0:
        return 0, mins
    visited = 0
    thresh = _INF_DEF  # max over s' of mins[s'] + s'; recomputed when mins drops
    stack_j = [0]
    stack_u = [0]
    while stack_j:
        depth = len(stack_j) - 1
        j = stack_j[-1]
        if j >= n:
            stack_j.pop()
            stack_u.pop()
            if stack_j:
                stack_j[-1] += 1
            continue
        u = stack_u[-1] | masks[j]
        s = depth + 1
        visited += 1
        if visited > budget:
            return 1, mins
        g = u.bit_count()
        if g - s < mins[s]:
            mins[s] = g - s
            thresh = max(int(mins[q]) + q for q in range(1, t + 1))
        if s < t and g < thresh:
            stack_j.append(j + 1)
            stack_u.append(u)
        else:
            stack_j[-1] += 1
    return 0, mins


def complete_rank_scan(cols, masks, max_r, tol, budget):
    """Smallest linearly dependent column subset of size <= max_r.

    ``cols`` holds the matrix columns as rows (n x m). A subset whose
    neighborhood is smaller than the subset is dependent outright; all other
    rank decisions use twice-reorthogonalized Gram-Schmidt residuals with a
    relative threshold ``tol``.

    Returns (code, value, witness): value = min(smallest dependent size - 1,
    max_r); witness is a smallest dependent subset, empty when value == max_r.
    """
    cols = np.asarray(cols, dtype=float)
    n = cols.shape[0]
    max_r = min(max_r, n)
    if max_r == 0:
        return 0, 0, []
    norms = np.sqrt((cols * cols).sum(axis=1))
    best = max_r + 1
    witness: list[int] = []
    visited = 0
    stack_j = [0]
    stack_u = [0]
    qstack: list[np.ndarray] = []
    while stack_j:
        depth = len(stack_j) - 1
        j = stack_j[-1]
        if j >= n:
            stack_j.pop()
            stack_u.pop()
            if qstack:
                qstack.pop()
            if stack_j:
                stack_j[-1] += 1
            continue
        s = depth + 1
        if s >= best:
            stack_j[-1] = n  # nothing below can improve; force pop
            continue
        u = stack_u[-1] | masks[j]
        visited += 1
        if visited > budget:
            return 1, min(best - 1, max_r), witness
        if u.bit_count() < s:
            best = s
            witness = list(stack_j)
            stack_j[-1] += 1
            continue
        v = cols[j].copy()
        for q in qstack:
            v -= (q @ v) * q
        for q in qstack:
            v -= (q @ v) * q
        nrm = float(np.sqrt(v @ v))
        if nrm <= tol * norms[j]:
            best = s
            witness = list(stack_j)
            stack_j[-1] += 1
            continue
        if s < max_r:
            qstack.append(v / nrm)
            stack_j.append(j + 1)
            stack_u.append(u)
        else:
            stack_j[-1] += 1
    return 0, min(best - 1, max_r), witness
