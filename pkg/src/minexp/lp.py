"""Linear programming via a self-contained two-phase simplex.

Problems are stated with equality constraints and per-variable bounds
(finite or infinite). ``solve_lp`` converts to standard form internally:
variables are shifted, negated, or split into nonnegative pairs, and finite
two-sided bounds contribute one extra slack row each. Piecewise-linear
objectives (e.g. absolute residuals) are *not* handled here; callers encode
them with the usual nonnegative split variables.

The solver is deterministic: identical inputs take identical pivot
sequences, whichever kernel backend is active.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import _kernels
from .errors import NumericalFailureError
from .linalg import as_matrix, as_vector

PIVOT_TOL = 1e-9
DEGENERACY_LIMIT = 20

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_STATUS = {0: OPTIMAL, 1: INFEASIBLE, 2: UNBOUNDED}


@dataclass(frozen=True)
class LinearProgram:
    """min objective . x  s.t.  eq_matrix @ x == eq_rhs,  lower <= x <= upper."""

    objective: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray
    lower_bounds: np.ndarray
    upper_bounds: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "objective", as_vector(self.objective))
        object.__setattr__(self, "eq_matrix", as_matrix(self.eq_matrix))
        object.__setattr__(self, "eq_rhs", as_vector(self.eq_rhs))
        lb = np.asarray(self.lower_bounds, dtype=float)
        ub = np.asarray(self.upper_bounds, dtype=float)
        object.__setattr__(self, "lower_bounds", lb)
        object.__setattr__(self, "upper_bounds", ub)
        n = self.objective.shape[0]
        m, cols = self.eq_matrix.shape
        if cols != n or lb.shape != (n,) or ub.shape != (n,):
            raise ValueError("objective, matrix columns, and bounds must agree in length")
        if self.eq_rhs.shape[0] != m:
            raise ValueError("eq_rhs length must equal the constraint row count")
        if np.any(np.isnan(lb)) or np.any(np.isnan(ub)):
            raise ValueError("bounds must not be NaN")
        if np.any(lb > ub):
            raise ValueError("lower bound exceeds upper bound")

    @property
    def num_vars(self) -> int:
        return self.objective.shape[0]


@dataclass
class LpSolution:
    status: str
    point: np.ndarray = field(default_factory=lambda: np.zeros(0))
    objective_value: float = np.nan
    iterations: int = 0


def nonneg_lp(objective, eq_matrix, eq_rhs) -> LinearProgram:
    """Convenience constructor for the all-nonnegative-variable case."""
    objective = as_vector(objective)
    n = objective.shape[0]
    return LinearProgram(objective, eq_matrix, eq_rhs, np.zeros(n), np.full(n, np.inf))


def _to_standard_form(lp: LinearProgram):
    """Rewrite with nonnegative variables only.

    Returns (a_std, b_std, c_std, offset, recover) where ``recover`` maps a
    standard-form point back to the original variables.
    """
    a = lp.eq_matrix
    m, n = a.shape
    lb, ub = lp.lower_bounds, lp.upper_bounds

    cols = []          # columns of the standard-form matrix, as (orig_col, sign)
    shift = np.zeros(n)
    var_map = []       # per original var: ("pos", j), ("split", j_pos, j_neg), ("neg", j)
    extra_rows = []    # (std_col_of_var, range) for finite two-sided bounds

    for j in range(n):
        lo, hi = lb[j], ub[j]
        if np.isneginf(lo) and np.isposinf(hi):
            var_map.append(("split", len(cols), len(cols) + 1))
            cols.append((j, 1.0))
            cols.append((j, -1.0))
        elif np.isposinf(hi):
            shift[j] = lo
            var_map.append(("pos", len(cols)))
            cols.append((j, 1.0))
        elif np.isneginf(lo):
            shift[j] = hi
            var_map.append(("neg", len(cols)))
            cols.append((j, -1.0))
        else:
            shift[j] = lo
            var_map.append(("pos", len(cols)))
            extra_rows.append((len(cols), hi - lo))
            cols.append((j, 1.0))

    n_std = len(cols) + len(extra_rows)  # bound rows add one slack each
    m_std = m + len(extra_rows)
    a_std = np.zeros((m_std, n_std))
    c_std = np.zeros(n_std)
    for idx, (j, sign) in enumerate(cols):
        a_std[:m, idx] = sign * a[:, j]
        c_std[idx] = sign * lp.objective[j]
    b_std = np.concatenate([lp.eq_rhs - a @ shift, np.zeros(len(extra_rows))])
    for r, (col_idx, rng) in enumerate(extra_rows):
        a_std[m + r, col_idx] = 1.0
        a_std[m + r, n_std - len(extra_rows) + r] = 1.0
        b_std[m + r] = rng
    offset = float(lp.objective @ shift)

    # Standard form needs b >= 0.
    neg = b_std < 0
    a_std[neg] *= -1.0
    b_std[neg] *= -1.0

    def recover(x_std: np.ndarray) -> np.ndarray:
        x = shift.copy()
        for j, entry in enumerate(var_map):
            if entry[0] == "pos":
                x[j] += x_std[entry[1]]
            elif entry[0] == "neg":
                x[j] -= x_std[entry[1]]
            else:
                x[j] += x_std[entry[1]] - x_std[entry[2]]
        return x

    return a_std, b_std, c_std, offset, recover


def _refine_from_basis(a_std, b_std, basis, x_std):
    """Re-solve the final basis system against the original data.

    Long degenerate pivot sequences erode the tableau numerically; the
    basis itself stays exact, so one dense solve restores full accuracy.
    Returns None when the basis system is too ill-conditioned to help.
    """
    m, n = a_std.shape
    cols = np.where(basis < n, basis, 0)
    bmat = a_std[:, cols].copy()
    for idx in np.flatnonzero(basis >= n):
        bmat[:, idx] = 0.0
        bmat[basis[idx] - n, idx] = 1.0
    try:
        xb = scipy.linalg.solve(bmat, b_std)
    except scipy.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(xb)):
        return None
    refined = np.zeros_like(x_std)
    struct = basis < n
    refined[basis[struct]] = np.maximum(xb[struct], 0.0)
    return refined


def solve_lp(lp: LinearProgram, max_iter: int | None = None,
             degen_limit: int = DEGENERACY_LIMIT) -> LpSolution:
    """Solve to vertex optimality, or report infeasibility/unboundedness.

    Raises NumericalFailureError once the anti-cycling pivot limit (default
    ``50 * (rows + cols)`` of the standard-form problem) is exceeded.
    """
    a_std, b_std, c_std, offset, recover = _to_standard_form(lp)
    if max_iter is None:
        max_iter = 50 * (a_std.shape[0] + a_std.shape[1])
    status_code, x_std, iters, basis = _kernels.simplex_standard(
        a_std, b_std, c_std, max_iter, degen_limit, PIVOT_TOL)
    if status_code == 3:
        raise NumericalFailureError(f"simplex exceeded {max_iter} pivots")
    status = _STATUS[status_code]
    if status != OPTIMAL:
        return LpSolution(status=status, iterations=iters)
    x_std = np.asarray(x_std)
    rhs_scale = float(np.linalg.norm(lp.eq_rhs)) + 1.0

    def residual(xs):
        x = recover(xs)
        r = lp.eq_matrix @ x - lp.eq_rhs if lp.eq_matrix.size else np.zeros(0)
        return x, (float(np.linalg.norm(r)) if r.size else 0.0)

    x, res = residual(x_std)
    if res > 1e-9 * rhs_scale:
        refined = _refine_from_basis(a_std, b_std, np.asarray(basis), x_std)
        if refined is not None:
            x_ref, res_ref = residual(refined)
            if res_ref < res:
                x, res = x_ref, res_ref
    if res > 1e-8 * rhs_scale:
        raise NumericalFailureError("simplex returned an infeasible point")
    value = float(lp.objective @ x)
    return LpSolution(status=OPTIMAL, point=x, objective_value=value, iterations=iters)
