"""Recoverability certification through null-space structure.

For a nonnegative matrix with constant column sums, a support S is
recoverable (every nonnegative signal on S is the unique nonnegative
solution of the measurement equations) exactly when no nonzero null vector
is nonnegative off S. Because every null vector of such a matrix has entries
summing to zero, that existence question is a linear feasibility problem
with the normalization "entries on S sum to -1", which is what
``support_recoverable`` solves. Strong (all-supports) certification,
complete (Kruskal) rank, the two-hop matching condition, and empirical
l1-isometry ratios build on the same machinery.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import (
    InvalidEpsilonError,
    NotConstantColumnSumError,
    NumericalFailureError,
    TooLargeError,
)
from .graphs import DEFAULT_BUDGET, BipartiteGraph, MeasurementMatrix, deficiency_profile, neighbors
from .lp import INFEASIBLE, OPTIMAL, LinearProgram, solve_lp
from .linalg import column_rank, nullspace_basis

RANK_TOL = 1e-10
NULL_RESIDUAL_TOL = 1e-8
SIGN_TOL = 1e-9


@dataclass
class CompleteRankResult:
    """Kruskal rank capped at max_r, with a smallest dependent subset if any.

    ``value == max_r`` means "at least max_r" and carries no witness;
    otherwise ``witness`` has size value + 1 and is rank-deficient while
    every smaller subset is independent.
    """

    value: int
    witness: list = field(default_factory=list)


@dataclass
class SupportCertificate:
    support: np.ndarray
    recoverable: bool
    failing_witness: np.ndarray | None = None


def _require_constant_column_sums(a: MeasurementMatrix) -> float:
    sums = a.column_sums
    ref = float(sums[0])
    if np.any(np.abs(sums - ref) > 1e-9 * max(abs(ref), 1.0)):
        raise NotConstantColumnSumError("column sums differ beyond 1e-9 relative")
    return ref


def complete_rank(a: MeasurementMatrix, max_r: int, tol: float = RANK_TOL,
                  budget: int = DEFAULT_BUDGET) -> CompleteRankResult:
    """Largest r such that every r columns are linearly independent (<= max_r).

    Subsets are enumerated incrementally with Gram-Schmidt rank tests; a
    subset whose neighborhood is smaller than itself is dependent without
    arithmetic. The returned witness is re-verified with a pivoted QR.
    """
    if max_r > a.n:
        raise ValueError(f"max_r={max_r} exceeds n={a.n}")
    code, value, witness = _kernels.complete_rank_scan(
        np.ascontiguousarray(a.dense.T), a.graph.neighbor_masks, max_r, tol, budget)
    if code == 1:
        raise TooLargeError(f"complete-rank scan exceeded budget of {budget} subsets")
    witness = [int(j) for j in witness]
    if witness and column_rank(a.dense[:, witness], tol) >= len(witness):
        raise NumericalFailureError("dependent-subset witness failed QR re-verification")
    return CompleteRankResult(value=int(value), witness=witness)


def sample_null_vectors(a: MeasurementMatrix, trials: int, seed: int,
                        tol: float = RANK_TOL):
    """Random unit-norm elements of the null space (empty if trivial)."""
    basis = nullspace_basis(a.dense, tol)
    if basis.shape[1] == 0:
        return
    rng = np.random.default_rng(np.random.SeedSequence([int(seed)]))
    for _ in range(trials):
        w = basis @ rng.normal(size=basis.shape[1])
        nrm = float(np.linalg.norm(w))
        if nrm > 0:
            yield w / nrm


def zero_sum_holds(a: MeasurementMatrix, trials: int, seed: int) -> bool:
    """Whether sampled null vectors all have |sum of entries| <= 1e-9 * l1 norm.

    True vacuously when the null space is trivial. Constant column sums make
    this an identity; a corrupted column sum shows up immediately.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    for w in sample_null_vectors(a, trials, seed):
        if abs(float(w.sum())) > 1e-9 * float(np.abs(w).sum()):
            return False
    return True


def _as_support(a: MeasurementMatrix, s) -> np.ndarray:
    s = np.asarray(sorted(set(int(i) for i in s)), dtype=np.int64)
    if s.size and (s.min() < 0 or s.max() >= a.n):
        raise ValueError("support indices out of range")
    return s


def support_recoverable(a: MeasurementMatrix, s) -> SupportCertificate:
    """Exact recoverability certificate for one support set.

    Stage one: the columns of s must be linearly independent (otherwise a
    null vector lives inside s itself). Stage two: feasibility of
    {A w = 0, w nonnegative off s, sum of w over s = -1}; a feasible point
    is a certified failure witness. The -1 normalization loses nothing:
    zero-sum forces any off-s-nonnegative null vector not supported inside
    s to have a strictly negative sum over s. For the empty support the
    normalization becomes "sum of w = 1" over nonnegative w.
    """
    _require_constant_column_sums(a)
    s = _as_support(a, s)
    if s.size >= a.n:
        raise ValueError("support must be a proper subset of the columns")
    dense = a.dense

    if s.size:
        sub = dense[:, s]
        if column_rank(sub, RANK_TOL) < s.size:
            inside = nullspace_basis(sub, RANK_TOL)[:, 0]
            w = np.zeros(a.n)
            w[s] = inside
            return SupportCertificate(support=s, recoverable=False, failing_witness=w)

    lower = np.zeros(a.n)
    lower[s] = -np.inf
    upper = np.full(a.n, np.inf)
    norm_row = np.zeros(a.n)
    if s.size:
        norm_row[s] = 1.0
        norm_rhs = -1.0
    else:
        norm_row[:] = 1.0
        norm_rhs = 1.0
    eq = np.vstack([dense, norm_row])
    rhs = np.concatenate([np.zeros(a.m), [norm_rhs]])
    sol = solve_lp(LinearProgram(np.zeros(a.n), eq, rhs, lower, upper))
    if sol.status == OPTIMAL:
        return SupportCertificate(support=s, recoverable=False, failing_witness=sol.point)
    if sol.status != INFEASIBLE:
        raise NumericalFailureError(f"unexpected LP status {sol.status} in support certificate")
    return SupportCertificate(support=s, recoverable=True)


def find_unrecoverable_support(a: MeasurementMatrix, k: int,
                               budget: int = DEFAULT_BUDGET) -> SupportCertificate | None:
    """First size-k support failing its certificate, or None if all pass."""
    if k > a.n:
        raise ValueError(f"k={k} exceeds n={a.n}")
    if k == 0:
        cert = support_recoverable(a, ())
        return None if cert.recoverable else cert
    if math.comb(a.n, k) > budget:
        raise TooLargeError(f"C({a.n},{k}) supports exceed budget of {budget}")
    for s in itertools.combinations(range(a.n), k):
        cert = support_recoverable(a, s)
        if not cert.recoverable:
            return cert
    return None


def strong_recoverable_k(a: MeasurementMatrix, k: int,
                         budget: int = DEFAULT_BUDGET) -> bool:
    """Whether every size-k support is recoverable.

    Equivalently, every nonzero null vector has at least k+1 negative
    entries. Short-circuits on the first failing support.
    """
    return find_unrecoverable_support(a, k, budget) is None


def two_hop_condition(a: MeasurementMatrix, s, budget: int = DEFAULT_BUDGET) -> bool:
    """Matching condition on the two-hop neighborhood of s.

    Builds the subgraph induced by s, its two-hop left nodes, and their
    joint neighborhood, then requires every subset of size up to
    |Gamma(s)| + 1 to expand to at least its own size. For generically
    perturbed weights (matchings become full-rank blocks) this is
    sufficient, never necessary, for support_recoverable(a, s); 0-1
    matrices with coincident columns can satisfy it vacuously.
    """
    s = _as_support(a, s)
    if s.size == 0:
        return True
    g = a.graph
    gamma = neighbors(g, s)
    gamma_set = set(int(r) for r in gamma)
    s_set = set(int(j) for j in s)
    left = [j for j in range(g.n) if j in s_set or gamma_set.intersection(g.columns[j])]
    right = np.unique(g.columns[left])
    remap = {int(r): i for i, r in enumerate(right)}
    cols = np.array([[remap[int(r)] for r in g.columns[j]] for j in left], dtype=np.int64)
    sub = BipartiteGraph(len(left), len(right), g.d, np.sort(cols, axis=1),
                         allow_repeats=g.has_repeats)
    t = min(gamma.size + 1, sub.n)
    mins = deficiency_profile(sub, t, budget)
    return bool(mins[1:t + 1].min() >= 0)


def rip1_reference_bounds(d: int, eps: float, epsilon1: float) -> tuple[float, float]:
    """Reference l1-isometry interval for perturbed expander measurements."""
    return d * (1.0 - 2.0 * eps) * (1.0 - epsilon1) / (1.0 + epsilon1), float(d)


def rip1_check(a: MeasurementMatrix, k: int, eps: float, trials: int,
               seed: int) -> tuple[float, float]:
    """Extremes of |A u|_1 / |u|_1 over random k-sparse signed vectors.

    Nonzero entries are uniform on [-1, -1e-3] union [1e-3, 1] so the
    normalization never degenerates. The caller's graph is assumed (or
    separately verified) to be a (k, eps) expander with eps < 1/2; compare
    the returned pair against ``rip1_reference_bounds``.
    """
    if eps >= 0.5:
        raise InvalidEpsilonError(f"eps={eps} must be < 0.5")
    if not 1 <= k <= a.n:
        raise ValueError(f"k={k} out of range")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed)]))
    dense = a.dense
    lo, hi = np.inf, -np.inf
    for _ in range(trials):
        support = rng.choice(a.n, size=k, replace=False)
        vals = rng.uniform(1e-3, 1.0, size=k) * rng.choice([-1.0, 1.0], size=k)
        u = np.zeros(a.n)
        u[support] = vals
        ratio = float(np.abs(dense @ u).sum() / np.abs(u).sum())
        lo = min(lo, ratio)
        hi = max(hi, ratio)
    return lo, hi
