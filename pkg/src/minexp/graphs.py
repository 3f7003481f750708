"""Left-regular bipartite graphs, expansion checks, and weight perturbation.

A graph with n left nodes, m right nodes, and left degree d is stored as an
(n, d) array of right-node indices, one sorted row per left node (column of
the adjacency matrix). The induced m x n adjacency matrix has column sums
exactly d; ``perturb`` jitters the nonzero entries while rescaling each
column so the sums stay exactly d.

Exhaustive subset checks are budgeted: scans that would visit more than
``budget`` subsets raise TooLargeError (sampling modes are available where
one-sided answers suffice).
"""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import InvalidDegreeError, InvalidEpsilonError, TooLargeError

DEFAULT_BUDGET = 10**8


class BipartiteGraph:
    """Left-d-regular bipartite graph on n left and m right nodes.

    ``allow_repeats`` admits parallel edges (used only by the
    sampling-with-repetition fidelity mode of the sweep harness); everywhere
    else each column holds d distinct right nodes.
    """

    def __init__(self, n: int, m: int, d: int, columns, allow_repeats: bool = False):
        columns = np.asarray(columns, dtype=np.int64)
        if n < 1 or m < 1:
            raise ValueError("n and m must be at least 1")
        if d < 1 or d > m:
            raise InvalidDegreeError(f"degree d={d} must satisfy 1 <= d <= m={m}")
        if columns.shape != (n, d):
            raise ValueError(f"columns must have shape ({n}, {d})")
        if columns.size and (columns.min() < 0 or columns.max() >= m):
            raise ValueError("column entries must lie in [0, m)")
        if np.any(np.diff(columns, axis=1) < 0):
            raise ValueError("column entries must be sorted ascending")
        if not allow_repeats and np.any(np.diff(columns, axis=1) == 0):
            raise ValueError("column entries must be distinct")
        self.n = int(n)
        self.m = int(m)
        self.d = int(d)
        self.columns = columns
        self.columns.setflags(write=False)
        self.has_repeats = bool(np.any(np.diff(columns, axis=1) == 0))

    def __eq__(self, other):
        return (isinstance(other, BipartiteGraph)
                and (self.n, self.m, self.d) == (other.n, other.m, other.d)
                and np.array_equal(self.columns, other.columns))

    def __repr__(self):
        return f"BipartiteGraph(n={self.n}, m={self.m}, d={self.d})"

    @cached_property
    def neighbor_masks(self) -> list:
        """Per-left-node neighborhoods as integer bitsets over right nodes."""
        return [int(sum(1 << int(r) for r in set(col))) for col in self.columns]


class MeasurementMatrix:
    """Nonnegative weighted adjacency with exact column sums d.

    Weights align with ``graph.columns``. ``epsilon1`` records the
    perturbation magnitude used to draw them (0 means the plain 0-1
    adjacency).
    """

    def __init__(self, graph: BipartiteGraph, weights, epsilon1: float, validate: bool = True):
        weights = np.asarray(weights, dtype=float)
        if weights.shape != graph.columns.shape:
            raise ValueError("weights must align with graph columns")
        if validate:
            if not 0.0 <= epsilon1 < 1.0:
                raise InvalidEpsilonError(f"epsilon1={epsilon1} outside [0, 1)")
            if np.any(weights <= 0):
                raise ValueError("weights must be strictly positive")
            sums = weights.sum(axis=1)
            if np.any(np.abs(sums - graph.d) > 1e-12 * graph.d):
                raise ValueError("column weight sums must equal d")
        self.graph = graph
        self.weights = weights
        self.weights.setflags(write=False)
        self.epsilon1 = float(epsilon1)

    @classmethod
    def unperturbed(cls, graph: BipartiteGraph) -> "MeasurementMatrix":
        """The 0-1 adjacency (parallel edges fold into integer entries)."""
        return cls(graph, np.ones_like(graph.columns, dtype=float), 0.0)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def d(self) -> int:
        return self.graph.d

    @cached_property
    def dense(self) -> np.ndarray:
        """The m x n measurement matrix."""
        a = np.zeros((self.graph.m, self.graph.n))
        for j in range(self.graph.n):
            np.add.at(a[:, j], self.graph.columns[j], self.weights[j])
        a.setflags(write=False)
        return a

    @cached_property
    def column_sums(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    def __eq__(self, other):
        return (isinstance(other, MeasurementMatrix)
                and self.graph == other.graph
                and self.epsilon1 == other.epsilon1
                and np.array_equal(self.weights, other.weights))

    def __repr__(self):
        return (f"MeasurementMatrix(n={self.n}, m={self.m}, d={self.d}, "
                f"epsilon1={self.epsilon1})")


def random_left_regular(n: int, m: int, d: int, seed: int,
                        with_repetition: bool = False) -> BipartiteGraph:
    """Draw each column as d right nodes uniformly at random.

    Without repetition (the default) the d entries are distinct. The
    with-repetition variant draws i.i.d. and keeps duplicates as parallel
    edges. Deterministic given the seed.
    """
    if d > m:
        raise InvalidDegreeError(f"degree d={d} exceeds right-node count m={m}")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed)]))
    cols = np.empty((n, d), dtype=np.int64)
    for j in range(n):
        if with_repetition:
            cols[j] = np.sort(rng.integers(0, m, size=d))
        else:
            cols[j] = np.sort(rng.choice(m, size=d, replace=False))
    return BipartiteGraph(n, m, d, cols, allow_repeats=with_repetition)


def neighbors(g: BipartiteGraph, s) -> np.ndarray:
    """Union of the neighborhoods of the left nodes in ``s``, sorted."""
    s = np.asarray(list(s) if isinstance(s, (set, frozenset)) else s, dtype=np.int64)
    if s.size == 0:
        return np.zeros(0, dtype=np.int64)
    if s.min() < 0 or s.max() >= g.n:
        raise ValueError("left-node indices out of range")
    return np.unique(g.columns[s])


def _subset_count(n: int, k: int) -> int:
    return sum(math.comb(n, s) for s in range(1, min(k, n) + 1))


def expansion_violation(g: BipartiteGraph, k: int, eps: float,
                        sample_trials: int | None = None, seed: int = 0,
                        budget: int = DEFAULT_BUDGET):
    """A subset S with |S| <= k and |Gamma(S)| < (1-eps) d |S|, or None.

    Exhaustive mode is exact; sampled mode (``sample_trials`` set) only
    certifies violations it happens to find.
    """
    if k > g.n:
        raise ValueError(f"k={k} exceeds n={g.n}")
    if not 0.0 <= eps < 1.0:
        raise InvalidEpsilonError(f"eps={eps} outside [0, 1)")
    if k == 0:
        return None
    masks = g.neighbor_masks
    req = [0] + [max(0, math.ceil((1.0 - eps) * g.d * s - 1e-9)) for s in range(1, k + 1)]
    if sample_trials is not None:
        rng = np.random.default_rng(np.random.SeedSequence([int(seed)]))
        for _ in range(sample_trials):
            size = int(rng.integers(1, k + 1))
            subset = np.sort(rng.choice(g.n, size=size, replace=False))
            gamma = 0
            for j in subset:
                gamma |= masks[j]
            if gamma.bit_count() < req[size]:
                return [int(j) for j in subset]
        return None
    code, witness = _kernels.expansion_scan(masks, k, req, budget)
    if code == 1:
        raise TooLargeError(f"expansion scan exceeded budget of {budget} subsets")
    return [int(j) for j in witness] if witness else None


def is_expander(g: BipartiteGraph, k: int, eps: float,
                sample_trials: int | None = None, seed: int = 0,
                budget: int = DEFAULT_BUDGET) -> bool:
    """Whether every |S| <= k has |Gamma(S)| >= (1-eps) d |S|."""
    return expansion_violation(g, k, eps, sample_trials, seed, budget) is None


def deficiency_profile(g: BipartiteGraph, t: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """mins[s] = min over |S| = s of |Gamma(S)| - |S|, for s = 1..t."""
    if t > g.n:
        raise ValueError(f"t={t} exceeds n={g.n}")
    code, mins = _kernels.deficiency_scan(g.neighbor_masks, t, budget)
    if code == 1:
        raise TooLargeError(f"deficiency scan exceeded budget of {budget} subsets")
    return np.asarray(mins, dtype=np.int64)


def min_expansion_deficiency(g: BipartiteGraph, t: int,
                             sample_trials: int | None = None, seed: int = 0,
                             budget: int = DEFAULT_BUDGET) -> int:
    """min over nonempty |S| <= t of |Gamma(S)| - |S|.

    Nonnegative exactly when every such subset has a perfect matching into
    its neighborhood (Hall). Sampled mode returns an upper bound on the true
    minimum: a negative sampled value disproves minimal expansion, a
    nonnegative one proves nothing.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    if t > g.n:
        raise ValueError(f"t={t} exceeds n={g.n}")
    if sample_trials is not None:
        rng = np.random.default_rng(np.random.SeedSequence([int(seed)]))
        masks = g.neighbor_masks
        best = g.d - 1  # any singleton
        for _ in range(sample_trials):
            size = int(rng.integers(1, t + 1))
            subset = rng.choice(g.n, size=size, replace=False)
            gamma = 0
            for j in subset:
                gamma |= masks[j]
            best = min(best, gamma.bit_count() - size)
        return int(best)
    mins = deficiency_profile(g, t, budget)
    return int(mins[1:t + 1].min())


def minimal_expansion_order(g: BipartiteGraph, max_t: int | None = None,
                            budget: int = DEFAULT_BUDGET) -> int:
    """Largest t <= max_t with min_expansion_deficiency(g, t) >= 0.

    Any subset larger than m contracts, so the default cap is min(n, m+1).
    """
    if max_t is None:
        max_t = min(g.n, g.m + 1)
    mins = deficiency_profile(g, max_t, budget)
    r0 = 0
    for s in range(1, max_t + 1):
        if mins[s] < 0:
            break
        r0 = s
    return r0


def perturb(g: BipartiteGraph, epsilon1: float, seed: int) -> MeasurementMatrix:
    """Jitter edge weights uniformly in [1-epsilon1, 1+epsilon1].

    Each column is then rescaled multiplicatively so its weight sum is
    exactly d; the rescale keeps every weight inside
    [(1-epsilon1)/(1+epsilon1), (1+epsilon1)/(1-epsilon1)]. Continuous
    sampling makes the dependent-subset event measure zero, which is what
    lifts the complete rank of expanding patterns. Deterministic given seed.
    """
    if not 0.0 < epsilon1 < 1.0:
        raise InvalidEpsilonError(f"epsilon1={epsilon1} outside (0, 1)")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed)]))
    w = rng.uniform(1.0 - epsilon1, 1.0 + epsilon1, size=g.columns.shape)
    w *= g.d / w.sum(axis=1, keepdims=True)
    return MeasurementMatrix(g, w, epsilon1)
