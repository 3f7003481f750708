"""Strong and weak recovery thresholds and finite-size existence bounds.

All entropies and logarithms here are base 2 (consistent numerator and
denominator in the degree bound); the one exception is the gamma1
neighborhood-fraction formula, whose exponential is natural by definition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NoFeasibleAlphaError, NoFeasibleMuError, OutOfDomainError


def binary_entropy(x: float) -> float:
    """Base-2 entropy -x log2 x - (1-x) log2(1-x), with H(0) = H(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise OutOfDomainError(f"entropy argument {x} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x))


def _entropy_arr(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    inner = (x > 0) & (x < 1)
    xi = x[inner]
    out[inner] = -xi * np.log2(xi) - (1.0 - xi) * np.log2(1.0 - xi)
    return out


def strong_min_degree(mu: float, beta: float) -> float:
    """Degree above which (mu*n, (d-1)/d) expanders exist asymptotically.

    Returns (H(mu) + beta H(mu/beta)) / (mu log2(beta/mu)); any integer d
    strictly above it works. Tends to +inf as mu -> beta (returned as a
    sentinel when mu == beta) and to 2 as mu -> 0.
    """
    if not 0.0 < mu <= beta < 1.0:
        raise OutOfDomainError(f"need 0 < mu <= beta < 1, got mu={mu}, beta={beta}")
    if mu == beta:
        return math.inf
    denom = mu * math.log2(beta / mu)
    return (binary_entropy(mu) + beta * binary_entropy(mu / beta)) / denom


def strong_max_mu(beta: float, d: int, tol: float = 1e-10) -> float:
    """Largest mu in (0, beta) with strong_min_degree(mu, beta) < d.

    The degree bound is increasing in mu, so bisection applies; the
    recoverable sparsity fraction of the construction is mu / d.
    """
    if d < 3:
        raise OutOfDomainError("d must be at least 3")
    if not 0.0 < beta < 1.0:
        raise OutOfDomainError(f"beta={beta} outside (0, 1)")
    lo = beta * 1e-12
    if strong_min_degree(lo, beta) >= d:
        raise NoFeasibleMuError(f"degree bound exceeds d={d} on the whole interval")
    hi = beta * (1.0 - 1e-12)
    if strong_min_degree(hi, beta) < d:
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if strong_min_degree(mid, beta) < d:
            lo = mid
        else:
            hi = mid
    return lo


def _log_comb(n: int, k: int) -> float:
    if k < 0 or k > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def existence_prob_bound(n: int, m: int, r0: int, d: int) -> float:
    """Lower bound on the probability that a random graph expands to order r0.

    Evaluates 1 - sum_{r=d}^{r0} C(n,r) C(m,r) C(r,d)^r / C(m,d)^r in
    log space and clamps the result to [0, 1]; r0 < d gives exactly 1.
    """
    if r0 < d:
        return 1.0
    total = 0.0
    log_cmd = _log_comb(m, d)
    for r in range(d, min(r0, n, m) + 1):
        log_term = (_log_comb(n, r) + _log_comb(m, r)
                    + r * (_log_comb(r, d) - log_cmd))
        if log_term > -745.0:
            total += math.exp(log_term)
    return float(min(1.0, max(0.0, 1.0 - total)))


@dataclass
class ThresholdParams:
    """Parameter bundle for threshold evaluation.

    beta = m/n, mu = r0/n, alpha = k/n, d the left degree, and (rho1, rho2)
    the pair of enumeration fractions the weak-bound exponent is evaluated
    at. gamma1 = (1 - e^{-d alpha / beta}) beta is derived on construction.
    """

    beta: float
    mu: float
    alpha: float
    d: int
    rho1: float = 0.0
    rho2: float = 0.0
    gamma1: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.mu < self.beta < 1.0:
            raise OutOfDomainError("need 0 < mu < beta < 1")
        if not 0.0 < self.alpha < 1.0:
            raise OutOfDomainError("need 0 < alpha < 1")
        if self.rho1 < 0 or self.rho2 < 0:
            raise OutOfDomainError("rho fractions must be non-negative")
        if self.rho1 > self.alpha or self.rho2 > 1.0 - self.alpha:
            raise OutOfDomainError("rho fractions exceed their entropy domains")
        self.gamma1 = (1.0 - math.exp(-self.d * self.alpha / self.beta)) * self.beta


def weak_F(p: ThresholdParams) -> float:
    """Exponent controlling failure probability for one random support.

    F(rho1, rho2) = alpha H(rho1/alpha) + (1-alpha) H(rho2/(1-alpha))
    + beta H((rho1+rho2)/beta) + d (rho1+rho2) log2((rho1+rho2)/beta),
    with the 0 log 0 = 0 convention. Negative throughout the relevant
    region means the support is recoverable with high probability.
    """
    tot = p.rho1 + p.rho2
    if tot > p.beta:
        raise OutOfDomainError("rho1 + rho2 exceeds beta")
    val = (p.alpha * binary_entropy(p.rho1 / p.alpha)
           + (1.0 - p.alpha) * binary_entropy(p.rho2 / (1.0 - p.alpha))
           + p.beta * binary_entropy(tot / p.beta))
    if tot > 0:
        val += p.d * tot * math.log2(tot / p.beta)
    return float(val)


def _weak_F_grid(r1: np.ndarray, r2: np.ndarray, alpha: float, beta: float,
                 d: int) -> np.ndarray:
    tot = r1 + r2
    val = (alpha * _entropy_arr(r1 / alpha)
           + (1.0 - alpha) * _entropy_arr(r2 / (1.0 - alpha))
           + beta * _entropy_arr(tot / beta))
    pos = tot > 0
    val[pos] += d * tot[pos] * np.log2(tot[pos] / beta)
    return val


def _weak_region_max(alpha: float, beta: float, d: int, grid: int) -> float:
    """max F over {0 <= rho1 <= alpha, 0 <= rho2 <= 1-alpha,
    0 < rho1+rho2 <= gamma1}, by dense grid plus local refinement."""
    gamma1 = (1.0 - math.exp(-d * alpha / beta)) * beta
    lim1 = min(alpha, gamma1)
    lim2 = min(1.0 - alpha, gamma1)

    def grid_max(lo1, hi1, lo2, hi2, pts):
        r1 = np.linspace(lo1, hi1, pts)
        r2 = np.linspace(lo2, hi2, pts)
        g1, g2 = np.meshgrid(r1, r2, indexing="ij")
        valid = (g1 + g2 <= gamma1) & (g1 + g2 > 0) & (g1 <= alpha) & (g2 <= 1.0 - alpha)
        vals = np.where(valid, _weak_F_grid(g1, g2, alpha, beta, d), -np.inf)
        idx = np.unravel_index(np.argmax(vals), vals.shape)
        return float(vals[idx]), float(g1[idx]), float(g2[idx])

    best, b1, b2 = grid_max(0.0, lim1, 0.0, lim2, grid)
    h1, h2 = lim1 / grid, lim2 / grid
    for _ in range(3):
        refined = grid_max(max(0.0, b1 - h1), min(lim1, b1 + h1),
                           max(0.0, b2 - h2), min(lim2, b2 + h2), 41)
        best = max(best, refined[0])
        b1, b2 = refined[1], refined[2]
        h1, h2 = h1 / 20.0, h2 / 20.0
    return best


def weak_max_alpha(beta: float, d: int, grid: int = 400, tol: float = 1e-9) -> float:
    """Largest sparsity fraction alpha with F < 0 on its whole region.

    Grid-plus-refinement verification carries a one-sided risk (a spike
    between grid points could be missed); the refinement passes around the
    grid maximum mitigate it. Bisection on alpha.
    """
    if d < 3:
        raise OutOfDomainError("d must be at least 3")
    if not 0.0 < beta < 1.0:
        raise OutOfDomainError(f"beta={beta} outside (0, 1)")

    def feasible(alpha: float) -> bool:
        return _weak_region_max(alpha, beta, d, grid) < 0.0

    lo = 1e-6
    if not feasible(lo):
        raise NoFeasibleAlphaError("exponent not negative even at alpha = 1e-6")
    hi = 1.0 - 1e-6
    if feasible(hi):
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo
