"""Acceptance gate: every stated guarantee at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion. The heavy criteria use the compiled kernels; the whole
module targets a few minutes of wall time.
"""

import itertools
import math

import numpy as np

import minexp
from minexp import (
    MeasurementMatrix,
    binary_entropy,
    complete_rank,
    deficiency_profile,
    is_expander,
    minimal_expansion_order,
    perturb,
    random_left_regular,
    random_sparse_signal,
    reverse_expansion_recovery,
    rip1_check,
    rip1_reference_bounds,
    sample_null_vectors,
    strong_max_mu,
    strong_min_degree,
    strong_recoverable_k,
    weak_max_alpha,
    zero_sum_holds,
)
from minexp.linalg import column_rank
from minexp.recovery import noisy_recovery
from minexp.sweeps import SweepConfig, run_noise_sweep, run_recovery_sweep
from oracles import affine_plane_graph, l1_recovers_uniquely

from test_thresholds import (
    STRONG_MAX_MU_HALF,
    STRONG_MIN_DEGREE_01_05,
    WEAK_F_TABLE,
    WEAK_MAX_ALPHA_HALF_6,
)


def _verdict(criterion, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
    assert ok, f"criterion {criterion} failed: {detail}"


def _signal_on(n, support, rng):
    x = np.zeros(n)
    x[list(support)] = rng.uniform(0.1, 1.1, size=len(support))
    return x


def test_criterion_01_oracle_equivalence():
    # certificates vs exhaustive l1 ground truth on 50 instances, k <= 4
    rng = np.random.default_rng(20240811)
    disagreements = 0
    checked = 0
    for inst in range(50):
        n = 10 + inst % 3
        m = 8 + inst % 2
        g = random_left_regular(n, m, 3, seed=3000 + inst)
        a = perturb(g, 0.1, seed=4000 + inst)
        for k in range(0, 5):
            cert = strong_recoverable_k(a, k)
            truth = True
            supports = itertools.combinations(range(n), k) if k else [()]
            for s in supports:
                for _ in range(20):
                    if not l1_recovers_uniquely(a, _signal_on(n, s, rng)):
                        truth = False
                        break
                if not truth:
                    break
            checked += 1
            if cert != truth:
                disagreements += 1
    _verdict(1, disagreements == 0,
             f"{checked} (instance, k) pairs, {disagreements} disagreements")


def test_criterion_02_perturbation_lifts_rank():
    failures = 0
    orders = []
    for seed in range(20):
        g = random_left_regular(18, 12, 3, seed=seed)
        r0 = minimal_expansion_order(g)
        orders.append(r0)
        a = perturb(g, 0.1, seed=7000 + seed)
        if complete_rank(a, r0).value < r0:
            failures += 1
    _verdict(2, failures == 0,
             f"20 graphs, expansion orders {sorted(set(orders))}, {failures} rank shortfalls")


def test_criterion_03_fast_recovery_validity():
    k, d, n, m = 2, 4, 60, 30
    instances = 0
    seed = 0
    worst_err = 0.0
    bad = 0
    while instances < 10:
        g = random_left_regular(n, m, d, seed=seed)
        seed += 1
        mins = deficiency_profile(g, k * d + 1, budget=10**7)
        if mins[1:k * d + 2].min() < 0:
            continue
        instances += 1
        a = perturb(g, 0.1, seed=8000 + seed)
        rng = np.random.default_rng(9000 + seed)
        for _ in range(200):
            x = random_sparse_signal(n, k, rng).entries
            y = a.dense @ x
            rep = reverse_expansion_recovery(a, y, k, x_true=x)
            err = float(np.abs(rep.estimate - x).max())
            worst_err = max(worst_err, err)
            # rebuild the split independently and confirm the block is
            # genuinely full column rank
            ymax = float(np.abs(y).max())
            t1 = np.abs(y) <= 1e-9 * ymax
            t2 = np.flatnonzero(~t1)
            t1_rows = set(np.flatnonzero(t1).tolist())
            s2 = [j for j in range(n) if not t1_rows.intersection(a.graph.columns[j])]
            block_ok = (not s2) or column_rank(a.dense[np.ix_(t2, s2)]) == len(s2)
            ok = (rep.zero_set_size >= m - k * d and err <= 1e-6
                  and len(s2) <= t2.size and block_ok
                  and rep.diagnostics["survivors"] == len(s2))
            if not ok:
                bad += 1
    _verdict(3, bad == 0,
             f"10 certified instances x 200 trials, worst error {worst_err:.2e}, "
             f"{bad} violations")


def test_criterion_04_noise_robustness_bound():
    g = random_left_regular(40, 30, 4, seed=0)
    k = 3
    lo, hi = 0.0, 0.4999
    assert is_expander(g, k, hi)
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        if is_expander(g, k, mid):
            hi = mid
        else:
            lo = mid
    eps = hi
    factor = (6 - 4 * eps) / (1 - 2 * eps)
    a = MeasurementMatrix.unperturbed(g)
    rng = np.random.default_rng(31)
    worst = 0.0
    violations = 0
    for trial in range(100):
        x = random_sparse_signal(40, k, rng).entries
        scale = [0.01, 0.05, 0.2][trial % 3]
        v = rng.normal(size=30) * scale
        rep = noisy_recovery(a, a.dense @ x + v, k, norm_choice="l1", x_true=x)
        ratio = float(np.abs(x - rep.estimate).sum() / np.abs(v).sum())
        worst = max(worst, ratio)
        if ratio > factor:
            violations += 1
    _verdict(4, violations == 0,
             f"eps={eps:.4f}, bound {factor:.1f}, worst observed ratio {worst:.3f}")


def test_criterion_05_l1_isometry_sandwich():
    g = affine_plane_graph(7, 7)
    k, eps, eps1 = 4, 0.25, 0.1
    assert is_expander(g, k, eps)
    a = perturb(g, eps1, seed=77)
    lo, hi = rip1_check(a, k, eps, trials=500, seed=5)
    ref_lo, ref_hi = rip1_reference_bounds(a.d, eps, eps1)
    ok = lo >= ref_lo - 1e-9 and hi <= ref_hi + 1e-9
    _verdict(5, ok,
             f"500 trials, ratios [{lo:.4f}, {hi:.4f}] within "
             f"[{ref_lo:.4f}, {ref_hi:.4f}]")


def test_criterion_06_null_space_laws():
    zero_sum_bad = 0
    negative_law_bad = 0
    for seed in range(10):
        g = random_left_regular(16, 11, 3, seed=100 + seed)
        a = perturb(g, 0.1, seed=200 + seed)
        if not zero_sum_holds(a, 100, seed):
            zero_sum_bad += 1
        cr = complete_rank(a, 16).value
        floor_negs = math.ceil(cr / a.d)
        for w in sample_null_vectors(a, 100, 300 + seed):
            if abs(float(w.sum())) > 1e-9 * float(np.abs(w).sum()):
                zero_sum_bad += 1
            if int((w < -1e-9).sum()) < floor_negs:
                negative_law_bad += 1
    _verdict(6, zero_sum_bad == 0 and negative_law_bad == 0,
             f"10 matrices x 100 null vectors: {zero_sum_bad} zero-sum and "
             f"{negative_law_bad} negative-count violations")


def test_criterion_07_threshold_consistency():
    problems = []
    mus = [strong_max_mu(0.5, d) for d in range(3, 13)]
    if not all(a < b for a, b in zip(mus, mus[1:])):
        problems.append("strong bound not monotone in d")
    for beta in (0.3, 0.5, 0.7):
        for d in (4, 6, 8):
            if weak_max_alpha(beta, d) <= strong_max_mu(beta, d) / d:
                problems.append(f"weak does not dominate strong at ({beta}, {d})")
    for n in range(1, 61):
        penalty = math.log2(n + 1) / n
        for k in range(n + 1):
            log_c = math.log2(math.comb(n, k))
            h = binary_entropy(k / n)
            if not (n * (h - penalty) <= log_c + 1e-9 <= n * (h + penalty) + 2e-9):
                problems.append(f"binomial sandwich fails at ({n}, {k})")
    if abs(strong_min_degree(0.1, 0.5) - STRONG_MIN_DEGREE_01_05) > 1e-8:
        problems.append("strong_min_degree regression drift")
    for d, ref in STRONG_MAX_MU_HALF.items():
        if abs(strong_max_mu(0.5, d) - ref) > 1e-8:
            problems.append(f"strong_max_mu regression drift at d={d}")
    if abs(weak_max_alpha(0.5, 6) - WEAK_MAX_ALPHA_HALF_6) > 1e-8:
        problems.append("weak_max_alpha regression drift")
    from minexp import ThresholdParams, weak_F
    for (r1, r2), ref in WEAK_F_TABLE.items():
        p = ThresholdParams(beta=0.5, mu=0.25, alpha=0.05, d=6, rho1=r1, rho2=r2)
        if abs(weak_F(p) - ref) > 1e-8:
            problems.append(f"weak_F regression drift at ({r1}, {r2})")
    _verdict(7, not problems, "; ".join(problems) if problems else
             "monotonicity, domination grid, binomial sandwich, frozen constants")


def test_criterion_08_desk_scale_curves():
    problems = []
    grid3 = [10, 20, 30, 40, 50, 60]
    curves = {}
    for eps1 in (0.0, 0.1):
        cfg = SweepConfig(n=200, m=100, d=3, epsilon1=eps1, sparsity_grid=grid3,
                          trials_per_point=50, seed=42, algorithm="l1")
        curves[eps1] = [r.success_fraction for r in run_recovery_sweep(cfg)]
    for k, up, pp in zip(grid3, curves[0.0], curves[0.1]):
        if pp < up:
            problems.append(f"perturbed < unperturbed at k={k} ({pp} < {up})")

    grid6 = [8, 16, 24, 28, 32]
    by_algo = {}
    for algo in ("l1", "alg1"):
        cfg = SweepConfig(n=200, m=100, d=6, epsilon1=0.1, sparsity_grid=grid6,
                          trials_per_point=50, seed=43, algorithm=algo)
        by_algo[algo] = [r.success_fraction for r in run_recovery_sweep(cfg)]
    for k, l1v, a1v in zip(grid6, by_algo["l1"], by_algo["alg1"]):
        if k >= 24 and l1v < a1v:
            problems.append(f"l1 < alg1 at mid-range k={k}")

    cfg = SweepConfig(n=200, m=100, d=6, epsilon1=0.1, sparsity_grid=[8],
                      trials_per_point=100, seed=7, algorithm="alg2-l2",
                      noise_snr_grid=[5, 10, 15, 20, 25, 30, 40])
    sers = [r.mean_ser_db for r in run_noise_sweep(cfg)]
    if not all(a <= b + 1e-12 for a, b in zip(sers, sers[1:])):
        problems.append(f"SER not non-decreasing in SNR: {sers}")

    detail = (f"perturbed {curves[0.1]} vs unperturbed {curves[0.0]}; "
              f"l1 {by_algo['l1']} vs alg1 {by_algo['alg1']}; "
              f"SER {['%.1f' % s for s in sers]}")
    _verdict(8, not problems, "; ".join(problems) if problems else detail)


def test_criterion_09_expansion_order_upgrade():
    checked = 0
    failures = 0
    for n in (4, 6, 8, 10):
        for m in (3, 5, 7, 9):
            for d in (1, 2, 3):
                if d > m:
                    continue
                for seed in (0, 1, 2):
                    g = random_left_regular(n, m, d, seed=10_000 + seed)
                    for k in range(1, min(n, 5) + 1):
                        for eps in (0.25, 0.5, 2 / 3, 1 - 1 / d):
                            if eps > 1 - 1 / d + 1e-12:
                                continue
                            if not is_expander(g, k, eps):
                                continue
                            k2 = min(int(k * (1 - eps) * d), n)
                            checked += 1
                            if not is_expander(g, k2, 1 - 1 / d):
                                failures += 1
    _verdict(9, failures == 0 and checked > 200,
             f"{checked} verified (k, eps) pairs, {failures} implication violations")
