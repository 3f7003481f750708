#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Covers the hot loops on workloads shaped like the certification and sweep
code paths: batches of small certification-sized LPs, desk-scale recovery
LPs, subset deficiency scans, and complete-rank scans. Run from the
repository root:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from minexp import MeasurementMatrix, perturb, random_left_regular
from minexp._kernels import pycore

try:
    from minexp import _core
except ImportError:
    _core = None


def _bench(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _lp_batch(n_graph, m_graph, d, k, count, seed):
    """Recovery-shaped LPs: min sum(x) s.t. Ax = y over x >= 0."""
    batch = []
    for i in range(count):
        a = perturb(random_left_regular(n_graph, m_graph, d, seed=seed + i),
                    0.1, seed=seed + 1000 + i)
        rng = np.random.default_rng(seed + 2000 + i)
        x = np.zeros(n_graph)
        x[rng.choice(n_graph, size=k, replace=False)] = rng.uniform(0.1, 1.1, size=k)
        batch.append((np.ascontiguousarray(a.dense),
                      np.ascontiguousarray(a.dense @ x),
                      np.ones(n_graph)))
    return batch


def _graph_inputs(n, m, d, seed):
    g = random_left_regular(n, m, d, seed=seed)
    a = perturb(g, 0.1, seed=seed + 1)
    masks = g.neighbor_masks
    return masks, np.ascontiguousarray(np.asarray(a.dense).T)


def main():
    small = _lp_batch(12, 9, 3, 2, count=400, seed=0)
    large = _lp_batch(200, 100, 3, 15, count=5, seed=50)
    masks18, dense18 = _graph_inputs(18, 12, 3, seed=90)
    masks60, _ = _graph_inputs(60, 30, 4, seed=91)
    m18 = np.array(masks18, dtype=np.uint64)
    m60 = np.array(masks60, dtype=np.uint64)

    def run_simplex(mod, batch):
        for a, b, c in batch:
            status, _, _, _ = mod.simplex_standard(a, b, c, 50000, 20, 1e-9)
            assert status == 0

    cases = [
        ("simplex 9x12 x400", lambda mod: run_simplex(mod, small)),
        ("simplex 100x200 x5", lambda mod: run_simplex(mod, large)),
        ("deficiency scan n=60 t=9", lambda mod: mod.deficiency_scan(
            m60 if mod is _core else masks60, 9, 10**8)),
        ("deficiency scan n=18 t=13", lambda mod: mod.deficiency_scan(
            m18 if mod is _core else masks18, 13, 10**8)),
        ("complete rank n=18 r=9", lambda mod: mod.complete_rank_scan(
            dense18, m18 if mod is _core else masks18, 9, 1e-10, 10**8)),
    ]

    print(f"{'kernel':<28} {'python':>10} {'compiled':>10} {'speedup':>9}")
    for name, fn in cases:
        t_py = _bench(lambda: fn(pycore))
        if _core is None:
            print(f"{name:<28} {t_py:>9.3f}s {'n/a':>10} {'n/a':>9}")
            continue
        t_c = _bench(lambda: fn(_core))
        print(f"{name:<28} {t_py:>9.3f}s {t_c:>9.3f}s {t_py / t_c:>8.1f}x")

    if _core is None:
        print("\ncompiled backend unavailable; fallback timings only")


if __name__ == "__main__":
    main()
