import numpy as np
import pytest

from minexp import (
    BipartiteGraph,
    DegenerateSplitError,
    InsufficientZerosError,
    MeasurementMatrix,
    NoiseModel,
    SparseSignal,
    is_expander,
    l1_min_nonneg,
    minimal_expansion_order,
    noisy_recovery,
    perturb,
    random_left_regular,
    random_sparse_signal,
    reverse_expansion_recovery,
    strong_recoverable_k,
)


def _identity_matrix(n):
    g = BipartiteGraph(n, n, 1, np.arange(n).reshape(-1, 1))
    return MeasurementMatrix.unperturbed(g)


def _certified_alg1_instance(seed, n=60, m=30, d=4, k=2):
    g = random_left_regular(n, m, d, seed=seed)
    mins = np.asarray(
        __import__("minexp").deficiency_profile(g, k * d + 1, budget=10**7))
    assert mins[1:k * d + 2].min() >= 0
    return perturb(g, 0.1, seed=seed + 1000), k


def test_sparse_signal_type():
    s = SparseSignal(np.array([0.0, 2.0, 0.0, 1.0]))
    assert s.length == 4 and s.sparsity == 2
    assert list(s.support) == [1, 3]
    with pytest.raises(ValueError):
        SparseSignal(np.array([-1.0, 0.0]))


def test_noise_model():
    m = NoiseModel.additive(np.array([0.5, -0.25, 0.0]))
    assert m.kind == "additive"
    assert abs(m.l1_budget - 0.75) < 1e-15
    assert np.allclose(m.apply(np.ones(3)), [1.5, 0.75, 1.0])
    silent = NoiseModel.none(3)
    assert silent.l1_budget == 0.0
    assert np.array_equal(silent.apply(np.ones(3)), np.ones(3))
    with pytest.raises(ValueError):
        NoiseModel("multiplicative", np.zeros(3))
    with pytest.raises(ValueError):
        m.apply(np.ones(4))


def test_random_sparse_signal_bounded_away_from_zero():
    rng = np.random.default_rng(0)
    s = random_sparse_signal(30, 7, rng)
    assert s.sparsity == 7
    vals = s.entries[s.support]
    assert vals.min() >= 0.1 and vals.max() <= 1.1


def test_l1_zero_measurement():
    a = perturb(random_left_regular(12, 8, 3, seed=0), 0.1, seed=1)
    rep = l1_min_nonneg(a, np.zeros(8), x_true=np.zeros(12))
    assert rep.success and np.abs(rep.estimate).max() == 0.0


def test_l1_bijective_system():
    a = _identity_matrix(5)
    x = np.array([1.0, 0.0, 2.5, 0.0, 0.25])
    rep = l1_min_nonneg(a, a.dense @ x, x_true=x)
    assert rep.success


def test_l1_infeasible_reported_in_status():
    a = _identity_matrix(3)
    rep = l1_min_nonneg(a, np.array([1.0, -1.0, 0.0]), x_true=np.zeros(3))
    assert rep.solver_status == "infeasible"
    assert rep.success is False


def test_l1_on_certified_instance():
    g = random_left_regular(40, 20, 4, seed=0)
    a = perturb(g, 0.1, seed=500)
    assert strong_recoverable_k(a, 2)
    rng = np.random.default_rng(5)
    for _ in range(20):
        x = random_sparse_signal(40, 2, rng).entries
        rep = l1_min_nonneg(a, a.dense @ x, x_true=x)
        assert rep.success
        assert np.abs(rep.estimate - x).max() <= 1e-7


def test_alg1_zero_measurement():
    a, k = _certified_alg1_instance(seed=0)
    rep = reverse_expansion_recovery(a, np.zeros(30), k, x_true=np.zeros(60))
    assert rep.success and rep.zero_set_size == 30


def test_alg1_validity_triple():
    a, k = _certified_alg1_instance(seed=1)
    rng = np.random.default_rng(7)
    for _ in range(200):
        x = random_sparse_signal(60, k, rng).entries
        y = a.dense @ x
        rep = reverse_expansion_recovery(a, y, k, x_true=x)
        assert rep.zero_set_size >= a.m - k * a.d          # enough zero rows
        assert rep.diagnostics["survivors"] <= rep.diagnostics["kept_rows"]
        assert rep.success and np.abs(rep.estimate - x).max() <= 1e-6


def test_alg1_agrees_with_l1():
    a, k = _certified_alg1_instance(seed=2, n=40, m=20, d=4, k=2)
    assert strong_recoverable_k(a, k)
    rng = np.random.default_rng(8)
    for _ in range(20):
        x = random_sparse_signal(40, k, rng).entries
        y = a.dense @ x
        fast = reverse_expansion_recovery(a, y, k, x_true=x)
        base = l1_min_nonneg(a, y, x_true=x)
        assert fast.success and base.success
        assert np.abs(fast.estimate - base.estimate).max() <= 1e-6


def test_alg1_insufficient_zeros():
    a, _ = _certified_alg1_instance(seed=3)
    rng = np.random.default_rng(9)
    dense_signal = rng.uniform(0.5, 1.0, size=60)  # not sparse at all
    with pytest.raises(InsufficientZerosError):
        reverse_expansion_recovery(a, a.dense @ dense_signal, 2)


def test_noisy_reduces_to_fast_path_without_noise():
    a, k = _certified_alg1_instance(seed=4)
    rng = np.random.default_rng(10)
    for norm_choice in ("l1", "l2"):
        x = random_sparse_signal(60, k, rng).entries
        rep = noisy_recovery(a, a.dense @ x, k, norm_choice=norm_choice, x_true=x)
        assert rep.success
        assert rep.clamp_magnitude <= 1e-9


def test_noisy_robustness_bound():
    g = random_left_regular(40, 30, 4, seed=0)
    eps = 0.45
    assert is_expander(g, 3, eps)
    a = MeasurementMatrix.unperturbed(g)
    factor = (6 - 4 * eps) / (1 - 2 * eps)
    rng = np.random.default_rng(11)
    for _ in range(50):
        x = random_sparse_signal(40, 3, rng).entries
        v = rng.normal(size=30) * 0.05
        rep = noisy_recovery(a, a.dense @ x + v, 3, norm_choice="l1", x_true=x)
        assert np.abs(x - rep.estimate).sum() <= factor * np.abs(v).sum() + 1e-9


def test_noisy_tie_break_is_stable():
    a, k = _certified_alg1_instance(seed=5)
    y = np.zeros(30)
    y[:4] = [0.5, 0.5, 0.5, 0.5]  # exact magnitude ties
    r1 = noisy_recovery(a, y, k)
    r2 = noisy_recovery(a, y, k)
    assert np.array_equal(r1.estimate, r2.estimate)


def test_noisy_auto_sparsity_mode():
    a, k = _certified_alg1_instance(seed=6)
    rng = np.random.default_rng(12)
    x = random_sparse_signal(60, k, rng).entries
    rep = noisy_recovery(a, a.dense @ x, None, norm_choice="l2", x_true=x)
    assert rep.success


def test_degenerate_split():
    cols = np.array([[0, 1], [0, 2], [0, 3]])
    a = MeasurementMatrix.unperturbed(BipartiteGraph(3, 4, 2, cols))
    y = np.array([0.0, 0.0, 1.0, 1.0])
    with pytest.raises(DegenerateSplitError):
        noisy_recovery(a, y, 1, norm_choice="l2")


def test_estimates_nonnegative_after_clamp():
    g = random_left_regular(30, 20, 4, seed=7)
    a = MeasurementMatrix.unperturbed(g)
    rng = np.random.default_rng(13)
    x = random_sparse_signal(30, 3, rng).entries
    v = rng.normal(size=20) * 0.2
    rep = noisy_recovery(a, a.dense @ x + v, 3, norm_choice="l2", x_true=x)
    assert rep.estimate.min() >= 0.0
    assert rep.clamp_magnitude >= 0.0


def test_noiseless_consistency_invariant():
    a, k = _certified_alg1_instance(seed=8)
    rng = np.random.default_rng(14)
    for _ in range(20):
        x = random_sparse_signal(60, k, rng).entries
        y = a.dense @ x
        rep = reverse_expansion_recovery(a, y, k, x_true=x)
        if rep.success:
            assert rep.residual_l1 <= 1e-7 * (np.abs(y).sum() + 1.0)
