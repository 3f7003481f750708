import numpy as np
import pytest

from minexp import RankDeficientError, column_rank, least_squares, nullspace_basis
from minexp import perturb, random_left_regular


def test_least_squares_identity():
    z = least_squares(np.eye(2), [3.0, 4.0])
    assert np.allclose(z, [3.0, 4.0], atol=1e-14)


def test_least_squares_overdetermined_mean():
    # the l2 minimizer of a constant column against (1,2,3) is the mean
    z = least_squares(np.ones((3, 1)), [1.0, 2.0, 3.0])
    assert z.shape == (1,)
    assert abs(z[0] - 2.0) < 1e-12


def test_least_squares_roundtrip():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(6, 3))
    z0 = rng.normal(size=3)
    z = least_squares(a, a @ z0)
    assert np.abs(z - z0).max() < 1e-10


def test_least_squares_rank_deficient():
    a = np.ones((3, 2))
    with pytest.raises(RankDeficientError):
        least_squares(a, [1.0, 2.0, 3.0])


def test_least_squares_rejects_nonfinite():
    with pytest.raises(ValueError):
        least_squares(np.array([[np.nan]]), [1.0])


def test_normal_equation_orthogonality():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = rng.normal(size=(8, 4))
        y = rng.normal(size=8)
        z = least_squares(a, y)
        resid = a.T @ (a @ z - y)
        assert np.linalg.norm(resid) <= 1e-8 * np.linalg.norm(a) * np.linalg.norm(y)


def test_column_rank_examples():
    assert column_rank(np.eye(3)) == 3
    assert column_rank(np.ones((2, 2))) == 1
    assert column_rank(np.zeros((0, 0))) == 0
    # four columns supported on three rows cannot reach rank four
    rng = np.random.default_rng(2)
    a = np.zeros((6, 4))
    a[:3, :] = rng.uniform(0.5, 1.5, size=(3, 4))
    assert column_rank(a) <= 3


def test_nullspace_basis_examples():
    assert nullspace_basis(np.eye(2)).shape == (2, 0)
    basis = nullspace_basis(np.array([[1.0, 1.0]]))
    assert basis.shape == (2, 1)
    direction = basis[:, 0] / np.linalg.norm(basis[:, 0])
    assert min(np.abs(direction - [1, -1] / np.sqrt(2)).max(),
               np.abs(direction + [1, -1] / np.sqrt(2)).max()) < 1e-12


def test_nullspace_basis_degenerate_shapes():
    assert nullspace_basis(np.zeros((0, 3))).shape == (3, 3)
    assert nullspace_basis(np.zeros((3, 0))).shape == (0, 0)


def test_nullspace_of_perturbed_expander():
    a = perturb(random_left_regular(20, 12, 3, seed=4), 0.1, seed=5)
    dense = np.asarray(a.dense)
    rank = column_rank(dense)
    basis = nullspace_basis(dense)
    assert basis.shape == (20, 20 - rank)
    assert np.abs(dense @ basis).max() <= 1e-10 * np.linalg.norm(dense)


@pytest.mark.parametrize("tol", [1e-12, 1e-10, 1e-8])
def test_rank_nullity_sums_to_cols(tol):
    rng = np.random.default_rng(7)
    for trial in range(15):
        rows = int(rng.integers(1, 9))
        cols = int(rng.integers(1, 9))
        rank_target = int(rng.integers(0, min(rows, cols) + 1))
        a = (rng.normal(size=(rows, rank_target)) @ rng.normal(size=(rank_target, cols))
             if rank_target else np.zeros((rows, cols)))
        assert column_rank(a, tol) + nullspace_basis(a, tol).shape[1] == cols


def test_nullspace_columns_orthonormal():
    rng = np.random.default_rng(9)
    a = rng.normal(size=(4, 9))
    basis = nullspace_basis(a)
    gram = basis.T @ basis
    assert np.abs(gram - np.eye(basis.shape[1])).max() < 1e-10
