import numpy as np
import pytest

from orbitdeform.numerics import (
    DimensionError,
    StructureError,
    Tolerance,
    matrix_exp,
    nullspace,
    orthonormal_range,
    rank,
    simultaneous_eigenspaces,
)


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(abs_eps=-1.0)
    tol = Tolerance(abs_eps=1e-6, rel_eps=0.0)
    assert tol.close(1.0, 1.0 + 5e-7)
    assert not tol.close(1.0, 1.0 + 5e-6)


def test_exp_zero_is_identity_exactly():
    assert np.array_equal(matrix_exp(np.zeros((2, 2))), np.eye(2))


def test_exp_diagonal():
    out = matrix_exp(np.diag([1.0, -1.0]))
    assert np.allclose(out, np.diag([np.e, 1 / np.e]), atol=1e-14)


def test_exp_rotation_by_pi():
    a = np.array([[0.0, 1.0], [-1.0, 0.0]])
    assert np.linalg.norm(matrix_exp(np.pi * a) + np.eye(2)) < 1e-12


def test_exp_inverse_property():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = int(rng.integers(2, 6))
        a = rng.standard_normal((n, n))
        a *= min(1.0, 5.0 / np.linalg.norm(a))
        assert np.linalg.norm(matrix_exp(a) @ matrix_exp(-a) - np.eye(n)) < 1e-10


def test_exp_rejects_nonsquare():
    with pytest.raises(DimensionError):
        matrix_exp(np.zeros((2, 3)))


def test_nullspace_full_rank_and_zero():
    assert nullspace(np.eye(3)).shape == (3, 0)
    assert nullspace(np.zeros((3, 3))).shape == (3, 3)


def test_nullspace_quality():
    rng = np.random.default_rng(1)
    tol = Tolerance()
    for _ in range(100):
        m, n = int(rng.integers(2, 8)), int(rng.integers(2, 8))
        k = int(rng.integers(0, min(m, n) + 1))
        a = rng.standard_normal((m, k)) @ rng.standard_normal((k, n))
        ns = nullspace(a, tol)
        assert ns.shape[1] == n - np.linalg.matrix_rank(a)
        if ns.shape[1]:
            assert np.linalg.norm(a @ ns) <= 10 * tol.scale(a)
            assert np.linalg.norm(ns.T @ ns - np.eye(ns.shape[1])) < 1e-12


def test_rank_and_range():
    a = np.outer([1.0, 2.0, 3.0], [1.0, 0.0])
    assert rank(a) == 1
    assert orthonormal_range(a).shape == (3, 1)


def test_simultaneous_eigenspaces_zero_operator():
    blocks = simultaneous_eigenspaces([np.zeros((3, 3))])
    assert len(blocks) == 1
    vals, basis = blocks[0]
    assert vals[0] == 0.0 and basis.shape == (3, 3)


def test_simultaneous_eigenspaces_commuting_pair():
    d1 = np.diag([1.0, 1.0, 2.0, 3.0])
    d2 = np.diag([5.0, 4.0, 4.0, 4.0])
    q, _ = np.linalg.qr(np.random.default_rng(2).standard_normal((4, 4)))
    blocks = simultaneous_eigenspaces([q @ d1 @ q.T, q @ d2 @ q.T])
    assert sum(b.shape[1] for _, b in blocks) == 4
    # joint eigenvalue pairs (1,5), (1,4), (2,4), (3,4) are all distinct
    assert len(blocks) == 4


def test_simultaneous_eigenspaces_rejects_noncommuting():
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    b = np.array([[1.0, 0.0], [0.0, 2.0]])
    with pytest.raises(StructureError):
        simultaneous_eigenspaces([a, b])
