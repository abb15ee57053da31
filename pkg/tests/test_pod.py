import numpy as np
import pytest
import scipy.linalg

from pcuq import (CoefficientTrajectory, eval_basis, pod, pod_error_curve,
                  rotated_basis_eval, tensor_gauss, total_degree_set)
from pcuq.space import ParameterSpace


def _traj(matrix):
    m, k = matrix.shape
    return CoefficientTrajectory(index_set=total_degree_set(1, m - 1),
                                 times=np.arange(k, dtype=float),
                                 coeffs=np.asarray(matrix, dtype=float))


def test_eckart_young(rng):
    # the projection error must hit the theoretical floor given by the
    # trailing singular values, which scipy computes independently
    for _ in range(10):
        m = int(rng.integers(3, 30))
        k = int(rng.integers(3, 30))
        w = rng.normal(size=(m, k))
        r = int(rng.integers(1, min(m, k) + 1))
        basis, reduced = pod(_traj(w), r)
        sv = scipy.linalg.svdvals(w)
        floor = np.sqrt(np.sum(sv[r:] ** 2))
        err = np.linalg.norm(w - basis.projection @ reduced.reduced)
        assert abs(err - floor) < 1e-10


def test_projection_orthonormal(rng):
    w = rng.normal(size=(12, 9))
    basis, _ = pod(_traj(w), 5)
    eye = basis.projection.T @ basis.projection
    assert np.max(np.abs(eye - np.eye(5))) < 1e-12


def test_singular_values_match_scipy(rng):
    w = rng.normal(size=(8, 15))
    basis, _ = pod(_traj(w), 3)
    assert np.allclose(basis.singular_values, scipy.linalg.svdvals(w), atol=1e-11)


def test_sign_convention(rng):
    for _ in range(8):
        w = rng.normal(size=(7, 7))
        basis, _ = pod(_traj(w), 4)
        for col in basis.projection.T:
            assert col[np.argmax(np.abs(col))] > 0


def test_sign_flip_keeps_reconstruction(rng):
    # flipping u_j requires flipping the j-th coordinate row too; a
    # one-sided flip would break the rank-r reconstruction
    w = rng.normal(size=(9, 6))
    basis, reduced = pod(_traj(w), 6)
    assert np.max(np.abs(basis.projection @ reduced.reduced - w)) < 1e-12


def test_reduced_coordinates(rng):
    w = rng.normal(size=(10, 4))
    basis, reduced = pod(_traj(w), 3)
    assert reduced.reduced.shape == (3, 4)
    assert np.allclose(reduced.reduced, basis.projection.T @ w, atol=1e-12)
    assert np.array_equal(reduced.times, np.arange(4.0))


def test_rank_range_validation(rng):
    w = rng.normal(size=(5, 7))
    with pytest.raises(ValueError):
        pod(_traj(w), 0)
    with pytest.raises(ValueError):
        pod(_traj(w), 6)


def test_error_curve_matches_direct(rng):
    w = rng.normal(size=(14, 11)) * np.logspace(0, -4, 14)[:, None]
    traj = _traj(w)
    curve = dict(pod_error_curve(traj, range(1, 8)))
    for r in range(1, 8):
        basis, _ = pod(traj, r)
        resid = w - basis.projection @ (basis.projection.T @ w)
        direct = np.max(np.linalg.norm(resid, axis=0) / np.linalg.norm(w, axis=0))
        assert curve[r] == pytest.approx(direct, rel=1e-8, abs=1e-12)


def test_error_curve_monotone(rng):
    w = rng.normal(size=(10, 10))
    errs = [e for _, e in pod_error_curve(_traj(w), range(1, 10))]
    assert all(a >= b - 1e-12 for a, b in zip(errs, errs[1:]))


def test_error_curve_skips_zero_columns(rng):
    w = rng.normal(size=(6, 5))
    w[:, 0] = 0.0
    curve = pod_error_curve(_traj(w), [1, 2])
    assert all(np.isfinite(e) for _, e in curve)


def test_rotated_basis_orthonormal_and_consistent(rng):
    # the rotated functions must stay orthonormal and reproduce
    # P^T Phi(x) pointwise
    q, d = 2, 3
    iset = total_degree_set(q, d)
    sp = ParameterSpace.uniform_box([1.0, 2.0], 0.2)
    w = rng.normal(size=(len(iset), 9))
    basis, _ = pod(_traj_with(iset, w), 4)
    rule = tensor_gauss(q, d + 1)
    psi_at_nodes = np.array([rotated_basis_eval(basis, iset, sp.to_physical(x), sp)
                             for x in rule.nodes])
    gram = (psi_at_nodes * rule.weights[:, None]).T @ psi_at_nodes
    assert np.max(np.abs(gram - np.eye(4))) < 1e-10
    x = rng.uniform(-1, 1, size=q)
    want = basis.projection.T @ eval_basis(iset, x)
    got = rotated_basis_eval(basis, iset, sp.to_physical(x), sp)
    assert np.allclose(got, want, atol=1e-12)


def _traj_with(iset, matrix):
    return CoefficientTrajectory(index_set=iset,
                                 times=np.arange(matrix.shape[1], dtype=float),
                                 coeffs=matrix)
