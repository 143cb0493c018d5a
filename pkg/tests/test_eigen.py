import numpy as np
import pytest
import scipy.sparse as sp

from nitsche_bands import PRESETS, SystemMatrices, homogeneous_dispersion, solve_smallest
from nitsche_bands.exceptions import ConvergenceError, IllConditionedMassError


def test_diagonal_pencil():
    mats = SystemMatrices(sp.diags([1.0, 2.0, 3.0]).tocsr(), sp.identity(3, format="csr"))
    r = solve_smallest(mats, 2)
    np.testing.assert_allclose(r.eigenvalues, [1, 2])


def test_multiple_of_mass(rng):
    M = rng.normal(size=(6, 6))
    B = M @ M.T + 6 * np.eye(6)
    r = solve_smallest(SystemMatrices(sp.csr_matrix(2 * B), sp.csr_matrix(B)), 4)
    np.testing.assert_allclose(r.eigenvalues, 2.0)
    G = r.eigenvectors.conj().T @ B @ r.eigenvectors
    np.testing.assert_allclose(G, np.eye(4), atol=1e-10)


def test_homogeneous_oracle(epoxy_only):
    k = [np.pi, np.pi]
    ref = homogeneous_dispersion(PRESETS["epoxy"], k, m=6)
    c_t2 = 1.57e9 / 1180
    assert ref[0] == pytest.approx(c_t2 * 2 * np.pi ** 2)
    assert ref[0] == pytest.approx(2.627e7, rel=1e-3)
    r = epoxy_only.discretize(32).solve(k, 6)
    np.testing.assert_allclose(r.eigenvalues, ref, rtol=0.02)


def test_dense_and_sparse_agree(au16):
    k = [np.pi, np.pi]
    d = au16.solve(k, 8, method="dense")
    s = au16.solve(k, 8, method="sparse")
    np.testing.assert_allclose(d.eigenvalues, s.eigenvalues, rtol=1e-9)
    for r in (d, s):
        assert np.all(r.residuals <= 1e-9)
        assert r.orthonormality_defect <= 1e-8
        assert np.all(np.diff(r.eigenvalues) >= 0)


def test_sparse_at_gamma_point(epoxy_only):
    # rigid translations sit at zero; the shifted factorization must cope
    r = epoxy_only.discretize(8).solve([0.0, 0.0], 4, method="sparse")
    assert abs(r.eigenvalues[0]) < 1e-6 * r.eigenvalues[2]
    assert abs(r.eigenvalues[1]) < 1e-6 * r.eigenvalues[2]


def test_scaling_invariance(epoxy_only):
    mats = epoxy_only.discretize(16).matrices([1.0, 2.0])
    base = solve_smallest(mats, 5).eigenvalues
    scaled = solve_smallest(SystemMatrices(7.5 * mats.A, 7.5 * mats.B), 5).eigenvalues
    np.testing.assert_allclose(scaled, base, rtol=1e-12)


def test_scaling_invariance_cut_pencil(au16):
    # the interface penalty inflates |A| far above the low eigenvalues, so
    # rounding 7.5 * A may move them by eps * |A| / (w2 * lambda_min(B))
    mats = au16.matrices([1.0, 2.0])
    base = solve_smallest(mats, 5).eigenvalues
    scaled = solve_smallest(SystemMatrices(7.5 * mats.A, 7.5 * mats.B), 5).eigenvalues
    na = abs(mats.A).sum(axis=1).max()
    bmin = np.linalg.eigvalsh(mats.B.toarray())[0]
    bound = np.finfo(float).eps * na / (base * bmin)
    assert np.all(np.abs(scaled - base) / base <= bound)


def test_raw_residuals_reported(au16):
    r = au16.solve([np.pi, np.pi], 3)
    assert r.raw_residuals.shape == (3,) and np.all(np.isfinite(r.raw_residuals))


def test_singular_mass():
    A = sp.identity(3, format="csr")
    B = sp.diags([1.0, 1.0, 0.0]).tocsr()
    with pytest.raises(IllConditionedMassError):
        solve_smallest(SystemMatrices(A, B), 2, method="dense")


def test_tolerance_not_met(au16):
    with pytest.raises(ConvergenceError) as info:
        solve_smallest(au16.matrices([1.0, 1.0]), 3, tol=1e-30)
    assert info.value.residuals is not None and len(info.value.residuals) == 3


def test_bad_request():
    mats = SystemMatrices(sp.identity(3, format="csr"), sp.identity(3, format="csr"))
    with pytest.raises(ValueError):
        solve_smallest(mats, 4)
    with pytest.raises(ValueError):
        solve_smallest(mats, 1, method="qr")
