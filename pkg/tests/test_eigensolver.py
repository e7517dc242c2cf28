import numpy as np
import pytest

from tipentropy.eigensolver import SolverError, eig_symmetric
from tipentropy.hamiltonian import assemble_reduced
from tipentropy.potentials import generate_disorder


def test_two_by_two():
    sys = eig_symmetric(np.array([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(sys.eigenvalues, [-1.0, 1.0], atol=1e-15)


def test_diagonal_input_gives_permuted_identity():
    d = np.array([3.0, -1.0, 2.0, 0.5])
    sys = eig_symmetric(np.diag(d))
    np.testing.assert_array_equal(sys.eigenvalues, np.sort(d))
    np.testing.assert_allclose(np.abs(sys.eigenvectors), np.eye(4)[:, np.argsort(d)], atol=1e-15)


def test_three_site_ring():
    sys = eig_symmetric(assemble_reduced(np.zeros(3), 0.0))
    np.testing.assert_allclose(sys.eigenvalues, [-2, -2, -2, 1, 1, 4], atol=1e-12)


@pytest.mark.parametrize("N, U", [(10, 0.0), (17, 2.0), (25, 6.0)])
def test_certificates(N, U):
    H = assemble_reduced(generate_disorder(N, 1.0, N), U)
    sys = eig_symmetric(H, check_orthonormal=True)
    D = H.to_dense()
    norm_inf = np.abs(D).sum(axis=1).max()
    assert np.all(np.diff(sys.eigenvalues) >= 0)
    resid = np.linalg.norm(D @ sys.eigenvectors - sys.eigenvectors * sys.eigenvalues, axis=0)
    assert resid.max() <= sys.residual_bound + 1e-15
    assert sys.residual_bound <= 1e-9 * max(1.0, norm_inf)
    assert sys.orthonormality_error() <= 1e-10
    tol = 1e-8 * H.M * norm_inf
    assert abs(sys.eigenvalues.sum() - np.trace(D)) <= tol
    assert abs(np.sum(sys.eigenvalues**2) - np.sum(D**2)) <= tol


def test_permutation_similarity_invariance():
    H = assemble_reduced(generate_disorder(12, 2.0, 5), 3.0).to_dense()
    perm = np.random.default_rng(0).permutation(H.shape[0])
    a = eig_symmetric(H).eigenvalues
    b = eig_symmetric(H[np.ix_(perm, perm)]).eigenvalues
    assert np.max(np.abs(a - b)) < 1e-9


def test_deterministic():
    H = assemble_reduced(generate_disorder(15, 1.0, 1), 1.0)
    a, b = eig_symmetric(H), eig_symmetric(H)
    assert a.eigenvalues.tobytes() == b.eigenvalues.tobytes()
    assert a.eigenvectors.tobytes() == b.eigenvectors.tobytes()


def test_input_matrix_not_modified():
    A = np.array([[2.0, 1.0], [1.0, 3.0]])
    before = A.copy()
    eig_symmetric(A)
    np.testing.assert_array_equal(A, before)


def test_rejects_asymmetric():
    with pytest.raises(ValueError):
        eig_symmetric(np.array([[0.0, 1.0], [2.0, 0.0]]))


def test_nonfinite_input_is_a_solver_or_value_error():
    with pytest.raises((SolverError, ValueError)):
        eig_symmetric(np.array([[np.nan, 0.0], [0.0, 1.0]]))
