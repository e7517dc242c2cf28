import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tipentropy.basis import PairBasis
from tipentropy.hamiltonian import (
    DimensionError,
    OracleSizeError,
    assemble_full_grid,
    assemble_reduced,
    single_particle,
    swap_operator,
    symmetric_sector_spectrum,
)
from tipentropy.potentials import generate_disorder, generate_harper, generate_slowly_varying


def ring_levels(N):
    # one particle on a clean ring with +t hopping: 2 cos(2 pi k / N)
    return 2 * np.cos(2 * np.pi * np.arange(N) / N)


def test_three_site_ring_clean_spectrum():
    e = ring_levels(3)
    pair_sums = sorted(e[i] + e[j] for i in range(3) for j in range(i, 3))
    np.testing.assert_allclose(pair_sums, [-2, -2, -2, 1, 1, 4], atol=1e-12)
    H = assemble_reduced(np.zeros(3), U=0.0, t=1.0)
    np.testing.assert_allclose(np.linalg.eigvalsh(H.to_dense()), pair_sums, atol=1e-12)


def test_hopping_free_spectrum_is_diagonal():
    H = assemble_reduced(np.zeros(3), U=5.0, t=0.0)
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(H.to_dense())), [0, 0, 0, 5, 5, 5])


@given(st.integers(3, 9), st.floats(0, 10), st.integers(0, 2**31))
@settings(max_examples=25, deadline=None)
def test_trace_closed_form(N, U, seed):
    eps = generate_disorder(N, 1.0, seed).values
    H = assemble_reduced(eps, U)
    expected = sum(eps[a] + eps[b] for a in range(N) for b in range(a, N)) + N * U
    assert H.trace() == pytest.approx(expected, abs=1e-10)
    assert np.trace(H.to_dense()) == pytest.approx(expected, abs=1e-10)


def test_clean_noninteracting_trace_is_zero():
    assert assemble_reduced(np.zeros(7), 0.0).trace() == 0.0


def test_dense_and_sparse_agree_and_are_symmetric():
    H = assemble_reduced(generate_disorder(6, 2.0, 1), U=3.0)
    D = H.to_dense()
    np.testing.assert_array_equal(D, D.T)
    np.testing.assert_array_equal(H.to_sparse().toarray(), D)


def test_full_grid_clean_three_site():
    e = ring_levels(3)
    grid = np.linalg.eigvalsh(assemble_full_grid(np.zeros(3), 0.0))
    np.testing.assert_allclose(grid, np.sort(np.add.outer(e, e).ravel()), atol=1e-12)


def test_full_grid_commutes_with_exchange():
    Hf = assemble_full_grid(generate_disorder(5, 1.0, 4), 2.0)
    S = swap_operator(5)
    np.testing.assert_allclose(Hf @ S, S @ Hf, atol=1e-14)
    np.testing.assert_array_equal(Hf, Hf.T)


def test_full_grid_interaction_only_on_double_occupancy():
    eps = generate_disorder(4, 1.0, 9).values
    diff = assemble_full_grid(eps, 3.5) - assemble_full_grid(eps, 0.0)
    expected = np.zeros((16, 16))
    for n in range(4):
        expected[n * 4 + n, n * 4 + n] = 3.5
    np.testing.assert_allclose(diff, expected, atol=1e-14)


def test_full_grid_size_limit():
    with pytest.raises(OracleSizeError):
        assemble_full_grid(np.zeros(13), 0.0)


def test_projection_onto_pair_basis_reproduces_reduced_operator():
    # isometry from the pair basis into the symmetric part of the grid
    N = 5
    eps = generate_disorder(N, 1.0, 2).values
    basis = PairBasis(N)
    B = np.zeros((N * N, basis.M))
    for k, (a, b) in enumerate(zip(*basis.pairs)):
        a, b = a - 1, b - 1
        if a == b:
            B[a * N + a, k] = 1.0
        else:
            B[a * N + b, k] = B[b * N + a, k] = 1 / np.sqrt(2)
    for U in (0.0, 4.0):
        np.testing.assert_allclose(
            B.T @ assemble_full_grid(eps, U) @ B, assemble_reduced(eps, U).to_dense(), atol=1e-14
        )


@pytest.mark.parametrize("periodic", [True, False])
@pytest.mark.parametrize("U", [0.0, 1.0, 10.0])
@pytest.mark.parametrize("N", [3, 4, 5, 6])
def test_oracle_equivalence(N, U, periodic):
    eps = generate_disorder(N, 2.0, seed=100 + N).values
    H = assemble_reduced(eps, U, periodic=periodic).to_dense()
    reduced = np.linalg.eigvalsh(H)
    oracle = symmetric_sector_spectrum(assemble_full_grid(eps, U, periodic=periodic))
    assert np.max(np.abs(reduced - oracle)) <= 1e-10 * np.linalg.norm(H, 2)


@pytest.mark.parametrize(
    "profile",
    [generate_disorder(8, 1.5, 3), generate_harper(13, 1.0), generate_slowly_varying(21, 1.3)],
    ids=["disorder", "harper", "slow"],
)
@pytest.mark.parametrize("periodic", [True, False])
def test_noninteracting_pair_sums(profile, periodic):
    e = np.linalg.eigvalsh(single_particle(profile, 1.0, periodic))
    N = e.size
    pair_sums = np.sort([e[i] + e[j] for i in range(N) for j in range(i, N)])
    got = np.linalg.eigvalsh(assemble_reduced(profile, 0.0, periodic=periodic).to_dense())
    np.testing.assert_allclose(got, pair_sums, atol=1e-8)


@pytest.mark.parametrize("N", [4, 6, 8])
def test_bipartite_sign_flip_even_ring(N):
    plus = np.linalg.eigvalsh(assemble_reduced(np.zeros(N), 0.0, t=1.0).to_dense())
    minus = np.linalg.eigvalsh(assemble_reduced(np.zeros(N), 0.0, t=-1.0).to_dense())
    np.testing.assert_allclose(minus, -plus[::-1], atol=1e-10)


def test_rejects_length_mismatch_and_attraction():
    with pytest.raises(DimensionError):
        assemble_reduced(np.zeros(5), 0.0, N=6)
    with pytest.raises(ValueError):
        assemble_reduced(np.zeros(5), -1.0)


def test_coo_dump(tmp_path):
    H = assemble_reduced(generate_harper(5, 1.0), U=2.0)
    path = tmp_path / "h.coo"
    H.write_coo(path, header={"model": "harper"})
    rows = [ln.split() for ln in path.read_text().splitlines() if not ln.startswith("#")]
    D = np.zeros((H.M, H.M))
    for i, j, v in rows:
        D[int(i), int(j)] = D[int(j), int(i)] = float(v)
    np.testing.assert_array_equal(D, H.to_dense())
    assert len(rows) == H.M + len(H.rows)
