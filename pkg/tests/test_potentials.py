import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from tipentropy.potentials import (
    InvalidApproximantError,
    InvalidIndexError,
    InvalidLatticeError,
    Model,
    derive_seed,
    fibonacci,
    generate_disorder,
    generate_harper,
    generate_slowly_varying,
    load_profile,
    save_profile,
)


def test_zero_width_disorder_is_zero():
    p = generate_disorder(5, 0.0, seed=7)
    assert np.all(p.values == 0.0)
    assert p.model is Model.DISORDERED and p.seed == 7


def test_disorder_bounds_and_mean():
    p = generate_disorder(90, 1.0, seed=3)
    assert p.sites == 90
    assert np.all((p.values >= -1.0) & (p.values < 1.0))
    big = np.concatenate([generate_disorder(90, 1.0, derive_seed(3, i)).values for i in range(200)])
    assert abs(big.mean()) < 0.02


def test_disorder_is_deterministic():
    a = generate_disorder(90, 3.0, seed=11)
    b = generate_disorder(90, 3.0, seed=11)
    assert a.values.tobytes() == b.values.tobytes()
    assert generate_disorder(90, 3.0, seed=12).values.tobytes() != a.values.tobytes()


def test_disorder_site_marginal_is_uniform():
    W = 2.5
    draws = np.array([generate_disorder(10, W, derive_seed(99, i)).values[4] for i in range(1000)])
    ks = stats.kstest(draws, stats.uniform(loc=-W, scale=2 * W).cdf)
    assert ks.statistic < 0.05


def test_disorder_rejects_small_lattice():
    with pytest.raises(InvalidLatticeError):
        generate_disorder(2, 1.0, seed=0)


def test_derive_seed_is_pure_and_distinct():
    seeds = [derive_seed(42, i) for i in range(50)]
    assert seeds == [derive_seed(42, i) for i in range(50)]
    assert len(set(seeds)) == 50
    assert derive_seed(42, 0) != derive_seed(43, 0)


@pytest.mark.parametrize("k, F", [(1, 1), (2, 1), (9, 34), (10, 55), (11, 89)])
def test_fibonacci(k, F):
    assert fibonacci(k) == F


def test_fibonacci_rejects_zero():
    with pytest.raises(InvalidIndexError):
        fibonacci(0)


def test_harper_last_site_equals_lambda():
    p = generate_harper(89, 2.0, k=11, beta=0.0)
    assert p.values[88] == 2.0


def test_harper_zero_strength():
    assert np.all(generate_harper(55, 0.0, beta=0.3).values == 0.0)


def test_harper_closed_form():
    # direct evaluation of the cosine with sigma = 34/55
    p = generate_harper(55, 1.0, k=10)
    n = np.arange(1, 56)
    direct = np.array([math.cos(2 * math.pi * 34 / 55 * m) for m in n])
    assert p.values[0] == pytest.approx(math.cos(2 * math.pi * 34 / 55), abs=1e-14)
    np.testing.assert_allclose(p.values, direct, atol=1e-12)


def test_harper_rejects_non_fibonacci():
    with pytest.raises(InvalidApproximantError):
        generate_harper(90, 1.0)
    with pytest.raises(InvalidApproximantError):
        generate_harper(89, 1.0, k=10)


@given(k=st.integers(5, 12), lam=st.floats(0, 5), beta=st.floats(-math.pi, math.pi))
@settings(max_examples=30, deadline=None)
def test_harper_bounded_and_period_matches_ring(k, lam, beta):
    N = fibonacci(k)
    p = generate_harper(N, lam, k=k, beta=beta)
    assert np.max(np.abs(p.values)) <= lam + 1e-12
    # continuing the closed form past N repeats the sequence
    n = np.arange(N + 1, 2 * N + 1)
    ahead = lam * np.cos(2 * np.pi * fibonacci(k - 1) / N * n + beta)
    np.testing.assert_allclose(ahead, p.values, atol=1e-9)


def test_slowly_varying_values():
    assert np.all(generate_slowly_varying(89, 0.0).values == 0.0)
    p = generate_slowly_varying(89, 1.0, pi_alpha=0.2, upsilon=0.7)
    assert p.values[0] == pytest.approx(math.cos(0.2), abs=1e-15)
    q = generate_slowly_varying(89, 2.0, pi_alpha=0.2, upsilon=0.7)
    for n in (1, 17, 50, 89):
        assert q.values[n - 1] == pytest.approx(2.0 * math.cos(0.2 * n**0.7), abs=1e-13)
    assert not q.out_of_regime
    assert generate_slowly_varying(10, 1.0, upsilon=1.0).out_of_regime


def test_profile_text_round_trip(tmp_path):
    for p in (generate_disorder(13, 1.5, seed=5), generate_harper(34, 2.0), generate_slowly_varying(20, 1.2)):
        path = tmp_path / f"{p.model.value}.txt"
        save_profile(p, path)
        q = load_profile(path)
        assert q.model is p.model and q.seed == p.seed
        assert q.values.tobytes() == p.values.tobytes()
        assert path.read_text().startswith("# model = ")
