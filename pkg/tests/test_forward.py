import math

import numpy as np
import pytest

import oracles
from threespectra import (
    JacobiMatrix,
    SiteOutOfRange,
    extract_three_spectra,
    split_at_site,
    sturm_count,
    validate_three_spectra,
)

R2 = math.sqrt(2.0)
R5 = math.sqrt(5.0)


def test_split_examples():
    left, right = split_at_site(JacobiMatrix([1, 2, 3], [4, 5]), 2)
    assert left == JacobiMatrix([1], []) and right == JacobiMatrix([3], [])
    left, right = split_at_site(JacobiMatrix([1, 2], [4]), 1)
    assert left is None and right == JacobiMatrix([2], [])
    left, right = split_at_site(JacobiMatrix([1, 2, 3, 4], [1, 1, 1]), 4)
    assert left == JacobiMatrix([1, 2, 3], [1, 1]) and right is None
    for n in (0, 5):
        with pytest.raises(SiteOutOfRange):
            split_at_site(JacobiMatrix([1, 2, 3, 4], [1, 1, 1]), n)


def test_extract_two_by_two():
    d = extract_three_spectra(JacobiMatrix([0, 0], [1]), 1)
    assert np.allclose(d.lam, [-1, 1], atol=1e-15)
    assert [(m.value, m.sigma) for m in d.mu] == [(0.0, 1.0)]


def test_extract_symmetric_doubled():
    d = extract_three_spectra(JacobiMatrix([0, 0, 0], [1, 1]), 2)
    assert np.allclose(d.lam, [-R2, 0, R2], atol=1e-15)
    assert [(m.value, m.sigma) for m in d.mu] == [(0.0, 0.0), (0.0, 0.0)]


def test_extract_unequal_couplings():
    d = extract_three_spectra(JacobiMatrix([0, 0, 0], [1, 2]), 2)
    # oracle: characteristic polynomial z^3 - 5z
    assert np.allclose(d.lam, np.linalg.eigvalsh(oracles.dense([0, 0, 0], [1, 2])), atol=1e-14)
    assert np.allclose(d.lam, [-R5, 0, R5], atol=1e-14)
    assert [m.value for m in d.mu] == [0.0, 0.0]
    assert d.mu[0].sigma == pytest.approx(0.6, abs=1e-15)
    assert d.mu[1].sigma == d.mu[0].sigma


def test_edge_sites_have_one_side():
    rng = np.random.default_rng(1)
    J = JacobiMatrix(*oracles.random_matrix(rng, 7))
    assert all(m.sigma == 1.0 for m in extract_three_spectra(J, 1).mu)
    assert all(m.sigma == -1.0 for m in extract_three_spectra(J, 7).mu)
    d = extract_three_spectra(JacobiMatrix([4.0], []), 1)
    assert d.lam.tolist() == [4.0] and d.mu == ()


def test_against_dense_oracle():
    rng = np.random.default_rng(2)
    for _ in range(100):
        N = int(rng.integers(1, 25))
        b, a = oracles.random_matrix(rng, N)
        n = int(rng.integers(1, N + 1))
        d = extract_three_spectra(JacobiMatrix(b, a), n)
        lam, mm, _, mp, _ = oracles.three_spectra_dense(b, a, n)
        assert np.max(np.abs(d.lam - lam)) <= 1e-12
        assert np.max(np.abs(d.mu_values - np.sort(np.concatenate([mm, mp]))), initial=0) <= 1e-12
        left = sorted(m.value for m in d.mu if m.sigma == -1)
        assert np.allclose(left, mm, atol=1e-12)


def test_sigma_against_dense_oracle():
    # mirror-symmetric blocks make every eigenvalue shared
    rng = np.random.default_rng(3)
    for _ in range(30):
        k = int(rng.integers(1, 8))
        bb, aa = oracles.random_matrix(rng, k)
        am, ap = rng.uniform(0.5, 2, 2)
        b = np.concatenate([bb[::-1], [rng.uniform(-1, 1)], bb])
        a = np.concatenate([aa[::-1], [am, ap], aa])
        n = k + 1
        d = extract_three_spectra(JacobiMatrix(b, a), n)
        _, mm, wm, mp, wp = oracles.three_spectra_dense(b, a, n)
        expected = (ap**2 * wp - am**2 * wm) / (ap**2 * wp + am**2 * wm)
        assert np.allclose(d.sigmas[0::2], expected, atol=1e-10)
        assert np.array_equal(d.sigmas[0::2], d.sigmas[1::2])
        assert validate_three_spectra(d).ok


def test_invariants_random():
    rng = np.random.default_rng(4)
    for _ in range(150):
        N = int(rng.integers(1, 31))
        b, a = oracles.random_matrix(rng, N)
        J = JacobiMatrix(b, a)
        for n in range(1, N + 1):
            d = extract_three_spectra(J, n)
            assert validate_three_spectra(d).ok
            trace = (math.fsum(d.lam) + math.fsum(d.lam_lo)) - (math.fsum(d.mu_values) + math.fsum(d.mu_lo))
            assert abs(trace - b[n - 1]) <= 1e-10
            s = d.sigmas
            assert np.all(np.abs(s) <= 1.0)


def test_glued_value_is_eigenvalue():
    rng = np.random.default_rng(5)
    hits = 0
    for _ in range(40):
        k = int(rng.integers(1, 6))
        bb, aa = oracles.random_matrix(rng, k)
        b = np.concatenate([bb[::-1], [0.3], bb])
        a = np.concatenate([aa[::-1], rng.uniform(0.5, 2, 2), aa])
        J = JacobiMatrix(b, a)
        d = extract_three_spectra(J, k + 1)
        for m in d.mu:
            if abs(m.sigma) < 1.0:
                hits += 1
                assert sturm_count(J, m.value + 1e-8) - sturm_count(J, m.value - 1e-8) == 1
                assert np.min(np.abs(d.lam - m.value)) <= 1e-8
    assert hits > 0


def test_merge_tol_zero_never_merges_distinct_values():
    rng = np.random.default_rng(6)
    J = JacobiMatrix(*oracles.random_matrix(rng, 9))
    d = extract_three_spectra(J, 5, merge_tol=0.0)
    assert set(d.sigmas.tolist()) <= {-1.0, 1.0}
    with pytest.raises(ValueError):
        extract_three_spectra(J, 5, merge_tol=-1.0)
