import math

import numpy as np
import pytest

from smfft.core_math import (FilterSpec, ModulusPair, alias_window,
                             dense_oracle_dft, dft, gaussian_filter_weight,
                             gaussian_window, mod_inverse, primes_greater_than,
                             sample_coprime, window_offsets)
from smfft.errors import NotCoprime, OracleTooLarge


def naive_dft(values, inverse=False):
    """Independent O(L^2) reference transform."""
    v = np.asarray(values, dtype=complex)
    n = len(v)
    sign = 2j if inverse else -2j
    kernel = np.exp(sign * np.pi * np.outer(np.arange(n), np.arange(n)) / n)
    out = kernel @ v
    return out / n if inverse else out


class TestModInverse:
    def test_inverse_of_13_mod_40(self):
        assert mod_inverse(13, 40) == 37

    def test_small_cases(self):
        assert mod_inverse(1, 2) == 1
        assert mod_inverse(3, 7) == 5
        assert mod_inverse(7, 10) == 3

    def test_all_coprime_pairs_up_to_50(self):
        for m in range(2, 51):
            for q in range(1, m):
                if math.gcd(q, m) == 1:
                    assert (q * mod_inverse(q, m)) % m == 1

    def test_not_coprime_raises(self):
        with pytest.raises(NotCoprime):
            mod_inverse(6, 40)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            mod_inverse(0, 5)
        with pytest.raises(ValueError):
            mod_inverse(5, 5)


class TestModulusPair:
    def test_create(self):
        pair = ModulusPair.create(13, 40)
        assert pair.q_inv == 37

    def test_rejects_wrong_inverse(self):
        with pytest.raises(ValueError):
            ModulusPair(13, 40, 36)


def test_sample_coprime_is_coprime_and_hits_all():
    rng = np.random.default_rng(0)
    seen = set()
    for _ in range(300):
        q = sample_coprime(12, rng)
        assert math.gcd(q, 12) == 1
        seen.add(q)
    assert seen == {1, 5, 7, 11}


class TestPrimes:
    def test_first_past_sparsity(self):
        assert primes_greater_than(5, 5) == [7, 11, 13, 17, 19]

    def test_pool_is_prime_and_sorted(self):
        pool = primes_greater_than(50, 500)
        assert len(pool) == 500
        assert pool == sorted(pool)
        assert pool[0] > 50
        for p in pool[:40]:
            assert all(p % d for d in range(2, int(p**0.5) + 1))

    def test_large_r(self):
        pool = primes_greater_than(256, 10)
        assert pool[0] == 257


class TestWindow:
    def test_known_small_window(self):
        assert alias_window(4, 10) == [0, 1, 2, 9]

    def test_single_point(self):
        assert alias_window(1, 8) == [0]

    def test_window_offsets_contiguous(self):
        for k in range(1, 40):
            lo, hi = window_offsets(k)
            assert hi - lo + 1 == k
            assert hi == k // 2

    def test_offsets_match_alias_window(self):
        for k, m in [(4, 10), (5, 11), (7, 7), (16, 64), (9, 10)]:
            lo, hi = window_offsets(k)
            assert sorted({o % m for o in range(lo, hi + 1)}) == alias_window(k, m)


class TestGaussianWindow:
    def test_matches_direct_wrap_sum(self):
        sigma, m = 2.5, 32
        spec = FilterSpec.create(sigma, m, 16)
        for idx in range(m):
            expected = math.sqrt(math.pi) * sigma * sum(
                math.exp(-math.pi**2 * sigma**2 * ((idx + h * m) / m) ** 2)
                for h in range(-50, 51))
            assert gaussian_filter_weight(idx, spec) == pytest.approx(
                expected, abs=1e-13)

    def test_vectorized_agrees_with_scalar(self):
        spec = FilterSpec.create(1.3, 100, 50)
        offs = np.arange(-25, 26)
        vec = gaussian_window(offs, spec)
        for o, v in zip(offs, vec):
            assert v == pytest.approx(gaussian_filter_weight(int(o) % 100, spec),
                                      abs=1e-12)

    def test_symmetry(self):
        spec = FilterSpec.create(3.0, 64, 32)
        w = gaussian_window(np.arange(-10, 11), spec)
        assert np.allclose(w, w[::-1])

    def test_invalid_spec(self):
        with pytest.raises(ValueError):
            FilterSpec(sigma=-1.0, modulus=8, wrap_terms=2, bandwidth=4)
        with pytest.raises(ValueError):
            FilterSpec(sigma=1.0, modulus=8, wrap_terms=2, bandwidth=9)


class TestDft:
    @pytest.mark.parametrize("length", [1, 2, 3, 8, 12, 17, 31, 97, 128])
    def test_matches_naive(self, length):
        rng = np.random.default_rng(length)
        v = rng.normal(size=length) + 1j * rng.normal(size=length)
        assert np.allclose(dft(v), naive_dft(v), atol=1e-9)
        assert np.allclose(dft(v, inverse=True), naive_dft(v, inverse=True),
                           atol=1e-9)

    def test_roundtrip_prime_length(self):
        rng = np.random.default_rng(1)
        v = rng.normal(size=101) + 1j * rng.normal(size=101)
        assert np.allclose(dft(dft(v), inverse=True), v, atol=1e-10)

    def test_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            dft(np.zeros((2, 2)))


def test_dense_oracle_matches_naive():
    entries = {1: 1.0, 5: 0.5, 11: 2.0}
    n = 16
    dense = np.zeros(n, dtype=complex)
    for j, v in entries.items():
        dense[j] = v
    assert np.allclose(dense_oracle_dft(entries, n), naive_dft(dense),
                       atol=1e-10)


def test_dense_oracle_guard():
    with pytest.raises(OracleTooLarge):
        dense_oracle_dft({0: 1.0}, 1 << 21)
