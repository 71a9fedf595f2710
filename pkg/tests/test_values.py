import numpy as np
import pytest

from smfft.errors import ContractionFailure
from smfft.signal import NoiseModel, Sampler, SparseSpectrum
from smfft.value_recovery import (BLOCKS, MeasurementSystem, apply_normal,
                                  back_project, compute_values,
                                  contraction_ok, draw_measurement,
                                  neumann_solve, prime_pool_size)


def make_instance(n, support, amps):
    spectrum = SparseSpectrum(n, dict(zip(support, amps)))
    return spectrum, Sampler(spectrum)


class TestPrimePool:
    def test_pool_size_exact_power(self):
        # 4 * 5 * log_5(5^3) = 60
        assert prime_pool_size(5, 5**3) == 60

    def test_base_clamped_for_tiny_r(self):
        assert prime_pool_size(1, 1024) == 40  # 4 * 1 * log2(1024)


class TestMeasurement:
    def test_residue_maps_and_rhs_shapes(self):
        _, sampler = make_instance(200, [3, 77, 150], [1.0, 1.0, 1.0])
        sys_ = draw_measurement([3, 77, 150], 3, 200,
                                np.random.default_rng(0), sampler)
        assert len(sys_.primes) == BLOCKS
        for p, res, rhs in zip(sys_.primes, sys_.residue_maps, sys_.rhs):
            assert p > 3
            assert len(rhs) == p
            assert np.array_equal(res, np.array([3, 77, 150]) % p)

    def test_empty_support_rejected(self):
        _, sampler = make_instance(8, [1], [1.0])
        with pytest.raises(ValueError):
            draw_measurement([], 1, 8, np.random.default_rng(0), sampler)


class TestOperators:
    def _dense_normal(self, system):
        r = system.sparsity
        a = np.zeros((r, r))
        for res in system.residue_maps:
            a += (res[:, None] == res[None, :])
        return a / len(system.primes)

    def test_apply_normal_matches_dense(self):
        rng = np.random.default_rng(1)
        support = sorted(int(j) for j in rng.choice(4096, 20, replace=False))
        _, sampler = make_instance(4096, support, [1.0] * 20)
        system = draw_measurement(support, 20, 4096, rng, sampler)
        dense = self._dense_normal(system)
        x = rng.normal(size=20) + 1j * rng.normal(size=20)
        assert np.allclose(apply_normal(system, x), dense @ x, atol=1e-12)

    def test_back_project_noiseless_is_normal_times_truth(self):
        # With exact samples, (1/T)(FB)* f0 equals (1/T) B*B fhat.
        rng = np.random.default_rng(2)
        support = sorted(int(j) for j in rng.choice(4096, 15, replace=False))
        amps = rng.uniform(0.5, 1.5, 15)
        _, sampler = make_instance(4096, support, amps)
        system = draw_measurement(support, 15, 4096, rng, sampler)
        got = back_project(system)
        expected = self._dense_normal(system) @ amps
        assert np.allclose(got, expected, atol=1e-9)

    def test_neumann_converges_to_solution(self):
        rng = np.random.default_rng(3)
        support = sorted(int(j) for j in rng.choice(10000, 12, replace=False))
        amps = rng.uniform(0.5, 1.5, 12)
        _, sampler = make_instance(10000, support, amps)
        system = draw_measurement(support, 12, 10000, rng, sampler)
        solution, norms = neumann_solve(system, 40)
        if contraction_ok(norms):
            assert np.allclose(solution.real, amps, atol=1e-8)
            assert norms[-1] < norms[0] * 2**-30


class TestContractionCertificate:
    def test_accepts_halving(self):
        assert contraction_ok([1.0, 0.5, 0.25])
        assert contraction_ok([1.0, 0.3, 0.01, 0.5])  # only first two checked

    def test_rejects_slow_decay(self):
        assert not contraction_ok([1.0, 0.9, 0.8])
        assert not contraction_ok([1.0, 0.4, 0.3])

    def test_zero_residual_accepted(self):
        assert contraction_ok([0.0, 0.0, 0.0])

    def test_short_history_accepted(self):
        assert contraction_ok([1.0, 0.9])


class TestComputeValues:
    @pytest.mark.parametrize("seed", range(6))
    def test_noiseless_exact(self, seed):
        rng = np.random.default_rng(seed)
        n = 1 << 16
        support = sorted(int(j) for j in rng.choice(n, 30, replace=False))
        amps = rng.uniform(0.5, 1.5, 30)
        _, sampler = make_instance(n, support, amps)
        values = compute_values(support, 30, n, 1e-4, 1e-10, sampler,
                                np.random.default_rng(seed + 50), mu=0.5)
        assert sorted(values) == support
        for j, a in zip(support, amps):
            assert values[j] == pytest.approx(a, abs=1e-8)

    def test_spurious_support_entries_pruned(self):
        # Indices passed in that carry no energy recover ~0 and are dropped.
        rng = np.random.default_rng(9)
        n = 1 << 14
        true = [100, 5000, 12000]
        _, sampler = make_instance(n, true, [1.0, 1.0, 1.0])
        padded = sorted(true + [7, 9999])
        values = compute_values(padded, 5, n, 1e-4, 1e-10, sampler,
                                np.random.default_rng(1), mu=0.5)
        assert sorted(values) == true

    def test_noisy_accuracy(self):
        rng = np.random.default_rng(11)
        n = 1 << 18
        support = sorted(int(j) for j in rng.choice(n, 50, replace=False))
        amps = rng.uniform(0.5, 1.5, 50)
        spectrum = SparseSpectrum(n, dict(zip(support, amps)))
        sampler = Sampler(spectrum, NoiseModel(0.01, "gaussian", 3))
        values = compute_values(support, 50, n, 1e-4, 0.01, sampler,
                                np.random.default_rng(2), mu=0.5)
        err = np.sqrt(sum((values.get(j, 0.0) - a) ** 2
                          for j, a in zip(support, amps)))
        assert err / np.linalg.norm(amps) < 3e-2

    def test_stats_records_redraws(self):
        _, sampler = make_instance(4096, [1, 2000], [1.0, 1.0])
        stats = {}
        compute_values([1, 2000], 2, 4096, 1e-4, 1e-10, sampler,
                       np.random.default_rng(0), stats=stats)
        assert stats["redraws"] >= 0

    def test_invalid_eta(self):
        _, sampler = make_instance(64, [1], [1.0])
        with pytest.raises(ValueError):
            compute_values([1], 1, 64, 1e-4, 0.0, sampler,
                           np.random.default_rng(0))

    def test_empty_support(self):
        _, sampler = make_instance(64, [1], [1.0])
        assert compute_values([], 1, 64, 1e-4, 1e-10, sampler,
                              np.random.default_rng(0)) == {}

    def test_contraction_failure_raised(self, monkeypatch):
        # If no draw ever certifies contraction, the redraw loop gives up.
        import smfft.value_recovery as vr
        monkeypatch.setattr(vr, "contraction_ok", lambda norms: False)
        _, sampler = make_instance(4096, [1, 2000], [1.0, 1.0])
        with pytest.raises(ContractionFailure):
            compute_values([1, 2000], 2, 4096, 1e-2, 1e-10, sampler,
                           np.random.default_rng(0))
