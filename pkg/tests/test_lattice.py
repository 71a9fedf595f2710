from fractions import Fraction

import numpy as np
import pytest

from smfft.errors import IndexOutOfRange, OracleTooLarge
from smfft.md_transform import (RankOneLattice, dense_md_dft, flatten_index,
                                lattice_point, md_sample_adapter, md_sfft,
                                relative_l2_error, unflatten_index)
from smfft.signal import NoiseModel, SampleLedger
from smfft.support_recovery import SupportParams


class TestLattice:
    def test_generator(self):
        assert RankOneLattice(3, 16).generator == (1, 16, 256)
        assert RankOneLattice(1, 40).generator == (1,)

    def test_total(self):
        assert RankOneLattice(3, 16).total == 4096

    def test_flatten_known_pair(self):
        lat = RankOneLattice(2, 4)
        assert flatten_index((1, 2), lat) == 9

    def test_flatten_unflatten_roundtrip(self):
        lat = RankOneLattice(3, 5)
        for flat in range(lat.total):
            assert flatten_index(unflatten_index(flat, lat), lat) == flat

    def test_lattice_point_known_value(self):
        lat = RankOneLattice(2, 4)
        assert lattice_point(3, lat) == (Fraction(3, 16), Fraction(12, 16))

    def test_bounds(self):
        lat = RankOneLattice(2, 4)
        with pytest.raises(IndexOutOfRange):
            flatten_index((4, 0), lat)
        with pytest.raises(IndexOutOfRange):
            unflatten_index(16, lat)
        with pytest.raises(IndexOutOfRange):
            lattice_point(-1, lat)

    def test_no_collisions(self):
        # Distinct multi-indices flatten to distinct 1-D frequencies.
        lat = RankOneLattice(3, 7)
        seen = {flatten_index((a, b, c), lat)
                for a in range(7) for b in range(7) for c in range(7)}
        assert len(seen) == lat.total


class TestAdapter:
    def test_line_restriction_equals_md_signal(self):
        # Sampling the flattened 1-D spectrum at n/N equals evaluating the
        # d-dimensional signal at the n-th lattice point.
        lat = RankOneLattice(2, 8)
        entries = {(1, 2): 1.0, (7, 0): 0.5, (3, 3): 2.0}
        sampler = md_sample_adapter(entries, lat)
        for n in (0, 1, 5, 17, 63):
            x = [float(c) for c in lattice_point(n, lat)]
            expected = sum(v * np.exp(-2j * np.pi * (k[0] * x[0] + k[1] * x[1]))
                           for k, v in entries.items())
            assert sampler.sample_at(n, lat.total) == pytest.approx(expected,
                                                                    abs=1e-10)

    def test_int_keys_for_1d(self):
        lat = RankOneLattice(1, 32)
        sampler = md_sample_adapter({5: 1.0}, lat)
        assert sampler.spectrum.entries == {5: 1.0}


class TestDenseMdDft:
    def test_matches_pointwise_evaluation(self):
        lat = RankOneLattice(2, 4)
        entries = {(1, 2): 1.0, (0, 3): 0.25}
        grid = dense_md_dft(entries, lat)
        for n0 in range(4):
            for n1 in range(4):
                expected = sum(
                    v * np.exp(-2j * np.pi * (k[0] * n0 + k[1] * n1) / 4)
                    for k, v in entries.items())
                assert grid[n0, n1] == pytest.approx(expected, abs=1e-12)

    def test_guard(self):
        with pytest.raises(OracleTooLarge):
            dense_md_dft({(0, 0, 0): 1.0}, RankOneLattice(3, 128))


class TestRelativeL2Error:
    def test_zero_for_equal(self):
        lat = RankOneLattice(2, 4)
        d = {(1, 2): 1.0}
        assert relative_l2_error(d, d, lat) == 0.0

    def test_mixed_key_styles(self):
        lat = RankOneLattice(1, 8)
        assert relative_l2_error({(3,): 1.0}, {3: 1.0}, lat) == 0.0

    def test_missing_entry(self):
        lat = RankOneLattice(1, 8)
        assert relative_l2_error({}, {3: 2.0}, lat) == pytest.approx(1.0)


class TestMdSfft:
    @pytest.mark.parametrize("dims,axis", [(1, 4096), (2, 64), (3, 16)])
    def test_noiseless_recovery(self, dims, axis):
        rng = np.random.default_rng(dims * 7)
        lat = RankOneLattice(dims, axis)
        flat = rng.choice(lat.total, 12, replace=False)
        entries = {unflatten_index(int(j), lat): float(a)
                   for j, a in zip(flat, rng.uniform(0.5, 1.5, 12))}
        sampler = md_sample_adapter(entries, lat)
        got = md_sfft(sampler, lat, SupportParams(r_bound=12),
                      np.random.default_rng(1))
        assert set(got) == set(entries)
        assert relative_l2_error(got, entries, lat) < 1e-9

    def test_noisy_recovery_and_stats(self):
        lat = RankOneLattice(3, 32)
        rng = np.random.default_rng(5)
        flat = rng.choice(lat.total, 20, replace=False)
        entries = {unflatten_index(int(j), lat): float(a)
                   for j, a in zip(flat, rng.uniform(0.5, 1.5, 20))}
        ledger = SampleLedger()
        sampler = md_sample_adapter(entries, lat,
                                    NoiseModel(0.01, "gaussian", 2), ledger)
        stats = {}
        got = md_sfft(sampler, lat, SupportParams(r_bound=20, eta=0.01),
                      np.random.default_rng(3), stats=stats)
        assert set(got) == set(entries)
        assert relative_l2_error(got, entries, lat) < 3e-2
        assert stats["ladder_steps"] >= 1
        assert ledger.unique_count < lat.total

    def test_empty_spectrum(self):
        lat = RankOneLattice(2, 16)
        sampler = md_sample_adapter({}, lat)
        assert md_sfft(sampler, lat, SupportParams(r_bound=4),
                       np.random.default_rng(0)) == {}
