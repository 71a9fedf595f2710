"""Rank-1 lattice reduction of d-dimensional problems to 1-D, and the
end-to-end sparse transform driver.

A cubic grid of size N = M^d with generator g = (1, M, ..., M^(d-1)) turns
the d-dimensional DFT into a 1-D DFT of the same coefficients reordered by
the base-M digit isomorphism, with no oversampling: distinct multi-indices
never collide because |(k - j) . g| < N.  The driver flattens the spectrum,
runs the 1-D support and value recovery, and unflattens the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core_math import DENSE_ORACLE_GUARD
from .errors import IndexOutOfRange, OracleTooLarge
from .signal import NoiseModel, SampleLedger, Sampler, SparseSpectrum
from .support_recovery import SupportParams, find_support, plan_ladder
from .value_recovery import compute_values


@dataclass(frozen=True)
class RankOneLattice:
    """Cubic grid [0, M)^d with the rank-1 generator (1, M, ..., M^(d-1))."""

    dims: int
    axis_size: int

    def __post_init__(self):
        if self.dims < 1 or self.axis_size < 1:
            raise ValueError("dims and axis_size must be positive")

    @property
    def generator(self) -> tuple[int, ...]:
        return tuple(self.axis_size**i for i in range(self.dims))

    @property
    def total(self) -> int:
        return self.axis_size**self.dims


def flatten_index(multi, lattice: RankOneLattice) -> int:
    """Base-M digits to flat index: sum multi[i] * M^i."""
    multi = tuple(int(c) for c in multi)
    if len(multi) != lattice.dims:
        raise IndexOutOfRange(f"expected {lattice.dims} components")
    if any(not 0 <= c < lattice.axis_size for c in multi):
        raise IndexOutOfRange(f"components of {multi} outside [0, {lattice.axis_size})")
    return sum(c * g for c, g in zip(multi, lattice.generator))


def unflatten_index(flat: int, lattice: RankOneLattice) -> tuple[int, ...]:
    """Flat index to base-M digits, least significant first."""
    if not 0 <= flat < lattice.total:
        raise IndexOutOfRange(f"{flat} outside [0, {lattice.total})")
    digits = []
    for _ in range(lattice.dims):
        flat, digit = divmod(flat, lattice.axis_size)
        digits.append(digit)
    return tuple(digits)


def lattice_point(n: int, lattice: RankOneLattice) -> tuple[Fraction, ...]:
    """The n-th rank-1 quadrature point ((n * M^i mod N) / N)_i in [0,1)^d."""
    if not 0 <= n < lattice.total:
        raise IndexOutOfRange(f"{n} outside [0, {lattice.total})")
    total = lattice.total
    return tuple(Fraction((n * g) % total, total) for g in lattice.generator)


def md_sample_adapter(entries: dict, lattice: RankOneLattice,
                      noise: NoiseModel | None = None,
                      ledger: SampleLedger | None = None) -> Sampler:
    """Wrap a d-dimensional sparse spectrum as a 1-D sampling oracle.

    Restricting f to the rank-1 line gives a 1-D signal whose spectrum is
    the original one re-indexed by flatten_index, so no geometric point
    evaluation is ever needed.  Plain int keys are accepted when d = 1.
    """
    flat_entries = {}
    for key, value in entries.items():
        if isinstance(key, (int, np.integer)):
            key = (int(key),) + (0,) * (lattice.dims - 1)
        flat_entries[flatten_index(key, lattice)] = float(value)
    spectrum = SparseSpectrum(lattice.total, flat_entries)
    return Sampler(spectrum, noise, ledger)


def md_sfft(sampler: Sampler, lattice: RankOneLattice, params: SupportParams,
            rng: np.random.Generator, value_accuracy: float | None = None,
            stats: dict | None = None) -> dict[tuple[int, ...], float]:
    """Recover a d-dimensional sparse nonnegative spectrum end to end.

    The sampler must be an oracle for the flattened 1-D problem (see
    :func:`md_sample_adapter`).  ``value_accuracy`` defaults to the noise
    level, or 1e-10 for noiseless data.
    """
    n_total = lattice.total
    support = find_support(sampler, n_total, params, rng)
    # Ladder padding can admit indices beyond M^d; those cannot be real.
    support = sorted(j for j in support if j < n_total)
    if stats is not None:
        stats["ladder_steps"] = plan_ladder(n_total, params).levels
        stats["redraws"] = 0
    if not support:
        return {}
    accuracy = value_accuracy
    if accuracy is None:
        accuracy = params.eta if params.eta > 0 else 1e-10
    values = compute_values(support, params.r_bound, n_total, params.p_fail,
                            accuracy, sampler, rng, mu=params.mu, stats=stats)
    return {unflatten_index(j, lattice): v for j, v in values.items()}


def dense_md_dft(entries: dict, lattice: RankOneLattice) -> np.ndarray:
    """Dense d-dimensional sample grid of the spectrum (test/verify only).

    Applies the dimension-by-dimension transform via repeated 1-D FFTs on
    the materialized coefficient array; guarded by the oracle size cap.
    """
    if lattice.total > DENSE_ORACLE_GUARD:
        raise OracleTooLarge(f"N={lattice.total} exceeds guard {DENSE_ORACLE_GUARD}")
    shape = (lattice.axis_size,) * lattice.dims
    spec = np.zeros(shape, dtype=complex)
    for key, value in entries.items():
        if isinstance(key, (int, np.integer)):
            key = (int(key),) + (0,) * (lattice.dims - 1)
        spec[tuple(key)] = value
    samples = spec
    for axis in range(lattice.dims):
        samples = np.fft.fft(samples, axis=axis)
    return samples


def relative_l2_error(recovered: dict, truth: dict, lattice: RankOneLattice) -> float:
    """|| fhat_rec - fhat_true ||_2 / || fhat_true ||_2 over the union support."""

    def normalize(d):
        out = {}
        for key, value in d.items():
            if isinstance(key, (int, np.integer)):
                key = (int(key),) + (0,) * (lattice.dims - 1)
            out[tuple(key)] = float(value)
        return out

    rec, tru = normalize(recovered), normalize(truth)
    keys = sorted(set(rec) | set(tru))
    diff = math.sqrt(sum((rec.get(k, 0.0) - tru.get(k, 0.0)) ** 2 for k in keys))
    denom = math.sqrt(sum(v * v for v in tru.values()))
    if denom == 0.0:
        return 0.0 if diff == 0.0 else math.inf
    return diff / denom
