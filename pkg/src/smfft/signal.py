"""Sparse spectrum model, sampling oracle, noise, and sample accounting.

The ground truth always lives in frequency space; time-domain samples are
synthesized on demand in O(R) per point.  N is never materialized, which is
what lets the ambient size run to 2^40 and beyond.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .core_math import MAX_MODULUS
from .errors import ParseError
from .nufft import nufft_exp_sum, worth_nufft

_TWO_PI = 2.0 * math.pi

# Resynchronize the cumulative phase product this often to bound drift.
_RESYNC = 2048


@dataclass(frozen=True)
class SparseSpectrum:
    """R-sparse nonnegative spectrum on an ambient grid of size N."""

    ambient_size: int
    entries: dict[int, float]

    def __post_init__(self):
        if self.ambient_size < 1:
            raise ValueError("ambient_size must be positive")
        for j, v in self.entries.items():
            if not 0 <= j < self.ambient_size:
                raise ValueError(f"index {j} outside [0, {self.ambient_size})")
            if not v > 0:
                raise ValueError(f"amplitude at {j} must be > 0, got {v}")

    @property
    def sparsity(self) -> int:
        return len(self.entries)

    @property
    def support(self) -> list[int]:
        return sorted(self.entries)


@dataclass(frozen=True)
class NoiseModel:
    """Per-sample complex Gaussian noise of standard deviation eta.

    The realization is a fixed function of the (reduced) sample location and
    the seed, so re-requesting the same point yields the same noisy value --
    the oracle behaves like a single noisy signal, not a fresh draw per call.
    """

    eta: float = 0.0
    kind: str = "none"
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("none", "gaussian"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.eta < 0:
            raise ValueError("eta must be nonnegative")
        if self.kind == "gaussian" and self.eta == 0:
            raise ValueError("gaussian noise requires eta > 0")


@dataclass
class SampleLedger:
    """Counts distinct sample locations (as reduced rationals) and requests."""

    unique_points: set[tuple[int, int]] = field(default_factory=set)
    total_requests: int = 0

    @property
    def unique_count(self) -> int:
        return len(self.unique_points)

    def record(self, nums: np.ndarray, den: int) -> None:
        self.total_requests += int(nums.size)
        g = np.gcd(nums, den)
        self.unique_points.update(zip((nums // g).tolist(), (den // g).tolist()))


def _splitmix64(x: np.ndarray) -> np.ndarray:
    x = (x + np.uint64(0x9E3779B97F4A7C15)) & np.uint64(0xFFFFFFFFFFFFFFFF)
    x ^= x >> np.uint64(30)
    x *= np.uint64(0xBF58476D1CE4E5B9)
    x ^= x >> np.uint64(27)
    x *= np.uint64(0x94D049BB133111EB)
    x ^= x >> np.uint64(31)
    return x


def make_noise(noise: NoiseModel, nums: np.ndarray, den: int) -> np.ndarray:
    """Deterministic complex Gaussian draws for sample points nums/den.

    Each point's draw is keyed by its reduced fraction and the seed
    (counter-based generation; no sequential RNG state), scaled so the
    per-sample standard deviation is eta.
    """
    nums = np.asarray(nums, dtype=np.int64)
    if noise.kind == "none":
        return np.zeros(nums.shape, dtype=complex)
    g = np.gcd(nums, den)
    with np.errstate(over="ignore"):
        key = _splitmix64((nums // g).astype(np.uint64))
        key ^= _splitmix64((den // g).astype(np.uint64) ^ np.uint64(noise.seed * 0x9E3779B97F4A7C15 & 0xFFFFFFFFFFFFFFFF))
        u1 = (_splitmix64(key) >> np.uint64(11)).astype(float) * 2.0**-53
        u2 = (_splitmix64(key ^ np.uint64(0xD1B54A32D192ED03)) >> np.uint64(11)).astype(float) * 2.0**-53
    u1 = np.clip(u1, 2.0**-53, None)
    # Box-Muller: two unit Gaussians become the real/imag parts.
    radius = np.sqrt(-2.0 * np.log(u1))
    z = radius * (np.cos(_TWO_PI * u2) + 1j * np.sin(_TWO_PI * u2))
    return (noise.eta / math.sqrt(2.0)) * z


class Sampler:
    """Oracle access to f(x) = sum_j exp(-2*pi*i*x*j) fhat_j at rationals q/P.

    Wraps a sparse spectrum (possibly the flattened image of a d-dimensional
    one), a noise model, and a ledger.  All batch requests used by the
    recovery pipeline are arithmetic progressions mod the denominator, which
    permits an O(count * R) evaluation by cumulative phase products.
    """

    def __init__(self, spectrum: SparseSpectrum, noise: NoiseModel | None = None,
                 ledger: SampleLedger | None = None):
        self.spectrum = spectrum
        self.noise = noise or NoiseModel()
        self.ledger = ledger if ledger is not None else SampleLedger()
        self._support = [int(j) for j in sorted(spectrum.entries)]
        self._amps = np.array([spectrum.entries[j] for j in self._support], dtype=float)

    @property
    def ambient_size(self) -> int:
        return self.spectrum.ambient_size

    def sample_at(self, numerator: int, denominator: int) -> complex:
        """Single sample of f at (numerator mod denominator)/denominator."""
        if denominator < 1:
            raise ValueError("denominator must be >= 1")
        q = numerator % denominator
        value = self.sample_progression(q, 0, 1, denominator)[0]
        return complex(value)

    def sample_progression(self, start: int, step: int, count: int,
                           den: int) -> np.ndarray:
        """Samples of f at ((start + k*step) mod den)/den for k = 0..count-1."""
        if den < 1 or count < 1:
            raise ValueError("need den >= 1 and count >= 1")
        if den > MAX_MODULUS or count > (1 << 16):
            raise ValueError("progression exceeds exact-arithmetic guards")
        start %= den
        step %= den
        nums = (start + step * np.arange(count, dtype=np.int64)) % den
        self.ledger.record(nums, den)

        out = np.zeros(count, dtype=complex)
        if self._support:
            jr = [j % den for j in self._support]
            step_frac = np.array([((step * j) % den) / den for j in jr])
            start_phase = np.exp(
                np.array([(-_TWO_PI * ((start * j) % den)) / den for j in jr]) * 1j)
            if worth_nufft(count, len(jr)):
                # Large batches: gridded evaluation in O(R + count log count).
                out = nufft_exp_sum(self._amps * start_phase, step_frac, 0, count)
            else:
                ratio = np.exp(-_TWO_PI * 1j * step_frac)
                powers = np.empty((count, len(jr)), dtype=complex)
                for lo in range(0, count, _RESYNC):
                    hi = min(lo + _RESYNC, count)
                    base = start + lo * step
                    powers[lo] = np.exp(
                        np.array([(-_TWO_PI * ((base * j) % den)) / den for j in jr]) * 1j)
                    if hi > lo + 1:
                        block = powers[lo:hi]
                        block[1:] = ratio
                        np.cumprod(block, axis=0, out=block)
                out = powers @ self._amps
        if self.noise.kind != "none":
            out = out + make_noise(self.noise, nums, den)
        return out

    def batch_subsampled(self, modulus: int, multiplier: int = 1) -> np.ndarray:
        """The modulus samples f((n*multiplier mod M)/M), n = 0..M-1.

        With multiplier 1 this is the aliased Nyquist vector at rate M; with
        multiplier [Q]^-1 it is additionally shuffled in frequency space.
        """
        return self.sample_progression(0, multiplier, modulus, modulus)


def sample_at(spectrum: SparseSpectrum, noise: NoiseModel, numerator: int,
              denominator: int, ledger: SampleLedger) -> complex:
    """Convenience wrapper over :meth:`Sampler.sample_at`."""
    return Sampler(spectrum, noise, ledger).sample_at(numerator, denominator)


def aliased_spectrum(spectrum: SparseSpectrum, modulus: int) -> dict[int, float]:
    """Ground-truth aliasing: fold the sparse map mod ``modulus``."""
    out: dict[int, float] = {}
    for j, v in spectrum.entries.items():
        out[j % modulus] = out.get(j % modulus, 0.0) + v
    return out


def load_signal_spec(path: str):
    """Parse a signal spec JSON file.

    Returns (dims, axis_size, entries, noise) where entries maps multi-index
    tuples (or plain ints when dims == 1) to amplitudes.
    """
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read signal spec {path}: {exc}") from exc
    try:
        dims = int(doc["dims"])
        axis = int(doc["axis_size"])
        support = doc["support"]
        values = doc["values"]
        if len(support) != len(values):
            raise ParseError("support and values lengths differ")
        entries = {}
        for idx, val in zip(support, values):
            key = int(idx) if dims == 1 else tuple(int(c) for c in idx)
            entries[key] = float(val)
        noise_doc = doc.get("noise", {"kind": "none", "eta": 0.0, "seed": 0})
        noise = NoiseModel(eta=float(noise_doc.get("eta", 0.0)),
                           kind=noise_doc.get("kind", "none"),
                           seed=int(noise_doc.get("seed", 0)))
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed signal spec {path}: {exc}") from exc
    return dims, axis, entries, noise
