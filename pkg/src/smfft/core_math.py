"""Number-theoretic and transform primitives.

Modular inverses, coprime sampling, a growing prime sieve, the wrapped
(periodized) Gaussian window, the low-frequency index window, and a dense
DFT wrapper that accepts arbitrary lengths (prime or composite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotCoprime, OracleTooLarge

# Largest modulus for which int64 progression arithmetic stays exact
# (see signal.Sampler): modulus * count must fit in 63 bits.
MAX_MODULUS = 1 << 46

# Guard for dense verification oracles.
DENSE_ORACLE_GUARD = 1 << 20


@dataclass(frozen=True)
class ModulusPair:
    """A multiplier q, a modulus m, and the inverse of q modulo m."""

    q: int
    m: int
    q_inv: int

    def __post_init__(self):
        if not (0 < self.q < self.m and 0 < self.q_inv < self.m):
            raise ValueError(f"multiplier/inverse out of range for modulus {self.m}")
        if (self.q * self.q_inv) % self.m != 1:
            raise ValueError("q_inv is not the inverse of q")

    @classmethod
    def create(cls, q: int, m: int) -> "ModulusPair":
        return cls(q, m, mod_inverse(q, m))


@dataclass(frozen=True)
class FilterSpec:
    """Wrapped-Gaussian window of width sigma (in index units) on Z_M.

    ``wrap_terms`` truncates the periodization sum to |h| <= wrap_terms,
    chosen so the dropped tail is below 1e-15 relative.
    """

    sigma: float
    modulus: int
    wrap_terms: int
    bandwidth: int

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if not (1 <= self.bandwidth <= self.modulus):
            raise ValueError("bandwidth must lie in [1, modulus]")
        if self.wrap_terms < 0:
            raise ValueError("wrap_terms must be nonnegative")

    @classmethod
    def create(cls, sigma: float, modulus: int, bandwidth: int) -> "FilterSpec":
        # Terms with (pi*sigma*|m/M + h|)^2 > 35 are below 1e-15 of the peak.
        reach = math.sqrt(35.0) * modulus / (math.pi * sigma)
        wrap = max(2, math.ceil((reach + bandwidth / 2 + 1) / modulus))
        return cls(sigma, modulus, wrap, bandwidth)


def mod_inverse(q: int, m: int) -> int:
    """Return the unique r in (0, m) with (q * r) % m == 1."""
    if not 0 < q < m:
        raise ValueError(f"require 0 < q < m, got q={q}, m={m}")
    try:
        return pow(q, -1, m)
    except ValueError as exc:
        raise NotCoprime(f"gcd({q}, {m}) = {math.gcd(q, m)} != 1") from exc


def sample_coprime(m: int, rng: np.random.Generator) -> int:
    """Draw Q uniformly from {q in [1, m) : gcd(q, m) = 1}.

    Rejection sampling; the acceptance rate phi(m)/m is bounded well away
    from zero, so this terminates quickly for any m >= 2.
    """
    if m < 2:
        raise ValueError("modulus must be >= 2")
    if m == 2:
        return 1
    while True:
        q = int(rng.integers(1, m))
        if math.gcd(q, m) == 1:
            return q


_PRIME_CACHE: list[int] = [2, 3, 5, 7, 11, 13]


def _extend_sieve(limit: int) -> None:
    if _PRIME_CACHE[-1] >= limit:
        return
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    _PRIME_CACHE[:] = np.flatnonzero(sieve).tolist()


def primes_greater_than(r: int, count: int) -> list[int]:
    """The ``count`` smallest primes strictly greater than r, ascending."""
    if r < 1 or count < 1:
        raise ValueError("require r >= 1 and count >= 1")
    # Rough upper bound on the count-th prime past r, grown on demand.
    limit = max(64, 2 * r, int(2.2 * (r + count) * math.log(r + count + 10)))
    while True:
        _extend_sieve(limit)
        out = [p for p in _PRIME_CACHE if p > r]
        if len(out) >= count:
            return out[:count]
        limit *= 2


def gaussian_filter_weight(m: int, spec: FilterSpec) -> float:
    """Wrapped Gaussian g_sigma(m/M) = sqrt(pi)*sigma*sum_h exp(-(pi*sigma*(m/M+h))^2)."""
    if not 0 <= m < spec.modulus:
        raise ValueError("index must lie in [0, modulus)")
    return float(gaussian_window(np.asarray([m]), spec)[0])


def gaussian_window(offsets: np.ndarray, spec: FilterSpec) -> np.ndarray:
    """Vectorized wrapped-Gaussian weights at integer offsets (mod M implied)."""
    x = np.asarray(offsets, dtype=float)[:, None] / spec.modulus
    h = np.arange(-spec.wrap_terms, spec.wrap_terms + 1, dtype=float)[None, :]
    s = math.pi * spec.sigma
    return math.sqrt(math.pi) * spec.sigma * np.exp(-((s * (x + h)) ** 2)).sum(axis=1)


def alias_window(k: int, m: int) -> list[int]:
    """The K retained sample indices {n : n <= k/2 or |n - m| < k/2}, ascending."""
    if not 1 <= k <= m:
        raise ValueError("require 1 <= k <= m")
    lo, hi = window_offsets(k)
    return sorted({off % m for off in range(lo, hi + 1)})


def window_offsets(k: int) -> tuple[int, int]:
    """The same window as :func:`alias_window`, as a contiguous signed run.

    Returns (lo, hi) with hi - lo + 1 == k; actual indices are offsets mod m.
    """
    hi = k // 2
    return hi - k + 1, hi


def dft(values: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Dense DFT with kernel exp(-2*pi*i*n*j/L); inverse applies 1/L and the
    conjugate kernel.  Arbitrary lengths are supported (numpy's pocketfft
    falls back to Rader/Bluestein for large prime factors, keeping the cost
    at O(L log L)).
    """
    v = np.asarray(values, dtype=complex)
    if v.ndim != 1 or v.size < 1:
        raise ValueError("expected a nonempty 1-D vector")
    return np.fft.ifft(v) if inverse else np.fft.fft(v)


def dense_oracle_dft(entries: dict[int, float], ambient_size: int) -> np.ndarray:
    """Materialize a sparse spectrum and return its dense sample vector.

    Test/verification use only; guarded against accidental huge allocations.
    """
    if ambient_size > DENSE_ORACLE_GUARD:
        raise OracleTooLarge(f"N={ambient_size} exceeds guard {DENSE_ORACLE_GUARD}")
    spec = np.zeros(ambient_size, dtype=complex)
    for j, v in entries.items():
        spec[j] = v
    return dft(spec)
