"""Support recovery: the dealiasing ladder and the shuffle/filter/probe test.

The ladder starts at a base modulus K sized so a full size-K DFT is cheap,
then grows the working modulus by bounded factors.  At each level the
candidate set (translated copies of the previous aliased support) is pruned
by randomized probes: shuffle frequencies by a random coprime multiplier,
apply a wrapped-Gaussian window to O(K) samples, take a size-K FFT, and
threshold the probe value at each candidate's grid point.  Nonnegativity of
the spectrum guarantees true support always survives; random shuffling makes
spurious candidates fail some round with high probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core_math import (FilterSpec, ModulusPair, gaussian_window, mod_inverse,
                        sample_coprime, window_offsets)
from .errors import CandidateBlowup
from .signal import Sampler

# Candidate sets beyond this multiple of K signal parameter misuse.
CANDIDATE_CAP_FACTOR = 8


@dataclass(frozen=True)
class SupportParams:
    """Tunables of the support search plus the user-supplied estimates.

    mu is a lower bound on the smallest nonzero amplitude, delta_ratio an
    upper bound on the dynamic range ||fhat||_inf / mu.  Neither is estimated
    from data; defaults match an amplitude range of [0.5, 1.5].
    """

    r_bound: int
    alpha: float = 0.15
    delta: float = 0.1
    rho: int = 2
    p_fail: float = 1e-4
    mu: float = 0.5
    delta_ratio: float = 3.0
    eta: float = 0.0

    def __post_init__(self):
        if self.r_bound < 0:
            raise ValueError("r_bound must be nonnegative")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.rho < 2:
            raise ValueError("rho must be >= 2")
        if not 0 < self.p_fail < 1:
            raise ValueError("p_fail must lie in (0, 1)")
        if self.mu <= 0 or self.delta_ratio < 1:
            raise ValueError("mu must be > 0 and delta_ratio >= 1")
        if self.eta > self.delta * self.mu / 2:
            raise ValueError("noise level violates eta <= delta*mu/2")

    @property
    def k_base(self) -> int:
        """Base modulus K = ceil(max{8, 2/a}/pi * R * sqrt(log(2RD/d) log(2D/d)))."""
        r = max(self.r_bound, 1)
        l1 = math.log(2 * r * self.delta_ratio / self.delta)
        l2 = math.log(2 * self.delta_ratio / self.delta)
        c = max(8.0, 2.0 / self.alpha) / math.pi
        return math.ceil(c * r * math.sqrt(l1 * l2))

    @property
    def probe_rounds(self) -> int:
        """L = ceil(log_alpha(p)) independent shuffle rounds per level."""
        return max(1, math.ceil(math.log(self.p_fail) / math.log(self.alpha)))

    @property
    def threshold(self) -> float:
        """delta*mu/2 probe threshold, halved again when noise is present."""
        t = self.delta * self.mu / 2
        return t / 2 if self.eta > 0 else t

    def sigma(self, modulus: int) -> float:
        """Gaussian width alpha*(M/2R)/sqrt(log(2*R*Delta/delta))."""
        r = max(self.r_bound, 1)
        l1 = math.log(2 * r * self.delta_ratio / self.delta)
        return self.alpha * (modulus / (2 * r)) / math.sqrt(l1)


@dataclass(frozen=True)
class LadderPlan:
    """The moduli ladder M_1 = K, M_{k+1} = rho_k * M_k up to the padded N."""

    k_base: int
    factors: tuple[int, ...]
    n_padded: int
    moduli: tuple[int, ...] = field(default=())

    def __post_init__(self):
        moduli = [self.k_base]
        for f in self.factors:
            moduli.append(moduli[-1] * f)
        if moduli[-1] != self.n_padded:
            raise ValueError("factors do not multiply out to n_padded")
        object.__setattr__(self, "moduli", tuple(moduli))

    @property
    def levels(self) -> int:
        return len(self.moduli)


def _min_product_with_factors(target: int, count: int, rho: int) -> tuple[int, ...]:
    """Smallest product >= target using exactly ``count`` factors in [2, rho]."""
    best: list[tuple[int, ...] | None] = [None]

    def recur(chosen: list[int], product: int, remaining: int, min_f: int):
        if product * (rho**remaining) < target:
            return
        if remaining == 0:
            if best[0] is None or product < math.prod(best[0]):
                best[0] = tuple(chosen)
            return
        # Nondecreasing factors avoid enumerating permutations.
        for f in range(min_f, rho + 1):
            recur(chosen + [f], product * f, remaining - 1, f)

    recur([], 1, count, 2)
    assert best[0] is not None
    return best[0]


def build_ladder(requested_n: int, k_base: int, rho: int) -> LadderPlan:
    """Choose the padded size N = K * prod(rho_i) >= requested_n.

    The number of ladder steps is minimized first (factors as large as
    allowed), then the overshoot: among plans with that many steps, the
    smallest padded N wins.
    """
    if requested_n < 1:
        raise ValueError("requested_n must be positive")
    if k_base >= requested_n:
        return LadderPlan(k_base, (), k_base)
    target = -(-requested_n // k_base)  # ceil division
    steps = max(1, math.ceil(math.log(target) / math.log(rho)))
    while rho**steps < target:  # guard against float log rounding
        steps += 1
    factors = _min_product_with_factors(target, steps, rho)
    return LadderPlan(k_base, factors, k_base * math.prod(factors))


def plan_ladder(requested_n: int, params: SupportParams) -> LadderPlan:
    return build_ladder(requested_n, params.k_base, params.rho)


def dealias_candidates(aliased: set[int], m_k: int, rho_k: int) -> set[int]:
    """Union of rho_k translated copies of the aliased support."""
    if any(not 0 <= n < m_k for n in aliased):
        raise ValueError("aliased indices must lie in [0, m_k)")
    return {n + m * m_k for n in aliased for m in range(rho_k)}


def initial_aliased_support(sampler: Sampler, plan: LadderPlan,
                            params: SupportParams) -> set[int]:
    """Aliased support at the base level via one full size-M_1 DFT.

    The aliased coefficients are sums of nonnegative entries, so an index is
    in the aliased support iff its coefficient clears the threshold.
    """
    m1 = plan.moduli[0]
    samples = sampler.batch_subsampled(m1, 1)
    fhat = np.fft.ifft(samples)
    return {int(l) for l in np.flatnonzero(np.abs(fhat) > params.threshold)}


def compute_phi(sampler: Sampler, m_k: int, k_base: int, q: ModulusPair,
                sigma: float) -> np.ndarray:
    """Probe spectrum phi at the K grid points j*M_k/K, j = 0..K-1.

    Gathers the K window samples at locations (m*Q mod M)/M -- which, under
    the exp(-2*pi*i*x*j) signal convention, relabels spectral line l to
    position l*Q -- weights them by the wrapped Gaussian, folds them mod K,
    and applies a size-K DFT with the positive-sign kernel
    exp(+2*pi*i*n*m/K).  A peak at grid point n then certifies a line near
    n*M/K in the shuffled spectrum, matching :func:`probe_index`.
    """
    if m_k % k_base != 0:
        raise ValueError("k_base must divide m_k")
    spec = FilterSpec.create(sigma, m_k, k_base)
    lo, hi = window_offsets(k_base)
    offsets = np.arange(lo, hi + 1)
    weights = gaussian_window(offsets, spec)
    samples = sampler.sample_progression(lo * q.q, q.q, k_base, m_k)
    folded = np.zeros(k_base, dtype=complex)
    np.add.at(folded, offsets % k_base, weights * samples / m_k)
    return np.fft.ifft(folded) * k_base


def probe_index(n: int, q: int, m_k: int, k_base: int) -> int:
    """Grid index nearest (n*Q mod M_k)*K/M_k, rounding half up, mod K."""
    s = (n * q) % m_k
    return ((2 * s * k_base + m_k) // (2 * m_k)) % k_base


def find_aliased_support(candidate: set[int], m_k: int, k_base: int,
                         params: SupportParams, sampler: Sampler,
                         rng: np.random.Generator) -> set[int]:
    """Prune a candidate set down to the aliased support at modulus m_k.

    Runs L independent shuffle rounds; a candidate survives only if its probe
    clears the threshold in every round.  True aliased-support elements
    always survive (noiseless); each spurious candidate survives all rounds
    with probability at most about alpha^L = p_fail.
    """
    sigma = params.sigma(m_k)
    survivors = set(candidate)
    for _ in range(params.probe_rounds):
        if not survivors:
            break
        q = sample_coprime(m_k, rng)
        pair = ModulusPair(q, m_k, mod_inverse(q, m_k))
        phi = compute_phi(sampler, m_k, k_base, pair, sigma)
        survivors = {n for n in survivors
                     if abs(phi[probe_index(n, q, m_k, k_base)]) >= params.threshold}
    return survivors


def find_support(sampler: Sampler, requested_n: int, params: SupportParams,
                 rng: np.random.Generator) -> set[int]:
    """Full support search: plan the ladder, then dealias level by level."""
    plan = plan_ladder(requested_n, params)
    aliased = initial_aliased_support(sampler, plan, params)
    if not aliased:
        return set()
    cap = CANDIDATE_CAP_FACTOR * params.rho * plan.k_base
    for level in range(1, plan.levels):
        rho_k = plan.factors[level - 1]
        candidate = dealias_candidates(aliased, plan.moduli[level - 1], rho_k)
        if len(candidate) > cap:
            raise CandidateBlowup(
                f"{len(candidate)} candidates at level {level} exceed cap {cap}; "
                "check mu/delta_ratio estimates")
        aliased = find_aliased_support(candidate, plan.moduli[level],
                                       plan.k_base, params, sampler, rng)
    return aliased
