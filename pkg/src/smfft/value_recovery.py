"""Value recovery on a known support via prime-modulus measurements.

Samples the signal on T prime-size grids, which yields a block system
FB fhat = f0 where each B^(t) aliases the support mod a random prime and
F^(t) is a dense DFT block.  (1/T) B*B is a small perturbation of the
identity with probability >= 1/2 per draw, so the system is solved by a
truncated Neumann series; draws failing an observable contraction test are
rejected and redrawn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core_math import primes_greater_than
from .errors import ContractionFailure
from .signal import Sampler

BLOCKS = 4  # T; the contraction probability bound needs T >= 4


@dataclass
class MeasurementSystem:
    """T prime-modulus sample blocks plus the implicit aliasing maps."""

    primes: list[int]
    support: list[int]
    residue_maps: list[np.ndarray]  # per block: support index -> residue class
    rhs: list[np.ndarray]           # per block: the P^(t) samples

    @property
    def sparsity(self) -> int:
        return len(self.support)


def prime_pool_size(r_bound: int, n_total: int) -> int:
    """Size 4*R*log_R(N) of the prime drawing pool (base clamped to 2)."""
    base = max(r_bound, 2)
    size = 4 * max(r_bound, 1) * math.log(n_total) / math.log(base)
    # Tolerate float noise so exact powers (e.g. N = R^3) don't round up.
    return max(1, math.ceil(size - 1e-9))


def draw_measurement(support: list[int], r_bound: int, n_total: int,
                     rng: np.random.Generator, sampler: Sampler,
                     t_blocks: int = BLOCKS) -> MeasurementSystem:
    """Draw T primes i.i.d. from the pool and sample the corresponding grids.

    Draws are with replacement; a repeated prime simply weights its residue
    blocks twice in the normal equations.
    """
    if not support:
        raise ValueError("support must be nonempty")
    pool = primes_greater_than(r_bound, prime_pool_size(r_bound, n_total))
    picks = [pool[int(i)] for i in rng.integers(0, len(pool), t_blocks)]
    residue_maps = [np.array([j % p for j in support], dtype=np.int64) for p in picks]
    rhs = [sampler.batch_subsampled(p, 1) for p in picks]
    return MeasurementSystem(picks, list(support), residue_maps, rhs)


def apply_normal(system: MeasurementSystem, x: np.ndarray) -> np.ndarray:
    """(1/T) B*B x, computed residue-wise in O(T*R)."""
    x = np.asarray(x, dtype=complex)
    out = np.zeros_like(x)
    for p, res in zip(system.primes, system.residue_maps):
        sums = np.zeros(p, dtype=complex)
        np.add.at(sums, res, x)
        out += sums[res]
    return out / len(system.primes)


def back_project(system: MeasurementSystem) -> np.ndarray:
    """(1/T) (FB)* f0: per block, correlate the samples with the DFT kernel
    at the support residues, then average the blocks."""
    out = np.zeros(system.sparsity, dtype=complex)
    for p, res, block in zip(system.primes, system.residue_maps, system.rhs):
        # ifft folds the spectrum mod p: u_l = sum_{j = l mod p} fhat_j,
        # which is exactly B^(t) fhat read off at the residue classes.
        correlation = np.fft.ifft(block)
        out += correlation[res]
    return out / len(system.primes)


def neumann_solve(system: MeasurementSystem, terms: int):
    """Truncated Neumann series sum_{n=0}^{Z} (I - (1/T)B*B)^n f0hat.

    Returns (solution, residual_norms).  The residual norms certify the
    contraction: an accepted draw must halve them at each recorded step.
    """
    residual = back_project(system)
    solution = residual.copy()
    norms = [float(np.linalg.norm(residual))]
    for _ in range(terms):
        residual = residual - apply_normal(system, residual)
        solution += residual
        norms.append(float(np.linalg.norm(residual)))
    return solution, norms


def contraction_ok(norms: list[float]) -> bool:
    """Observable certificate for ||I - (1/T)B*B||_2 < 1/2.

    Checks geometric halving of the first two Neumann residuals.  A zero
    initial residual (exactly consistent data) is trivially accepted.
    """
    if len(norms) < 3:
        return True
    if norms[0] == 0.0:
        return True
    return norms[1] <= norms[0] / 2 and norms[2] <= max(norms[1] / 2, 1e-300)


def compute_values(support: list[int], r_bound: int, n_total: int,
                   p_fail: float, eta: float, sampler: Sampler,
                   rng: np.random.Generator, mu: float = 0.0,
                   stats: dict | None = None) -> dict[int, float]:
    """Recover the spectrum values on ``support`` to accuracy O(eta).

    Up to L = ceil(log2(1/p)) measurement draws are attempted; each accepted
    draw is solved with Z = ceil(log2(1/eta)) Neumann terms.  When mu > 0,
    recovered entries below mu/2 are dropped: with mu a valid lower bound on
    the smallest true amplitude, such entries can only be spurious support
    survivors (their exact value is zero).
    """
    support = sorted(support)
    if not support:
        return {}
    if not 0 < eta < 1:
        raise ValueError("eta must lie in (0, 1); pass the target accuracy "
                         "when the data is noiseless")
    z_terms = max(2, math.ceil(math.log2(1.0 / eta)))
    attempts = max(1, math.ceil(math.log2(1.0 / p_fail)))
    for attempt in range(attempts):
        system = draw_measurement(support, r_bound, n_total, rng, sampler)
        solution, norms = neumann_solve(system, z_terms)
        if contraction_ok(norms):
            if stats is not None:
                stats["redraws"] = attempt
            values = {}
            for j, v in zip(support, solution.real):
                if v > mu / 2:
                    values[j] = float(v)
            return values
    raise ContractionFailure(
        f"all {attempts} measurement draws rejected for |support|={len(support)}")
