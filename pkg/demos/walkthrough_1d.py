"""Step-by-step 1-D walkthrough on a tiny signal.

Recovers the spectrum of f(x) = e^{-2 pi i x} + e^{-46 pi i x} + e^{-70 pi i x}
(support {1, 23, 35} on a grid of 40) and prints what each stage sees:
the aliased supports at coarse moduli, the effect of a coprime shuffle,
and the final recovered values.
"""

import numpy as np

from smfft import (ModulusPair, SampleLedger, Sampler, SparseSpectrum,
                   SupportParams, aliased_spectrum, dealias_candidates,
                   find_support, mod_inverse, plan_ladder)
from smfft.value_recovery import compute_values

N = 40
truth = {1: 1.0, 23: 1.0, 35: 1.0}
spectrum = SparseSpectrum(N, truth)

# Aliasing: sampling at rate M folds the support mod M.
for m in (10, 20):
    print(f"aliased support mod {m}: {sorted(aliased_spectrum(spectrum, m))}")

# Dealiasing doubles the modulus and considers both translated copies.
cands = dealias_candidates({1, 3, 5}, 10, 2)
print("candidates when going 10 -> 20:", sorted(cands))

# A coprime shuffle Q relabels line j to j*Q mod N, spreading out clusters.
q = 13
print(f"shuffle by Q={q}: {sorted((j * q) % N for j in truth)} "
      f"(inverse multiplier {mod_inverse(q, N)})")
ModulusPair.create(q, N)  # validates the pair

# End-to-end recovery.
params = SupportParams(r_bound=3)
plan = plan_ladder(N, params)
print(f"base modulus K={params.k_base}, ladder moduli {plan.moduli} "
      "(K already exceeds N here, so one level suffices)")

ledger = SampleLedger()
sampler = Sampler(spectrum, ledger=ledger)
rng = np.random.default_rng(0)
support = sorted(find_support(sampler, N, params, rng))
print("recovered support:", support)
values = compute_values(support, 3, N, params.p_fail, 1e-10, sampler, rng,
                        mu=params.mu)
for j in support:
    print(f"  fhat[{j}] = {values[j]:.12f}")
print(f"{ledger.unique_count} distinct samples of a length-{N} signal")
