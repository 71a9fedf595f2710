"""Sparse multidimensional FFT for real nonnegative spectra.

Recovers the support and values of an R-sparse nonnegative Fourier spectrum
from O(R log R log N) samples of the time-domain signal, in any fixed
dimension, with failure probability decaying like the number of probe
rounds.  See README.md for usage.
"""

from .core_math import (FilterSpec, ModulusPair, alias_window, dense_oracle_dft,
                        dft, gaussian_filter_weight, mod_inverse,
                        primes_greater_than, sample_coprime)
from .errors import (CandidateBlowup, ContractionFailure, IndexOutOfRange,
                     NotCoprime, OracleTooLarge, ParseError, SmfftError)
from .md_transform import (RankOneLattice, dense_md_dft, flatten_index,
                           lattice_point, md_sample_adapter, md_sfft,
                           relative_l2_error, unflatten_index)
from .signal import (NoiseModel, SampleLedger, Sampler, SparseSpectrum,
                     aliased_spectrum, load_signal_spec, make_noise)
from .support_recovery import (LadderPlan, SupportParams, build_ladder,
                               dealias_candidates, find_aliased_support,
                               find_support, plan_ladder)
from .value_recovery import (MeasurementSystem, apply_normal, back_project,
                             compute_values, draw_measurement)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
