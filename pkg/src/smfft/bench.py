"""Randomized experiment runners behind the benchmark commands.

Every trial is fully determined by its seed: the instance (support and
amplitudes), the noise realization, and the algorithm's random choices all
derive from it.
"""

from __future__ import annotations

import time

import numpy as np

from .md_transform import RankOneLattice, md_sample_adapter, md_sfft, relative_l2_error
from .signal import NoiseModel, SampleLedger
from .support_recovery import SupportParams

CSV_COLUMNS = ("N", "R", "d", "eta", "seed", "time_ms", "samples",
               "rel_l2_error", "success")

# Default sweeps: N = M^3 over a geometric grid (cost is N-independent, so
# the sweep extends far past any dense baseline), and an R sweep at N ~ 1e8.
BENCH_N_AXIS_SIZES = (102, 256, 645, 1626, 4096, 10321)
BENCH_R_AXIS_SIZE = 465
BENCH_R_VALUES = (8, 16, 32, 64, 128, 256)


def random_instance(axis_size: int, dims: int, sparsity: int, eta: float,
                    seed: int):
    """A random sparse nonnegative instance with amplitudes in [0.5, 1.5]."""
    rng = np.random.default_rng(seed)
    lattice = RankOneLattice(dims, axis_size)
    flat = rng.choice(lattice.total, size=sparsity, replace=False) if (
        lattice.total < 1 << 30) else np.unique(rng.integers(0, lattice.total, 4 * sparsity))[:sparsity]
    while len(flat) < sparsity:  # collision top-up for the huge-N path
        extra = np.unique(np.concatenate([flat, rng.integers(0, lattice.total, 4 * sparsity)]))
        flat = extra[:sparsity]
    amps = rng.uniform(0.5, 1.5, size=len(flat))
    entries = {}
    for j, v in zip(flat.tolist(), amps.tolist()):
        digits, rest = [], int(j)
        for _ in range(dims):
            rest, d = divmod(rest, axis_size)
            digits.append(d)
        key = digits[0] if dims == 1 else tuple(digits)
        entries[key] = float(v)
    noise = NoiseModel(eta=eta, kind="gaussian", seed=seed + 1) if eta > 0 else NoiseModel()
    return entries, lattice, noise


def make_params(sparsity: int, eta: float, **overrides) -> SupportParams:
    fields = dict(r_bound=sparsity, eta=eta)
    fields.update(overrides)
    return SupportParams(**fields)


def run_trial(axis_size: int, dims: int, sparsity: int, eta: float, seed: int,
              **param_overrides) -> dict:
    """One recovery trial; returns a CSV-schema row dict."""
    entries, lattice, noise = random_instance(axis_size, dims, sparsity, eta, seed)
    params = make_params(sparsity, eta, **param_overrides)
    ledger = SampleLedger()
    sampler = md_sample_adapter(entries, lattice, noise, ledger)
    rng = np.random.default_rng(seed + 2)
    start = time.perf_counter()
    recovered = md_sfft(sampler, lattice, params, rng)
    elapsed_ms = (time.perf_counter() - start) * 1e3
    err = relative_l2_error(recovered, entries, lattice)
    err_cap = 1e-8 if eta == 0 else 3 * eta
    rec_keys = set(recovered) if dims > 1 else {k[0] for k in recovered}
    success = rec_keys == set(entries) and err <= err_cap
    return {
        "N": lattice.total, "R": sparsity, "d": dims, "eta": eta, "seed": seed,
        "time_ms": elapsed_ms, "samples": ledger.unique_count,
        "rel_l2_error": err, "success": int(success),
    }


def sweep(configs, trials: int, base_seed: int, warmup: bool = True) -> list[dict]:
    """Run ``trials`` seeded trials per (axis_size, dims, sparsity, eta) config."""
    rows = []
    for i, (axis_size, dims, sparsity, eta) in enumerate(configs):
        if warmup:  # discard a warm-up run so timings exclude one-time costs
            run_trial(axis_size, dims, sparsity, eta, base_seed + 1000003 * i)
        for t in range(trials):
            rows.append(run_trial(axis_size, dims, sparsity, eta,
                                  base_seed + 1000003 * i + 17 * (t + 1)))
    return rows


def bench_n_rows(sparsity: int = 50, dims: int = 3, eta: float = 1e-2,
                 trials: int = 5, base_seed: int = 0,
                 axis_sizes=BENCH_N_AXIS_SIZES) -> list[dict]:
    configs = [(m, dims, sparsity, eta) for m in axis_sizes]
    return sweep(configs, trials, base_seed)


def bench_r_rows(axis_size: int = BENCH_R_AXIS_SIZE, dims: int = 3,
                 eta: float = 1e-2, trials: int = 5, base_seed: int = 0,
                 sparsities=BENCH_R_VALUES) -> list[dict]:
    configs = [(axis_size, dims, r, eta) for r in sparsities]
    return sweep(configs, trials, base_seed)


def rows_to_csv(rows: list[dict]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(_format(row[c]) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def _format(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)
