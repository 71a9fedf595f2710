"""Runtime scaling snapshots.

Two quick sweeps: grow the ambient size N from ~10^6 to ~10^12 at fixed
sparsity (time barely moves -- the dense FFT would need terabytes), then
grow R at fixed N ~ 1e8 (time grows roughly like R log R).  Each point is
a median of 3 seeded trials; see `smfft bench-n` / `smfft bench-r` for the
full CSV-producing versions.
"""

import statistics

from smfft.bench import run_trial

print("-- N sweep (d=3, R=50, eta=1e-2) --")
for m in (102, 645, 4096, 10321):
    times = [run_trial(m, 3, 50, 1e-2, 40 + t)["time_ms"] for t in range(3)]
    print(f"N = {m ** 3:>16,}   median {statistics.median(times):7.1f} ms")

print("-- R sweep (d=3, M=465, N ~ 1.0e8, eta=1e-2) --")
for r in (16, 64, 256):
    rows = [run_trial(465, 3, r, 1e-2, 80 + t) for t in range(3)]
    med = statistics.median(row["time_ms"] for row in rows)
    samples = rows[0]["samples"]
    print(f"R = {r:>3}   median {med:7.1f} ms   {samples:>7,} samples")
