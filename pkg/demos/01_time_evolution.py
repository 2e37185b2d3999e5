"""Instantaneous Wigner fields on ordered rings.

A walker starts on node j = N/2 of a ring where every node is linked to its m
nearest neighbours on each side. At t = 0 the field is a single line at x = j
(plus an alternating line at the opposite node when N is even). As time
passes it spreads over the whole phase space.

Run from the repository root:

    python demos/01_time_evolution.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np

from ctqw_wigner import RingSpec, wigner_circulant
from ctqw_wigner.render import render_heatmap

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output") / "time_evolution"

# %% t = 0: the pattern does not depend on m
for N in (50, 51):
    W0 = wigner_circulant(RingSpec(N, 2), N // 2, 0.0).values
    rows = np.flatnonzero(np.abs(W0).sum(axis=1) > 1e-12)
    print(f"N={N}, t=0: non-zero rows x = {rows.tolist()}, values in {sorted(set(np.round(W0[rows].ravel() * N, 12)))} / N")

# %% a grid of snapshots, m = 1..3 and t = 1, 2, 5, 20
for N in (50, 51):
    for m in (1, 2, 3):
        spec = RingSpec(N, m)
        for t in (1, 2, 5, 20):
            w = wigner_circulant(spec, N // 2, t)
            render_heatmap(w, out / f"N{N}_m{m}_t{t}.png")
            # the field is a quasi-probability: negative cells are allowed,
            # but every vertical line sums to a transition probability
            print(f"N={N} m={m} t={t:>2}: min {w.values.min():+.4f} max {w.values.max():+.4f} "
                  f"sum {w.values.sum():.12f}")

print(f"heatmaps written to {out}")
