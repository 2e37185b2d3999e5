"""Long-time limiting Wigner fields and eigenvalue degeneracy.

The time average keeps only pairs of Bloch modes with equal energy, so the
limiting pattern is fixed by the degeneracy structure of the ring spectrum.
For the cycle (m = 1) it has a closed form. Some larger m share the cycle's
degeneracies and therefore its pattern; others develop stripes.

    python demos/02_long_time_limit.py [outdir]
"""

import sys
from collections import Counter
from pathlib import Path

import numpy as np

from ctqw_wigner import RingSpec, bloch_spectrum, closed_form_limit_m1, limiting_wigner_circulant
from ctqw_wigner.render import render_heatmap

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output") / "long_time_limit"


def class_sizes(N, m):
    return dict(sorted(Counter(len(c) for c in bloch_spectrum(RingSpec(N, m)).classes()).items()))


# %% N = 50: m = 1 and m = 3 coincide, m = 2 and m = 4 have stripes
for m in (1, 2, 3, 4):
    w = limiting_wigner_circulant(RingSpec(50, m), 25)
    render_heatmap(w, out / f"N50_m{m}.png")
    dev = np.max(np.abs(w.values - closed_form_limit_m1(50, 25).values))
    striped = np.flatnonzero(np.ptp(w.values[:, 1:], axis=0) > 1e-12) + 1
    print(f"N=50 m={m}: class sizes {class_sizes(50, m)}, deviation from cycle {dev:.2e}, "
          f"oscillating rows k={striped.tolist()}")

# %% odd N: 51 keeps the cycle pattern, 75 does not
for N, m in ((51, 2), (51, 3), (51, 4), (75, 2)):
    j = N // 2
    w = limiting_wigner_circulant(RingSpec(N, m), j)
    render_heatmap(w, out / f"N{N}_m{m}.png")
    dev = np.max(np.abs(w.values - closed_form_limit_m1(N, j).values))
    print(f"N={N} m={m}: deviation from cycle closed form {dev:.2e}")

print(f"heatmaps written to {out}")
