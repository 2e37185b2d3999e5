"""Marginals, half-period asymmetry maps and seeded ensemble averages."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .netgen import PRNG_NAME, RingSpec, laplacian, ws_rewire
from .spectral import SpectralData, SpectralError, eigendecompose
from .wigner import LIMIT, WignerField, default_node, limiting_wigner_general

THREADS_ENV = "CTQW_THREADS"


class EnsembleError(RuntimeError):
    """A realization of an ensemble failed; ``seed`` identifies it."""

    def __init__(self, seed: int, cause: Exception):
        super().__init__(f"realization with seed {seed} failed: {cause}")
        self.seed = seed


@dataclass(frozen=True, eq=False)
class MarginalReport:
    """Line sums of a Wigner field.

    ``chi[x] = sum_k W[x, k]`` is the transition probability to node ``x``;
    ``k_marginal[k] = sum_x W[x, k]``.
    """

    chi: np.ndarray
    k_marginal: np.ndarray
    j: int


@dataclass(frozen=True, eq=False)
class AsymmetryMap:
    """Differences between a field and its half-period shift (even ``N`` only).

    ``dx[x, k] = W[x + N/2, k] - W[x, k]`` for ``x < N/2``,
    ``dk[x, k] = W[x, k + N/2] - W[x, k]`` for ``k < N/2`` and
    ``chi_asym[x] = chi[x + N/2] - chi[x]`` for ``x < N/2``.
    """

    dx: np.ndarray
    dk: np.ndarray
    chi_asym: np.ndarray


@dataclass(frozen=True, eq=False)
class EnsembleResult:
    mean_field: WignerField
    mean_chi: np.ndarray
    n_realizations: int
    base_seed: int
    connected: tuple
    skipped_rewires: tuple = field(default=())

    def metadata(self) -> dict:
        return {
            **self.mean_field.metadata(),
            "base_seed": int(self.base_seed),
            "prng": PRNG_NAME,
            "n_real": self.n_realizations,
            "n_disconnected": sum(1 for c in self.connected if not c),
            "connected": "".join("1" if c else "0" for c in self.connected),
        }


def marginals(w: WignerField) -> MarginalReport:
    values = w.values
    return MarginalReport(values.sum(axis=1), values.sum(axis=0), w.j)


def asymmetry(w: WignerField) -> AsymmetryMap:
    N = w.N
    if N % 2:
        raise ValueError(f"half-period asymmetry needs even N, got N={N}")
    h = N // 2
    W = w.values
    chi = W.sum(axis=1)
    return AsymmetryMap(W[h:, :] - W[:h, :], W[:, h:] - W[:, :h], chi[h:] - chi[:h])


def transition_probability(s: SpectralData, j: int, t: float) -> np.ndarray:
    """``|<x| exp(-iHt) |j>|^2`` for every node ``x``."""
    return np.abs(s.evolve(j, t)) ** 2


def worker_count(n_tasks: int) -> int:
    """Thread cap from ``CTQW_THREADS`` (default: CPU count)."""
    env = os.environ.get(THREADS_ENV)
    cap = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(cap, n_tasks))


def _realization(spec: RingSpec, p: float, j: int, seed: int, tol: Optional[float]):
    g = ws_rewire(spec, p, seed)
    try:
        s = eigendecompose(laplacian(g), tol)
        field_r = limiting_wigner_general(s, j)
    except (SpectralError, ArithmeticError) as exc:
        raise EnsembleError(seed, exc) from exc
    return field_r.values, g.is_connected(), g.skipped_rewires, s.tol


def ensemble_average(
    spec: RingSpec,
    p: float,
    j: Optional[int] = None,
    n_real: int = 200,
    base_seed: int = 0,
    *,
    tol: Optional[float] = None,
    threads: Optional[int] = None,
) -> EnsembleResult:
    """Average the long-time Wigner field over Watts-Strogatz realizations.

    Realization ``r`` uses seed ``base_seed + r`` (mod 2**64). Realizations may
    run on a thread pool, but the sum is always taken in index order, so the
    result is bitwise reproducible for a given ``base_seed``.
    """
    if n_real < 1:
        raise ValueError(f"n_real must be >= 1, got {n_real}")
    N = spec.N
    j = default_node(N) if j is None else j
    seeds = [(int(base_seed) + r) % 2**64 for r in range(n_real)]
    workers = threads if threads is not None else worker_count(n_real)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda sd: _realization(spec, p, j, sd, tol), seeds))
    else:
        results = [_realization(spec, p, j, sd, tol) for sd in seeds]

    total = np.zeros((N, N))
    for values, *_ in results:
        total += values
    mean = total / n_real
    tols = [r[3] for r in results]
    source = {"N": N, "m": spec.m, "disorder": "ws", "p": float(p), "path": "ensemble"}
    mean_field = WignerField(mean, j, LIMIT, source, tol=max(tols))
    return EnsembleResult(
        mean_field,
        mean.sum(axis=1),
        n_real,
        int(base_seed),
        tuple(r[1] for r in results),
        tuple(r[2] for r in results),
    )


def secondary_peaks(chi: np.ndarray, j: int, factor: float = 3.0) -> list:
    """Ring-local maxima other than ``j`` that stand out from the noise floor.

    A node counts when it is a local maximum on the ring and exceeds
    ``median(chi) + factor * MAD(chi)``.
    """
    chi = np.asarray(chi, dtype=float)
    med = float(np.median(chi))
    mad = float(np.median(np.abs(chi - med)))
    threshold = med + factor * mad
    left, right = np.roll(chi, 1), np.roll(chi, -1)
    local_max = (chi >= left) & (chi >= right)
    return [int(x) for x in np.flatnonzero(local_max & (chi > threshold)) if x != j]


def has_single_peak(chi: np.ndarray, j: int, factor: float = 3.0) -> bool:
    """True when ``argmax(chi) == j`` and no secondary peak clears the threshold."""
    return int(np.argmax(chi)) == j and not secondary_peaks(chi, j, factor)
