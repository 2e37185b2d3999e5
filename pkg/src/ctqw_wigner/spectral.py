"""Eigenvalues, eigenvectors and degeneracy classes of network Hamiltonians.

Two routes are provided. `bloch_spectrum` evaluates the analytic spectrum of
an ordered ring (plane-wave eigenvectors are never formed). `eigendecompose`
handles any real symmetric Hamiltonian through LAPACK.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .netgen import Hamiltonian, RingSpec

#: Relative degeneracy tolerance; scaled by ``max(1, spectral range)``.
DEFAULT_RELATIVE_TOL = 1e-8


class SpectralError(RuntimeError):
    """The eigensolver failed or returned an unusable decomposition."""


def default_tolerance(eigenvalues) -> float:
    ev = np.asarray(eigenvalues, dtype=float)
    span = float(ev.max() - ev.min()) if ev.size else 0.0
    return DEFAULT_RELATIVE_TOL * max(1.0, span)


def degeneracy_classes(eigenvalues: Sequence[float], tol: Optional[float] = None) -> tuple:
    """Partition eigenvalue indices into groups of (numerically) equal value.

    Single-linkage clustering on the sorted values: neighbours closer than
    ``tol`` fall into one class. Classes are returned in ascending eigenvalue
    order, each as a sorted tuple of original indices.

    >>> degeneracy_classes([0.0, 2.0, 2.0, 4.0], 1e-8)
    ((0,), (1, 2), (3,))
    """
    ev = np.asarray(eigenvalues, dtype=float)
    if not np.all(np.isfinite(ev)):
        raise SpectralError("eigenvalues must be finite")
    if ev.size == 0:
        return ()
    if tol is None:
        tol = default_tolerance(ev)
    order = np.argsort(ev, kind="stable")
    classes = []
    current = [int(order[0])]
    for prev, idx in zip(order[:-1], order[1:]):
        if ev[idx] - ev[prev] <= tol:
            current.append(int(idx))
        else:
            classes.append(tuple(sorted(current)))
            current = [int(idx)]
    classes.append(tuple(sorted(current)))
    return tuple(classes)


def class_labels(classes: tuple, N: int) -> np.ndarray:
    """Map each eigenvalue index to the ordinal of its degeneracy class."""
    labels = np.empty(N, dtype=np.int64)
    for cid, members in enumerate(classes):
        labels[list(members)] = cid
    return labels


@dataclass(frozen=True, eq=False)
class BlochSpectrum:
    """Analytic spectrum of an ordered ring, indexed by Bloch number ``n``."""

    N: int
    m: int
    eigenvalues: np.ndarray
    phases: np.ndarray

    def classes(self, tol: Optional[float] = None) -> tuple:
        return degeneracy_classes(self.eigenvalues, tol)


def bloch_spectrum(spec: RingSpec) -> BlochSpectrum:
    """``E_n = 2m - 2 sum_{z=1..m} cos(z theta_n)`` with ``theta_n = 2 pi n / N``.

    Each cosine argument is reduced to ``2 pi r / N`` with ``r = min(zn mod N,
    N - zn mod N)`` so that ``E_n == E_{N-n}`` holds bit for bit.
    """
    N, m = spec.N, spec.m
    n = np.arange(N)
    E = np.full(N, 2.0 * m)
    for z in range(1, m + 1):
        r = (z * n) % N
        r = np.minimum(r, N - r)
        E -= 2.0 * np.cos(2.0 * np.pi * r / N)
    # the zero mode is exact: every cosine is 1
    E[0] = 0.0
    phases = 2.0 * np.pi * n / N
    for arr in (E, phases):
        arr.setflags(write=False)
    return BlochSpectrum(N, m, E, phases)


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Orthonormal eigenbasis of a real symmetric Hamiltonian.

    Attributes
    ----------
    eigenvalues : (N,) ndarray
        Ascending eigenvalues.
    eigenvectors : (N, N) ndarray
        Column ``n`` is the real unit eigenvector for ``eigenvalues[n]``.
    classes : tuple of tuple of int
        Degeneracy partition of ``range(N)``.
    tol : float
        Tolerance used to build ``classes``.
    source : dict
        Provenance metadata copied from the Hamiltonian.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    classes: tuple
    tol: float
    source: dict

    @property
    def N(self) -> int:
        return self.eigenvalues.shape[0]

    def projector_columns(self, j: int) -> np.ndarray:
        """Column ``j`` of every class projector, shape ``(N, n_classes)``.

        ``out[:, c] = P_c[:, j]`` with ``P_c = sum_{n in c} q_n q_n^T``.
        """
        Q = self.eigenvectors
        out = np.empty((self.N, len(self.classes)))
        for c, members in enumerate(self.classes):
            idx = list(members)
            out[:, c] = Q[:, idx] @ Q[j, idx]
        return out

    def evolve(self, j: int, t: float) -> np.ndarray:
        """Amplitudes ``<x| exp(-iHt) |j>`` for all ``x``."""
        Q = self.eigenvectors
        return Q @ (np.exp(-1j * self.eigenvalues * t) * Q[j, :])


def eigendecompose(h, tol: Optional[float] = None) -> SpectralData:
    """Full symmetric eigendecomposition with degeneracy classes.

    Parameters
    ----------
    h : Hamiltonian or array_like
        Real symmetric matrix.
    tol : float, optional
        Degeneracy tolerance. Defaults to ``1e-8 * max(1, spectral range)``.

    Raises
    ------
    SpectralError
        If the matrix is not finite and symmetric or LAPACK does not converge.
    """
    if isinstance(h, Hamiltonian):
        H, source = h.matrix, dict(h.source)
    else:
        H, source = np.asarray(h, dtype=float), {}
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise SpectralError(f"expected a square matrix, got shape {H.shape}")
    if not np.all(np.isfinite(H)):
        raise SpectralError("Hamiltonian has non-finite entries")
    if not np.array_equal(H, H.T):
        raise SpectralError("Hamiltonian is not exactly symmetric")
    try:
        E, Q = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise SpectralError(f"eigensolver did not converge: {exc}") from exc
    if tol is None:
        tol = default_tolerance(E)
    classes = degeneracy_classes(E, tol)
    for arr in (E, Q):
        arr.setflags(write=False)
    return SpectralData(E, Q, classes, float(tol), source)
