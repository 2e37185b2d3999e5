"""Discrete Wigner function of continuous-time quantum walks.

The field of a pure state ``psi`` on an ``N``-node network is

    W(x, k) = 1/N sum_y exp(2 pi i k y / N) psi[x - y] conj(psi[x + y])

with every index taken mod ``N``. Three routes compute it:

* circulant: closed Bloch-sum on ordered rings, no eigenvectors needed;
* general: spectral propagation of ``|j>`` followed by a DFT over ``y``;
* closed form: the cycle-graph (m = 1) long-time limit, used as an oracle.

Each route has a long-time ("limit") variant in which only degenerate
eigenvalue pairs survive the time average.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .netgen import RingSpec
from .spectral import BlochSpectrum, SpectralData, bloch_spectrum, class_labels, default_tolerance

#: Largest imaginary part tolerated before a complex intermediate is discarded.
IMAG_TOL = 1e-10

LIMIT = "limit"


class RealityError(ArithmeticError):
    """A Wigner field came out with a non-negligible imaginary part."""


@dataclass(frozen=True, eq=False)
class WignerField:
    """Real ``N x N`` phase-space grid, ``values[x, k]``.

    ``time_tag`` is the evolution time or the string ``"limit"``.
    """

    values: np.ndarray
    j: int
    time_tag: Union[float, str]
    source: dict = field(default_factory=dict)
    tol: Optional[float] = None

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 2 or vals.shape[0] != vals.shape[1]:
            raise ValueError(f"Wigner grid must be square, got shape {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def is_limit(self) -> bool:
        return self.time_tag == LIMIT

    def metadata(self) -> dict:
        meta = {"N": self.N}
        meta.update(self.source)
        meta["j"] = int(self.j)
        meta["t"] = self.time_tag if self.is_limit else float(self.time_tag)
        if self.tol is not None:
            meta["tol"] = float(self.tol)
        return meta


def default_node(N: int) -> int:
    return N // 2


def _real(z: np.ndarray) -> np.ndarray:
    resid = float(np.max(np.abs(z.imag))) if z.size else 0.0
    if resid >= IMAG_TOL:
        raise RealityError(f"imaginary residue {resid:.3e} exceeds {IMAG_TOL:g}")
    return np.ascontiguousarray(z.real)


def _check_node(j: int, N: int) -> int:
    if not 0 <= j < N:
        raise ValueError(f"initial node j={j} outside [0, {N})")
    return int(j)


def _bloch_sum(weights: np.ndarray, j: int) -> np.ndarray:
    """``1/N^2 sum_n weights[k, n] exp(2 pi i (2n - k)(x - j) / N)`` on the full grid.

    The phase splits as ``exp(2 pi i 2n d / N) * exp(-2 pi i k d / N)`` with
    ``d = x - j``; integer exponents are reduced mod ``N`` before ``exp``.
    """
    N = weights.shape[0]
    idx = np.arange(N)
    d = (idx - j) % N
    root = np.exp(2j * np.pi * idx / N)
    forward = root[np.outer(2 * idx, d) % N]  # [n, x]
    back = root[(-np.outer(idx, d)) % N]  # [k, x]
    grid = (weights @ forward) * back  # [k, x]
    return grid.T / N**2


def _partner(N: int) -> np.ndarray:
    """``partner[k, n] = (k - n) mod N``."""
    idx = np.arange(N)
    return (idx[:, None] - idx[None, :]) % N


def wigner_circulant(
    spec: RingSpec, j: Optional[int] = None, t: float = 0.0, *, spectrum: Optional[BlochSpectrum] = None
) -> WignerField:
    """Instantaneous Wigner field on an ordered ring via the Bloch sum.

    Parameters
    ----------
    spec : RingSpec
        Ordered ring.
    j : int, optional
        Initial node, default ``N // 2``.
    t : float
        Evolution time.
    spectrum : BlochSpectrum, optional
        Precomputed spectrum of ``spec``.
    """
    N = spec.N
    j = default_node(N) if j is None else _check_node(j, N)
    E = (spectrum or bloch_spectrum(spec)).eigenvalues
    dE = E[None, :] - E[_partner(N)]
    weights = np.exp(-1j * t * dE)
    values = _real(_bloch_sum(weights, j))
    return WignerField(values, j, float(t), {"N": N, "m": spec.m, "disorder": "none", "path": "circulant"})


def limiting_wigner_circulant(
    spec: RingSpec, j: Optional[int] = None, tol: Optional[float] = None, *, spectrum: Optional[BlochSpectrum] = None
) -> WignerField:
    """Long-time limit on an ordered ring.

    Only Bloch pairs ``(n, k - n)`` with degenerate energies contribute; the
    degeneracy test uses `spectral.degeneracy_classes` with ``tol``.
    """
    N = spec.N
    j = default_node(N) if j is None else _check_node(j, N)
    bs = spectrum or bloch_spectrum(spec)
    classes = bs.classes(tol)
    if tol is None:
        tol = default_tolerance(bs.eigenvalues)
    labels = class_labels(classes, N)
    weights = (labels[None, :] == labels[_partner(N)]).astype(complex)
    values = _real(_bloch_sum(weights, j))
    return WignerField(
        values, j, LIMIT, {"N": N, "m": spec.m, "disorder": "none", "path": "circulant"}, tol=float(tol)
    )


def wigner_of_states(psi: np.ndarray) -> np.ndarray:
    """Wigner grids of one state ``(N,)`` or a batch ``(T, N)``.

    Returns an array of shape ``(N, N)`` or ``(T, N, N)`` indexed ``[x, k]``.
    The ``y`` sum is an inverse DFT, whose ``1/N`` normalisation is exactly
    the prefactor of the definition.
    """
    psi = np.asarray(psi, dtype=complex)
    single = psi.ndim == 1
    psi = np.atleast_2d(psi)
    N = psi.shape[-1]
    idx = np.arange(N)
    minus = (idx[:, None] - idx[None, :]) % N  # [x, y] -> x - y
    plus = (idx[:, None] + idx[None, :]) % N  # [x, y] -> x + y
    corr = psi[:, minus] * np.conj(psi[:, plus])
    W = _real(np.fft.ifft(corr, axis=-1))
    return W[0] if single else W


def wigner_general(s: SpectralData, j: Optional[int] = None, t: float = 0.0) -> WignerField:
    """Instantaneous Wigner field for any Hamiltonian, from its eigenbasis."""
    N = s.N
    j = default_node(N) if j is None else _check_node(j, N)
    values = wigner_of_states(s.evolve(j, t))
    return WignerField(values, j, float(t), {**s.source, "path": "general"})


def limiting_wigner_general(s: SpectralData, j: Optional[int] = None) -> WignerField:
    """Long-time limit for any Hamiltonian.

    With ``v_C = P_C[:, j]`` the column of the projector onto degeneracy
    class ``C``, the surviving density-matrix elements are
    ``rho[a, b] = sum_C v_C[a] v_C[b]``, so

        W(x, k) = 1/N sum_y exp(2 pi i k y / N) sum_C v_C[x - y] v_C[x + y].
    """
    N = s.N
    j = default_node(N) if j is None else _check_node(j, N)
    V = s.projector_columns(j)
    idx = np.arange(N)
    minus = (idx[:, None] - idx[None, :]) % N
    plus = (idx[:, None] + idx[None, :]) % N
    corr = np.einsum("xyc,xyc->xy", V[minus], V[plus])
    values = _real(np.fft.ifft(corr, axis=-1))
    return WignerField(values, j, LIMIT, {**s.source, "path": "general"}, tol=s.tol)


def closed_form_limit_m1(N: int, j: Optional[int] = None) -> WignerField:
    """Analytic long-time limit on the cycle graph (m = 1).

    Even ``N``: ``2/N^2`` on even ``k != 0`` rows, ``1/N`` at ``k = 0`` for
    ``x in {j, j + N/2}``. Odd ``N``: ``1/N^2`` on every ``k != 0`` row and
    ``1/N`` at ``(x, k) = (j, 0)``. Zero elsewhere.
    """
    if N < 3:
        raise ValueError(f"N must be >= 3, got {N}")
    j = default_node(N) if j is None else _check_node(j, N)
    W = np.zeros((N, N))
    if N % 2 == 0:
        W[:, 2::2] = 2.0 / N**2
        W[j, 0] = 1.0 / N
        W[(j + N // 2) % N, 0] = 1.0 / N
    else:
        W[:, 1:] = 1.0 / N**2
        W[j, 0] = 1.0 / N
    return WignerField(W, j, LIMIT, {"N": N, "m": 1, "disorder": "none", "path": "closed_form"})
