import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from ctqw_wigner.netgen import DisorderSpec, RingSpec, assemble_hamiltonian, build_ring, laplacian, ws_rewire
from ctqw_wigner.spectral import bloch_spectrum, eigendecompose
from ctqw_wigner.wigner import (
    LIMIT,
    RealityError,
    _real,
    closed_form_limit_m1,
    limiting_wigner_circulant,
    limiting_wigner_general,
    wigner_circulant,
    wigner_general,
    wigner_of_states,
)


# -- brute-force oracles ------------------------------------------------------


def direct_bloch_sum(E, j, t=None, delta=None):
    """Bloch-mode sum written out cell by cell (no matmul tricks)."""
    N = len(E)
    W = np.zeros((N, N), dtype=complex)
    for x in range(N):
        for k in range(N):
            acc = 0j
            for n in range(N):
                l = (N + k - n) % N
                if delta is None:
                    weight = np.exp(-1j * t * (E[n] - E[l]))
                else:
                    weight = float(delta(n, l))
                acc += weight * np.exp(2j * np.pi * (2 * n - k) * (x - j) / N)
            W[x, k] = acc / N**2
    return W


def direct_wigner(psi):
    """W(x,k) = 1/N sum_y e^{2 pi i k y/N} psi[x-y] conj(psi[x+y]), explicit loops."""
    N = len(psi)
    W = np.zeros((N, N), dtype=complex)
    for x in range(N):
        for k in range(N):
            W[x, k] = sum(
                np.exp(2j * np.pi * k * y / N) * psi[(x - y) % N] * np.conj(psi[(x + y) % N]) for y in range(N)
            ) / N
    return W


def direct_limit_double_sum(s, j):
    """Double sum over eigenpairs with a Kronecker delta on energies."""
    N = s.N
    Q = s.eigenvectors
    label = np.empty(N, dtype=int)
    for c, members in enumerate(s.classes):
        label[list(members)] = c
    rho = np.zeros((N, N))
    for n in range(N):
        for l in range(N):
            if label[n] == label[l]:
                rho += np.outer(Q[:, n] * Q[j, n], Q[j, l] * Q[:, l])
    W = np.zeros((N, N), dtype=complex)
    for x in range(N):
        for k in range(N):
            W[x, k] = sum(np.exp(2j * np.pi * k * y / N) * rho[(x - y) % N, (x + y) % N] for y in range(N)) / N
    return W


def ring_spectral(N, m):
    return eigendecompose(laplacian(build_ring(RingSpec(N, m))))


# -- circulant path -----------------------------------------------------------


@pytest.mark.parametrize("N,m,j,t", [(8, 1, 3, 0.7), (9, 2, 4, 2.5), (12, 3, 0, 11.0)])
def test_circulant_matches_direct_sum(N, m, j, t):
    E = bloch_spectrum(RingSpec(N, m)).eigenvalues
    ref = direct_bloch_sum(E, j, t)
    assert np.max(np.abs(ref.imag)) < 1e-12
    W = wigner_circulant(RingSpec(N, m), j, t).values
    assert np.max(np.abs(W - ref.real)) < 1e-13


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_t0_even(m):
    N, j = 50, 25
    W = wigner_circulant(RingSpec(N, m), j, 0.0).values
    assert np.max(np.abs(W[j] - 1 / N)) < 1e-12
    opp = (j + N // 2) % N
    expected = np.where(np.arange(N) % 2 == 0, 1 / N, -1 / N)
    assert np.max(np.abs(W[opp] - expected)) < 1e-12
    others = np.delete(W, [j, opp], axis=0)
    assert np.max(np.abs(others)) < 1e-12


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_t0_odd(m):
    N, j = 51, 25
    W = wigner_circulant(RingSpec(N, m), j, 0.0).values
    expected = np.zeros((N, N))
    expected[j] = 1 / N
    assert np.max(np.abs(W - expected)) < 1e-12


def test_limiting_circulant_matches_direct_sum():
    spec = RingSpec(12, 2)
    bs = bloch_spectrum(spec)
    label = {n: c for c, members in enumerate(bs.classes()) for n in members}
    ref = direct_bloch_sum(bs.eigenvalues, 5, delta=lambda n, l: label[n] == label[l])
    W = limiting_wigner_circulant(spec, 5).values
    assert np.max(np.abs(W - ref.real)) < 1e-13


@pytest.mark.parametrize("N", [50, 51, 8, 9])
def test_limiting_circulant_cycle_closed_form(N):
    j = N // 2
    diff = limiting_wigner_circulant(RingSpec(N, 1), j).values - closed_form_limit_m1(N, j).values
    assert np.max(np.abs(diff)) < 1e-12


def test_m1_and_m3_identical_at_50():
    a = limiting_wigner_circulant(RingSpec(50, 1)).values
    b = limiting_wigner_circulant(RingSpec(50, 3)).values
    assert np.max(np.abs(a - b)) < 1e-12


def test_closed_form_cells():
    W50 = closed_form_limit_m1(50, 25)
    assert W50.values[25, 0] == 1 / 50
    assert W50.values[0, 0] == 1 / 50
    assert W50.values[3, 7] == 0.0
    assert W50.values[3, 8] == 2 / 50**2
    W51 = closed_form_limit_m1(51, 25)
    assert W51.values[25, 7] == 1 / 51**2
    assert W51.values[26, 0] == 0.0
    for N in (3, 4, 17, 50, 51, 100):
        assert abs(closed_form_limit_m1(N).values.sum() - 1) < 1e-12


# -- general path ---------------------------------------------------------------


@pytest.mark.parametrize("t", [0.5, 3.7, 20.0])
def test_general_vs_circulant(t):
    spec = RingSpec(20, 2)
    a = wigner_circulant(spec, 10, t).values
    b = wigner_general(ring_spectral(20, 2), 10, t).values
    assert np.max(np.abs(a - b)) < 1e-9


@pytest.mark.parametrize(
    "h",
    [
        laplacian(ws_rewire(RingSpec(10, 2), 0.5, 4)),
        assemble_hamiltonian(build_ring(RingSpec(9, 1)), DisorderSpec.exponential(0.6)),
    ],
    ids=["ws", "exp"],
)
def test_general_matches_expm_and_direct_dft(h):
    s = eigendecompose(h)
    for t in (0.0, 1.3, 7.9):
        psi = expm(-1j * t * h.matrix)[:, 4]
        ref = direct_wigner(psi)
        assert np.max(np.abs(ref.imag)) < 1e-12
        W = wigner_general(s, 4, t).values
        assert np.max(np.abs(W - ref.real)) < 1e-12


def test_general_t0_any_hamiltonian():
    h = assemble_hamiltonian(ws_rewire(RingSpec(16, 2), 0.7, 1), DisorderSpec.exponential(0.3))
    W = wigner_general(eigendecompose(h), 8, 0.0).values
    expected = np.zeros((16, 16))
    expected[8] = 1 / 16
    expected[0] = np.where(np.arange(16) % 2 == 0, 1 / 16, -1 / 16)
    assert np.max(np.abs(W - expected)) < 1e-12


def test_wigner_of_states_batch_matches_single():
    rng = np.random.default_rng(0)
    psi = rng.normal(size=(3, 7)) + 1j * rng.normal(size=(3, 7))
    batch = wigner_of_states(psi)
    for i in range(3):
        assert np.array_equal(batch[i], wigner_of_states(psi[i]))


@given(
    st.integers(5, 24).flatmap(lambda N: st.tuples(st.just(N), st.integers(1, (N - 1) // 2), st.integers(0, N - 1))),
    st.floats(0, 50),
)
@settings(max_examples=40, deadline=None)
def test_ordered_ring_invariants(nmj, t):
    N, m, j = nmj
    spec = RingSpec(N, m)
    W = wigner_circulant(spec, j, t).values
    assert abs(W.sum() - 1) < 1e-9
    # translation covariance: moving the start node shifts x only
    s = 3
    W2 = wigner_circulant(spec, (j + s) % N, t).values
    assert np.max(np.abs(W2 - np.roll(W, s, axis=0))) < 1e-10
    # point symmetry about (j, 0): W(j + d, k) = W(j - d, -k)
    idx = np.arange(N)
    mirrored = W[(2 * j - idx) % N][:, (-idx) % N]
    assert np.max(np.abs(W - mirrored)) < 1e-10
    # marginal over k is the transition probability
    s_data = ring_spectral(N, m)
    prob = np.abs(s_data.evolve(j, t)) ** 2
    assert np.max(np.abs(W.sum(axis=1) - prob)) < 1e-10


@pytest.mark.parametrize("N,m,t", [(50, 2, 3.0), (50, 3, 17.0), (60, 4, 1.5)])
def test_central_symmetry_about_half_ring(N, m, t):
    # For j = N/2 the point (j, j) is the phase-space centre.
    j = N // 2
    W = wigner_circulant(RingSpec(N, m), j, t).values
    idx = np.arange(N)
    assert np.max(np.abs(W - W[(2 * j - idx) % N][:, (2 * j - idx) % N])) < 1e-10


@pytest.mark.parametrize(
    "h",
    [
        laplacian(ws_rewire(RingSpec(20, 2), 0.3, 8)),
        assemble_hamiltonian(build_ring(RingSpec(20, 1)), DisorderSpec.exponential(0.5)),
    ],
    ids=["ws", "exp"],
)
def test_general_marginal_and_normalisation(h):
    s = eigendecompose(h)
    for t in (0.0, 2.2, 40.0):
        W = wigner_general(s, 3, t).values
        prob = np.abs(expm(-1j * t * h.matrix)[:, 3]) ** 2
        assert np.max(np.abs(W.sum(axis=1) - prob)) < 1e-10
        assert abs(W.sum() - 1) < 1e-9


# -- limiting general path ----------------------------------------------------


def test_limiting_general_vs_circulant():
    a = limiting_wigner_circulant(RingSpec(50, 2)).values
    b = limiting_wigner_general(ring_spectral(50, 2)).values
    assert np.max(np.abs(a - b)) < 1e-9


@pytest.mark.parametrize(
    "h",
    [
        laplacian(build_ring(RingSpec(12, 2))),
        laplacian(ws_rewire(RingSpec(11, 2), 0.4, 2)),
        assemble_hamiltonian(build_ring(RingSpec(10, 1)), DisorderSpec.exponential(0.7)),
    ],
    ids=["ring", "ws", "exp"],
)
def test_limiting_general_matches_double_sum(h):
    s = eigendecompose(h)
    ref = direct_limit_double_sum(s, 4)
    assert np.max(np.abs(ref.imag)) < 1e-12
    W = limiting_wigner_general(s, 4)
    assert W.time_tag == LIMIT
    assert np.max(np.abs(W.values - ref.real)) < 1e-12


def test_limiting_general_nondegenerate_formula():
    s = eigendecompose(assemble_hamiltonian(build_ring(RingSpec(14, 2)), DisorderSpec.exponential(0.9)))
    assert all(len(c) == 1 for c in s.classes)
    N, j, Q = 14, 6, s.eigenvectors
    ref = np.zeros((N, N), dtype=complex)
    for x in range(N):
        for k in range(N):
            ref[x, k] = sum(
                np.exp(2j * np.pi * k * y / N) * np.sum(Q[(x - y) % N] * Q[j] ** 2 * Q[(x + y) % N])
                for y in range(N)
            ) / N
    assert np.max(np.abs(limiting_wigner_general(s, j).values - ref.real)) < 1e-12


def test_limiting_general_invariants_ws():
    for seed in range(10):
        s = eigendecompose(laplacian(ws_rewire(RingSpec(20, 2), 0.5, seed)))
        W = limiting_wigner_general(s, 10).values
        assert abs(W.sum() - 1) < 1e-9
        assert np.all(W.sum(axis=1) >= -1e-10)


def test_limit_time_average_oracle_small():
    # Quick version of the acceptance oracle: the sampled time average of the
    # instantaneous field approaches the exact limit.
    s = eigendecompose(laplacian(ws_rewire(RingSpec(12, 1), 0.3, 1)))
    times = np.random.default_rng(5).uniform(0, 1e4, 4000)
    psi = np.array([s.evolve(6, t) for t in times])
    avg = wigner_of_states(psi).mean(axis=0)
    assert np.max(np.abs(avg - limiting_wigner_general(s, 6).values)) < 2e-2


# -- misc -----------------------------------------------------------------------


def test_reality_check_raises():
    with pytest.raises(RealityError):
        _real(np.array([[1 + 1e-6j]]))


def test_bad_initial_node():
    with pytest.raises(ValueError):
        wigner_circulant(RingSpec(10, 1), 10, 0.0)


def test_field_metadata():
    w = limiting_wigner_circulant(RingSpec(50, 1))
    meta = w.metadata()
    assert meta["N"] == 50 and meta["m"] == 1 and meta["j"] == 25 and meta["t"] == LIMIT
    assert meta["tol"] == pytest.approx(4e-8)
    assert w.j == 25
