"""Network construction: ordered circulant rings, Watts-Strogatz rewiring and
static (diagonal) disorder.

All builders are pure functions. Returned arrays are marked read-only so a
`Hamiltonian` can be shared between threads without copying.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

#: Name of the bit generator used for every random draw in the package.
PRNG_NAME = "numpy.random.Philox"

_UINT64 = 2**64


class InvalidSpecError(ValueError):
    """Raised when a network description violates its invariants."""


@dataclass(frozen=True)
class RingSpec:
    """Ordered ring of ``N`` nodes, each linked to ``m`` neighbours per side."""

    N: int
    m: int

    def __post_init__(self):
        if int(self.N) != self.N or int(self.m) != self.m:
            raise InvalidSpecError(f"N and m must be integers, got N={self.N!r}, m={self.m!r}")
        if self.N < 3:
            raise InvalidSpecError(f"ring needs N >= 3, got N={self.N}")
        if self.m < 1:
            raise InvalidSpecError(f"ring needs m >= 1, got m={self.m}")
        if 2 * self.m > self.N - 1:
            raise InvalidSpecError(
                f"2m must not exceed N-1 (got N={self.N}, m={self.m}); "
                "larger m would create duplicate edges"
            )


@dataclass(frozen=True)
class DisorderSpec:
    """Kind of disorder applied on top of an ordered ring.

    ``kind`` is one of ``"none"``, ``"exponential"`` (uses ``lam``) or ``"ws"``
    (uses ``p`` and ``seed``).
    """

    kind: str = "none"
    lam: float = 0.0
    p: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("none", "exponential", "ws"):
            raise InvalidSpecError(f"unknown disorder kind {self.kind!r}")
        if not self.lam >= 0.0:
            raise InvalidSpecError(f"lambda must be >= 0, got {self.lam}")
        if not 0.0 <= self.p <= 1.0:
            raise InvalidSpecError(f"rewiring probability must lie in [0, 1], got {self.p}")
        if not 0 <= int(self.seed) < _UINT64:
            raise InvalidSpecError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @classmethod
    def none(cls) -> "DisorderSpec":
        return cls("none")

    @classmethod
    def exponential(cls, lam: float) -> "DisorderSpec":
        return cls("exponential", lam=float(lam))

    @classmethod
    def ws(cls, p: float, seed: int) -> "DisorderSpec":
        return cls("ws", p=float(p), seed=int(seed))

    def metadata(self) -> dict:
        meta = {"disorder": self.kind}
        if self.kind == "exponential":
            meta["lambda"] = self.lam
        elif self.kind == "ws":
            meta.update(p=self.p, seed=int(self.seed), prng=PRNG_NAME)
        return meta


@dataclass(frozen=True)
class NetworkSpec:
    """Topology plus disorder; enough to rebuild a Hamiltonian exactly."""

    ring: RingSpec
    disorder: DisorderSpec = field(default_factory=DisorderSpec)

    def metadata(self) -> dict:
        return {"N": self.ring.N, "m": self.ring.m, **self.disorder.metadata()}


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on nodes ``0..N-1``.

    ``edges`` holds pairs ``(u, v)`` with ``u < v``. ``skipped_rewires`` counts
    rewiring attempts abandoned because the source node was saturated.
    """

    N: int
    edges: frozenset
    skipped_rewires: int = 0

    def __post_init__(self):
        for u, v in self.edges:
            if not (0 <= u < v < self.N):
                raise InvalidSpecError(f"edge ({u}, {v}) is not a normalised pair in [0, {self.N})")

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.N, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def is_connected(self) -> bool:
        adj = _adjacency_sets(self.N, self.edges)
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == self.N


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Real symmetric ``N x N`` matrix ``H = A + Delta`` (hopping rate 1).

    ``source`` carries provenance metadata (N, m, disorder, seed, ...).
    """

    matrix: np.ndarray
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InvalidSpecError(f"Hamiltonian must be square, got shape {mat.shape}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def N(self) -> int:
        return self.matrix.shape[0]


def _norm_edge(u: int, v: int) -> tuple:
    return (u, v) if u < v else (v, u)


def _adjacency_sets(N: int, edges) -> list:
    adj = [set() for _ in range(N)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def build_ring(spec: RingSpec) -> Graph:
    """Circulant graph where ``i ~ j`` iff ``(i - j) mod N`` is in ``1..m`` or ``N-m..N-1``."""
    N, m = spec.N, spec.m
    edges = frozenset(_norm_edge(i, (i + z) % N) for i in range(N) for z in range(1, m + 1))
    return Graph(N, edges)


def laplacian(g: Graph) -> Hamiltonian:
    """Graph Laplacian: degree on the diagonal, -1 for every edge."""
    H = np.zeros((g.N, g.N))
    for u, v in g.edges:
        H[u, v] = H[v, u] = -1.0
        H[u, u] += 1.0
        H[v, v] += 1.0
    return Hamiltonian(H, {"N": g.N})


def rng_for_seed(seed: int) -> np.random.Generator:
    """Counter-based generator keyed on a 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=int(seed) % _UINT64))


def ws_rewire(spec: RingSpec, p: float, seed: int) -> Graph:
    """Watts-Strogatz rewiring of the ordered ring.

    Lanes ``z = 1..m`` are visited in the outer loop and nodes ``i = 0..N-1``
    in the inner loop. With probability ``p`` the edge ``(i, i+z)`` is replaced
    by ``(i, w)``, ``w`` drawn uniformly among nodes that are neither ``i`` nor
    already adjacent to ``i`` (rejection sampling). Saturated nodes are left
    alone and counted in ``Graph.skipped_rewires``.
    """
    if not 0.0 <= p <= 1.0:
        raise InvalidSpecError(f"rewiring probability must lie in [0, 1], got {p}")
    if p == 0.0:
        return build_ring(spec)
    N, m = spec.N, spec.m
    adj = _adjacency_sets(N, build_ring(spec).edges)
    rng = rng_for_seed(seed)
    skipped = 0
    for z in range(1, m + 1):
        for i in range(N):
            v = (i + z) % N
            if rng.random() >= p:
                continue
            if len(adj[i]) >= N - 1:
                skipped += 1
                continue
            w = int(rng.integers(N))
            while w == i or w in adj[i]:
                w = int(rng.integers(N))
            adj[i].discard(v)
            adj[v].discard(i)
            adj[i].add(w)
            adj[w].add(i)
    edges = frozenset(_norm_edge(u, v) for u in range(N) for v in adj[u] if u < v)
    return Graph(N, edges, skipped_rewires=skipped)


def exponential_disorder(N: int, lam: float) -> np.ndarray:
    """Diagonal site energies ``exp(lam * 2 pi j / N)`` as an ``N x N`` matrix."""
    if N < 1:
        raise InvalidSpecError(f"N must be >= 1, got {N}")
    if not lam >= 0.0:
        raise InvalidSpecError(f"lambda must be >= 0, got {lam}")
    return np.diag(np.exp(lam * 2.0 * np.pi * np.arange(N) / N))


def assemble_hamiltonian(
    g: Graph, disorder: Optional[DisorderSpec] = None, *, source: Optional[dict] = None
) -> Hamiltonian:
    """Laplacian of ``g`` plus the static part of ``disorder``.

    Only exponential disorder contributes a diagonal term; WS disorder is
    topological and must already be present in ``g``. An explicit ``N x N``
    array may be passed instead of a `DisorderSpec`.
    """
    H = np.array(laplacian(g).matrix)
    meta = {"N": g.N}
    if isinstance(disorder, np.ndarray):
        if disorder.shape != H.shape:
            raise InvalidSpecError(
                f"dimension mismatch: graph has N={g.N}, perturbation has shape {disorder.shape}"
            )
        if not np.array_equal(disorder, disorder.T):
            raise InvalidSpecError("perturbation must be symmetric")
        H = H + disorder
    elif disorder is not None:
        meta.update(disorder.metadata())
        if disorder.kind == "exponential":
            H = H + exponential_disorder(g.N, disorder.lam)
    if source:
        meta.update(source)
    return Hamiltonian(H, meta)


def network_graph(spec: NetworkSpec) -> Graph:
    """Graph for a full network description (rewired when disorder is WS)."""
    if spec.disorder.kind == "ws":
        return ws_rewire(spec.ring, spec.disorder.p, spec.disorder.seed)
    return build_ring(spec.ring)


def network_hamiltonian(spec: NetworkSpec) -> Hamiltonian:
    g = network_graph(spec)
    meta = spec.metadata()
    if spec.disorder.kind == "ws":
        meta["connected"] = g.is_connected()
        meta["skipped_rewires"] = g.skipped_rewires
    return assemble_hamiltonian(g, spec.disorder, source=meta)
