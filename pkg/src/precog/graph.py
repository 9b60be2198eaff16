"""Graph topologies, incidence matrices, and weighted Laplacians.

Vertices are zero-based internally (text I/O in the CLI uses one-based
labels).  Edge weights may be negative: weight vectors are initialized from
a zero-mean Gaussian, and everything downstream needs only the symmetry of
the Laplacian, not positive semidefiniteness.  The incidence sign
convention is fixed (+1 at the smaller vertex index) so that the matrix is
bit-deterministic; the Laplacian is invariant to that choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidDimensionError, InvalidInputError


@dataclass(frozen=True)
class Topology:
    """Undirected simple graph on ``n`` vertices with a fixed edge order.

    Edges are pairs ``(i, j)`` with ``0 <= i < j < n``, no duplicates,
    stored in the order they will index weight vectors.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 2:
            raise InvalidDimensionError(f"need at least 2 vertices, got n={self.n}")
        seen: set[tuple[int, int]] = set()
        for i, j in self.edges:
            if not (0 <= i < j < self.n):
                raise InvalidDimensionError(f"edge ({i}, {j}) invalid for n={self.n}")
            if (i, j) in seen:
                raise InvalidDimensionError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))

    @property
    def n_edges(self) -> int:
        return len(self.edges)


@dataclass
class WeightedGraph:
    """A topology together with one real (possibly negative) weight per edge."""

    topology: Topology
    w: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.w = np.atleast_1d(np.asarray(self.w, dtype=float))
        if self.w.shape != (self.topology.n_edges,):
            raise InvalidDimensionError(
                f"weight vector has length {self.w.shape[0]}, "
                f"topology has {self.topology.n_edges} edges"
            )
        if not np.all(np.isfinite(self.w)):
            raise InvalidInputError("edge weights must be finite")


def banded_topology(n: int, band: int) -> Topology:
    """All edges (i, j) with 0 < j - i <= band, in lexicographic order.

    With band=2 this is the fixed regular topology used for tap-delayed
    signals: it preserves temporal order and has 2n - 3 edges for n >= 3.
    """
    if n < 2:
        raise InvalidDimensionError(f"need at least 2 vertices, got n={n}")
    if band < 1:
        raise InvalidDimensionError(f"band must be positive, got {band}")
    edges = tuple(
        (i, j) for i in range(n) for j in range(i + 1, min(i + band, n - 1) + 1)
    )
    return Topology(n, edges)


def full_topology(n: int) -> Topology:
    """Fully connected topology: n(n-1)/2 edges in lexicographic order."""
    if n < 2:
        raise InvalidDimensionError(f"need at least 2 vertices, got n={n}")
    return Topology(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def incidence_matrix(t: Topology) -> np.ndarray:
    """n x |edges| incidence matrix: column e has +1 at row i, -1 at row j."""
    B = np.zeros((t.n, t.n_edges))
    for e, (i, j) in enumerate(t.edges):
        B[i, e] = 1.0
        B[j, e] = -1.0
    return B


def laplacian(g: WeightedGraph) -> np.ndarray:
    """Weighted graph Laplacian B diag(w) B^T.

    Accumulated edge by edge so the result is bitwise equal to the sum
    of w_i * theta_i over all edges.
    """
    n = g.topology.n
    L = np.zeros((n, n))
    for e, (i, j) in enumerate(g.topology.edges):
        we = g.w[e]
        L[i, i] += we
        L[j, j] += we
        L[i, j] -= we
        L[j, i] -= we
    return L


def theta(g: WeightedGraph, edge_index: int) -> np.ndarray:
    """Derivative of the Laplacian with respect to one edge weight.

    For edge (p, q) the matrix has exactly four nonzeros:
    (p,p) = (q,q) = +1 and (p,q) = (q,p) = -1.  Independent of w.
    """
    if not 0 <= edge_index < g.topology.n_edges:
        raise IndexError(
            f"edge index {edge_index} out of range for {g.topology.n_edges} edges"
        )
    p, q = g.topology.edges[edge_index]
    T = np.zeros((g.topology.n, g.topology.n))
    T[p, p] = T[q, q] = 1.0
    T[p, q] = T[q, p] = -1.0
    return T


def degree_vector(g: WeightedGraph) -> np.ndarray:
    """Per-vertex sum of |w| over incident edges.

    Absolute values keep the entries positive for log-degree penalties even
    when weights are signed.  See signed_degree_vector for the plain sum.
    """
    d = np.zeros(g.topology.n)
    for e, (i, j) in enumerate(g.topology.edges):
        d[i] += abs(g.w[e])
        d[j] += abs(g.w[e])
    return d


def signed_degree_vector(g: WeightedGraph) -> np.ndarray:
    """Per-vertex sum of signed weights over incident edges (diagnostic)."""
    d = np.zeros(g.topology.n)
    for e, (i, j) in enumerate(g.topology.edges):
        d[i] += g.w[e]
        d[j] += g.w[e]
    return d
