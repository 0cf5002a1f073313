"""Canonical undirected simple graphs and their adjacency / incidence matrices."""

from __future__ import annotations

import threading
from typing import Iterator

import numpy as np

from . import sparse
from .errors import ContractViolation, MalformedIncidenceError
from .sparse import SparseMatrix


class EdgeList:
    """Edges ``(u, v)`` with ``0 <= u < v < n``, strictly sorted, no duplicates.

    The position of an edge in the list is its edge index, which is also its
    row in the incidence matrix.
    """

    __slots__ = ("n", "edges")

    def __init__(self, n: int, edges=()):
        arr = np.array(edges, dtype=np.int64).reshape(-1, 2)
        n = int(n)
        if n < 0:
            raise ContractViolation(f"vertex count must be non-negative, got {n}")
        if arr.size:
            u, v = arr[:, 0], arr[:, 1]
            if u.min() < 0 or v.max() >= n:
                raise ContractViolation(f"vertex id out of range for n={n}")
            if np.any(u >= v):
                raise ContractViolation("edges must satisfy u < v (no self-loops)")
            du, dv = np.diff(u), np.diff(v)
            if np.any((du < 0) | ((du == 0) & (dv <= 0))):
                raise ContractViolation("edges must be strictly sorted without duplicates")
        arr.flags.writeable = False
        self.n = n
        self.edges = arr

    @classmethod
    def canonical(cls, n: int, u, v) -> "EdgeList":
        """Drop self-loops, orient each pair as (min, max), dedupe and sort."""
        u = np.asarray(u, dtype=np.int64).reshape(-1)
        v = np.asarray(v, dtype=np.int64).reshape(-1)
        keep = u != v
        lo = np.minimum(u[keep], v[keep])
        hi = np.maximum(u[keep], v[keep])
        if not lo.size:
            return cls(n)
        base = max(int(n), int(hi.max()) + 1)
        keys = np.unique(lo * base + hi)
        return cls(n, np.stack(np.divmod(keys, base), axis=1))

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    @property
    def u(self) -> np.ndarray:
        return self.edges[:, 0]

    @property
    def v(self) -> np.ndarray:
        return self.edges[:, 1]

    def __len__(self) -> int:
        return self.m

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(map(tuple, self.edges.tolist()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EdgeList):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"EdgeList(n={self.n}, m={self.m})"


def build_adjacency(e: EdgeList) -> SparseMatrix:
    rows = np.concatenate([e.u, e.v])
    cols = np.concatenate([e.v, e.u])
    return SparseMatrix.from_triples(e.n, e.n, rows, cols)


def build_incidence(e: EdgeList) -> SparseMatrix:
    # row i holds columns u_i < v_i, already in CSR order
    m = e.m
    return SparseMatrix(m, e.n, np.arange(0, 2 * m + 1, 2), e.edges.reshape(-1), np.ones(2 * m))


def check_incidence(e_mat: SparseMatrix) -> None:
    """Raise MalformedIncidenceError unless every row holds exactly two 1s."""
    counts = np.diff(e_mat.indptr)
    bad = np.flatnonzero(counts != 2)
    if bad.size:
        r = int(bad[0])
        raise MalformedIncidenceError(f"incidence row {r} has {int(counts[r])} nonzeros, expected 2")
    if e_mat.nnz and np.any(e_mat.data != 1):
        r = int(e_mat.row_ids()[np.flatnonzero(e_mat.data != 1)[0]])
        raise MalformedIncidenceError(f"incidence row {r} holds a value other than 1")


def adjacency_from_incidence(e_mat: SparseMatrix) -> SparseMatrix:
    """Recover the adjacency as ``E^T E - diag(E^T E)``.

    Duplicate incidence rows are not rejected here; they show up as
    off-diagonal entries greater than 1.
    """
    check_incidence(e_mat)
    gram = sparse.spgemm(sparse.transpose(e_mat), e_mat)
    degrees = sparse.col_reduce(e_mat)
    return sparse.subtract(gram, sparse.diag_from_vector(degrees))


def edge_list_from_incidence(e_mat: SparseMatrix) -> EdgeList:
    check_incidence(e_mat)
    pairs = e_mat.indices.reshape(-1, 2)
    out = EdgeList.canonical(e_mat.ncols, pairs[:, 0], pairs[:, 1])
    if out.m != e_mat.nrows:
        raise MalformedIncidenceError("incidence contains duplicate edge rows")
    return out


class Graph:
    """An EdgeList plus lazily built, cached adjacency and incidence matrices."""

    def __init__(self, edge_list: EdgeList):
        self.edge_list = edge_list
        self._adjacency: SparseMatrix | None = None
        self._incidence: SparseMatrix | None = None
        self._lock = threading.Lock()

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Convenience constructor that canonicalises an arbitrary pair list."""
        arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        return cls(EdgeList.canonical(n, arr[:, 0], arr[:, 1]))

    @property
    def n(self) -> int:
        return self.edge_list.n

    @property
    def m(self) -> int:
        return self.edge_list.m

    @property
    def adjacency(self) -> SparseMatrix:
        if self._adjacency is None:
            with self._lock:
                if self._adjacency is None:
                    self._adjacency = build_adjacency(self.edge_list)
        return self._adjacency

    @property
    def incidence(self) -> SparseMatrix:
        if self._incidence is None:
            with self._lock:
                if self._incidence is None:
                    self._incidence = build_incidence(self.edge_list)
        return self._incidence

    def neighbor_sets(self) -> list[set[int]]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edge_list:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return nbrs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.edge_list == other.edge_list

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"
