"""Triangle counting: three sparse-matrix formulations and a brute-force oracle.

All counts are of undirected triangles, each unordered vertex triple once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np

from . import sparse
from .errors import ContractViolation, InvalidAdjacencyError
from .graph import Graph
from .sparse import SparseMatrix


class Algorithm(str, enum.Enum):
    INCIDENCE = "incidence"
    HADAMARD = "hadamard"
    LU = "lu"
    ORACLE = "oracle"


class TriangleRecord(NamedTuple):
    """Triangle ``{apex, x, y}`` seen from ``apex`` across edge ``(x, y)``, ``x < y``."""

    apex: int
    x: int
    y: int


@dataclass(frozen=True)
class TriangleCount:
    count: int
    algorithm: Algorithm
    records: tuple[TriangleRecord, ...] | None = None

    def __post_init__(self):
        if self.count < 0:
            raise ContractViolation(f"negative triangle count {self.count}")


def _divide(total: int, divisor: int, algorithm: str) -> int:
    if total % divisor:
        raise InvalidAdjacencyError(
            f"{algorithm}: masked sum {total} is not divisible by {divisor}; "
            "adjacency is not symmetric, binary and loop-free"
        )
    return total // divisor


def _square(a: SparseMatrix) -> None:
    if a.nrows != a.ncols:
        raise ContractViolation(f"adjacency must be square, got {a.shape}")


def count_hadamard(a: SparseMatrix) -> TriangleCount:
    """``sum(A^2 .* A) / 6``."""
    _square(a)
    c = sparse.hadamard(sparse.spgemm(a, a), a)
    return TriangleCount(_divide(sparse.sum_all(c), 6, "hadamard"), Algorithm.HADAMARD)


def count_lu(a: SparseMatrix) -> TriangleCount:
    """``sum(A .* (L U)) / 2`` with strict triangular parts of ``A``."""
    _square(a)
    lower, upper = sparse.triangular_split(a)
    c = sparse.hadamard(a, sparse.spgemm(lower, upper))
    return TriangleCount(_divide(sparse.sum_all(c), 2, "lu"), Algorithm.LU)


def count_incidence(a: SparseMatrix, e: SparseMatrix, enumerate: bool = False) -> TriangleCount:
    """Adjacency times incidence, one cell per (apex, edge) pair.

    Cell ``(i, j)`` is occupied when vertex ``i`` is adjacent to both
    endpoints of edge ``j``, which is where ``A E^T`` equals 2.  Each triangle
    occupies exactly three cells.
    """
    _square(a)
    if e.ncols != a.nrows:
        raise ContractViolation(f"incidence {e.shape} does not match adjacency {a.shape}")
    cells = sparse.filter_eq(sparse.spgemm(a, sparse.transpose(e)), 2)
    count = _divide(cells.nnz, 3, "incidence")
    records = None
    if enumerate:
        endpoints = e.indices.reshape(-1, 2)
        xy = endpoints[cells.indices]
        records = tuple(
            TriangleRecord(i, x, y)
            for i, (x, y) in zip(cells.row_ids().tolist(), xy.tolist())
        )
    return TriangleCount(count, Algorithm.INCIDENCE, records)


def oracle_enumerate(g: Graph) -> tuple[TriangleCount, list[TriangleRecord]]:
    """Test every vertex triple ``i < j < k`` for mutual adjacency.

    Meant for small graphs (a few thousand vertices at most); it shares no
    code with the matrix kernels.
    """
    n = g.n
    adj = np.zeros((n, n), dtype=bool)
    for u, v in g.edge_list:
        adj[u, v] = adj[v, u] = True
    rows = adj.tolist()
    found = []
    for i, j, k in combinations(range(n), 3):
        if rows[i][j] and rows[i][k] and rows[j][k]:
            found.append(TriangleRecord(i, j, k))
    return TriangleCount(len(found), Algorithm.ORACLE), found


def count(g: Graph, algorithm: Algorithm | str) -> TriangleCount:
    """Dispatch by algorithm name on a graph."""
    algorithm = Algorithm(algorithm)
    if algorithm is Algorithm.HADAMARD:
        return count_hadamard(g.adjacency)
    if algorithm is Algorithm.LU:
        return count_lu(g.adjacency)
    if algorithm is Algorithm.INCIDENCE:
        return count_incidence(g.adjacency, g.incidence)
    return oracle_enumerate(g)[0]
