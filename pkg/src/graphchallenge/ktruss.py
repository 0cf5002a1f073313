"""k-truss peeling on the unoriented incidence matrix.

The working state is the incidence ``E`` of the live edges and ``R = E A``,
where ``A = E^T E - diag(d)`` and ``d`` holds vertex degrees (column sums of
``E``).  Entry ``R(e, w)`` is 2 exactly when ``w`` is adjacent to both
endpoints of ``e``, so the support of ``e`` is the number of 2s in its row.

When a batch of rows ``x`` is removed, ``R`` is not recomputed.  With
``E_x`` the removed rows, ``E_x^T E_x - diag(d_x)`` is the adjacency of the
removed edges, and subtracting ``E (E_x^T E_x - diag(d_x))`` from the kept
rows of ``R`` leaves ``E A`` for the surviving graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import sparse
from .errors import ContractViolation
from .graph import EdgeList, Graph, adjacency_from_incidence, check_incidence, edge_list_from_incidence
from .sparse import SparseMatrix


@dataclass
class TrussState:
    e_mat: SparseMatrix
    r_mat: SparseMatrix
    support: np.ndarray
    live_edge_ids: np.ndarray
    rounds: int = 0

    @property
    def live(self) -> int:
        return self.e_mat.nrows


@dataclass
class TrussResult:
    """Outcome of a single k-truss run or a full decomposition.

    ``per_edge_max_k[i]`` is the largest k whose truss contains input edge
    ``i`` (input incidence row ``i``); it is only filled by
    :func:`truss_decomposition`, where ``k`` is the largest non-empty truss.
    """

    k: int
    surviving_edges: EdgeList
    surviving_ids: np.ndarray
    incidence: SparseMatrix | None = None
    per_edge_max_k: np.ndarray | None = None
    input_edges: np.ndarray | None = None

    def edges_at(self, k: int) -> EdgeList:
        """Edge list of the k-truss, rebuilt from a decomposition."""
        if self.per_edge_max_k is None or self.input_edges is None:
            raise ContractViolation("edges_at needs a decomposition result")
        pairs = self.input_edges[self.per_edge_max_k >= k]
        return EdgeList.canonical(self.surviving_edges.n, pairs[:, 0], pairs[:, 1])


def _support(r_mat: SparseMatrix) -> np.ndarray:
    return sparse.row_reduce(sparse.filter_eq(r_mat, 2))


def compute_support(e_mat: SparseMatrix) -> np.ndarray:
    """Triangles through each edge, from ``E A`` computed from scratch."""
    check_incidence(e_mat)
    r_mat = sparse.spgemm(e_mat, adjacency_from_incidence(e_mat))
    return _support(r_mat)


def initial_state(e_mat: SparseMatrix) -> TrussState:
    check_incidence(e_mat)
    degrees = sparse.col_reduce(e_mat)
    a = sparse.subtract(sparse.spgemm(sparse.transpose(e_mat), e_mat), sparse.diag_from_vector(degrees))
    r_mat = sparse.spgemm(e_mat, a)
    return TrussState(e_mat, r_mat, _support(r_mat), np.arange(e_mat.nrows, dtype=np.int64))


def peel_round(state: TrussState, k: int) -> TrussState | None:
    """Drop every edge with support below ``k - 2`` at once.

    Returns the new state, or None when no edge violates the threshold.
    """
    x = np.flatnonzero(state.support < k - 2)
    if x.size == 0:
        return None
    keep = np.setdiff1d(np.arange(state.live), x, assume_unique=True)
    e_x = sparse.select_rows(state.e_mat, x)
    e_mat = sparse.select_rows(state.e_mat, keep)
    d_x = sparse.col_reduce(e_x)
    r_mat = sparse.select_rows(state.r_mat, keep)
    removed_adj = sparse.subtract(sparse.spgemm(sparse.transpose(e_x), e_x), sparse.diag_from_vector(d_x))
    r_mat = sparse.subtract(r_mat, sparse.spgemm(e_mat, removed_adj))
    return TrussState(e_mat, r_mat, _support(r_mat), state.live_edge_ids[keep], state.rounds + 1)


def iter_peel(state: TrussState, k: int) -> Iterator[TrussState]:
    """Yield the state after each peeling round until the k-truss is reached."""
    while True:
        nxt = peel_round(state, k)
        if nxt is None:
            return
        state = nxt
        yield state


def _check_k(k: int) -> None:
    if k < 2:
        raise ContractViolation(f"k must be >= 2, got {k}")


def ktruss(
    e_mat: SparseMatrix,
    k: int,
    on_round: Callable[[TrussState], None] | None = None,
) -> TrussResult:
    """Maximal subgraph in which every edge lies in at least ``k - 2`` triangles.

    ``on_round`` sees the state after every round, starting with the initial one.
    """
    _check_k(k)
    check_incidence(e_mat)
    if k == 2:
        return TrussResult(2, edge_list_from_incidence(e_mat), np.arange(e_mat.nrows), e_mat)
    state = initial_state(e_mat)
    if on_round is not None:
        on_round(state)
    for state in iter_peel(state, k):
        if on_round is not None:
            on_round(state)
    return TrussResult(k, edge_list_from_incidence(state.e_mat), state.live_edge_ids, state.e_mat)


def truss_decomposition(e_mat: SparseMatrix) -> TrussResult:
    """Largest surviving k for every edge.

    Runs the 3-truss, then keeps peeling the survivors with k raised by one
    until nothing is left.  The peeling state carries over between values of
    k, which is the same as restarting from the surviving incidence matrix.
    Edges in no triangle get 2.
    """
    check_incidence(e_mat)
    input_edges = e_mat.indices.reshape(-1, 2).copy()
    max_k = np.full(e_mat.nrows, 2, dtype=np.int64)
    state = initial_state(e_mat)
    best = (2, state)
    k = 3
    while state.live:
        for state in iter_peel(state, k):
            pass
        if not state.live:
            break
        max_k[state.live_edge_ids] = k
        best = (k, state)
        k += 1
    top_k, top = best
    return TrussResult(
        top_k,
        edge_list_from_incidence(top.e_mat),
        top.live_edge_ids,
        top.e_mat,
        per_edge_max_k=max_k,
        input_edges=input_edges,
    )


def oracle_ktruss(g: Graph, k: int) -> TrussResult:
    """Reference k-truss by repeated from-scratch support recomputation.

    Each step recounts every live edge's triangles from neighbour sets and
    removes one violating edge of minimum support (lowest pair on ties).
    """
    _check_k(k)
    nbrs = g.neighbor_sets()
    live = {tuple(e) for e in g.edge_list}
    while True:
        worst = None
        for u, v in live:
            s = len(nbrs[u] & nbrs[v])
            if s < k - 2 and (worst is None or (s, (u, v)) < worst):
                worst = (s, (u, v))
        if worst is None:
            break
        u, v = worst[1]
        live.discard((u, v))
        nbrs[u].discard(v)
        nbrs[v].discard(u)
    pairs = np.array(sorted(live), dtype=np.int64).reshape(-1, 2)
    index = {e: i for i, e in enumerate(g.edge_list)}
    ids = np.array([index[tuple(p)] for p in pairs.tolist()], dtype=np.int64)
    return TrussResult(k, EdgeList(g.n, pairs), ids)
