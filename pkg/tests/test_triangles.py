import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphchallenge import ktruss, sparse, triangles
from graphchallenge.errors import ContractViolation, InvalidAdjacencyError
from graphchallenge.generator import grid_graph
from graphchallenge.graph import EdgeList, Graph
from graphchallenge.sparse import SparseMatrix
from graphchallenge.triangles import (
    Algorithm,
    TriangleRecord,
    count_hadamard,
    count_incidence,
    count_lu,
    oracle_enumerate,
)

from strategies import erdos_renyi, graphs, k3, k4, path3, random_suite

MATRIX_ALGOS = (Algorithm.HADAMARD, Algorithm.LU, Algorithm.INCIDENCE)


def all_counts(g: Graph) -> dict[Algorithm, int]:
    return {algo: triangles.count(g, algo).count for algo in Algorithm}


class TestHadamard:
    def test_k3(self):
        assert count_hadamard(k3().adjacency).count == 1

    def test_k4(self):
        assert count_hadamard(k4().adjacency).count == 4

    def test_grid3(self):
        assert count_hadamard(grid_graph(3).adjacency).count == 16

    def test_loop_breaks_divisibility(self):
        # K3 plus a self-loop at vertex 0: sum(A^2 .* A) = 13
        a = SparseMatrix.from_dense([[1, 1, 1], [1, 0, 1], [1, 1, 0]])
        with pytest.raises(InvalidAdjacencyError):
            count_hadamard(a)


class TestLU:
    def test_k3(self):
        # L U for K3 is nonzero at (1,2), (2,1) and the diagonal; A masks to 2 cells
        lower, upper = sparse.triangular_split(k3().adjacency)
        b = sparse.spgemm(lower, upper)
        assert b.to_dense().tolist() == [[0, 0, 0], [0, 1, 1], [0, 1, 2]]
        assert sparse.sum_all(sparse.hadamard(k3().adjacency, b)) == 2
        assert count_lu(k3().adjacency).count == 1

    def test_empty(self):
        assert count_lu(SparseMatrix.zeros(5, 5)).count == 0

    def test_k4(self):
        assert count_lu(k4().adjacency).count == oracle_enumerate(k4())[0].count == 4

    def test_asymmetric_input_detected(self):
        # K3 without A(1,0): L U = {(2,1): 1, (2,2): 2}, masked sum 1
        a = SparseMatrix.from_dense([[0, 1, 1], [0, 0, 1], [1, 1, 0]])
        with pytest.raises(InvalidAdjacencyError):
            count_lu(a)


class TestIncidence:
    def test_k3(self):
        res = count_incidence(k3().adjacency, k3().incidence, enumerate=True)
        assert res.count == 1
        assert sorted(res.records) == [
            TriangleRecord(0, 1, 2),
            TriangleRecord(1, 0, 2),
            TriangleRecord(2, 0, 1),
        ]

    def test_path(self):
        assert count_incidence(path3().adjacency, path3().incidence).count == 0

    def test_k4_cells(self):
        # 6 edges, each closed by the 2 other vertices: 12 cells
        g = k4()
        res = count_incidence(g.adjacency, g.incidence, enumerate=True)
        assert len(res.records) == 12 and res.count == 4
        assert res.records is not None
        for rec in res.records:
            assert rec.x < rec.y and rec.apex not in (rec.x, rec.y)

    def test_records_only_on_request(self):
        assert count_incidence(k4().adjacency, k4().incidence).records is None

    def test_shape_mismatch(self):
        with pytest.raises(ContractViolation):
            count_incidence(k3().adjacency, k4().incidence)


class TestOracle:
    def test_k4(self):
        tc, records = oracle_enumerate(k4())
        assert tc.count == 4 and len(records) == 4

    def test_bipartite(self):
        g = Graph.from_edges(6, [(i, j) for i in range(3) for j in range(3, 6)])
        assert oracle_enumerate(g)[0].count == 0

    def test_grid2(self):
        assert oracle_enumerate(grid_graph(2))[0].count == 4


@pytest.mark.parametrize("M", [2, 3, 4, 8])
def test_grid_agreement(M):
    counts = all_counts(grid_graph(M))
    assert len(set(counts.values())) == 1, counts


@pytest.mark.parametrize("seed, g", random_suite(), ids=lambda x: str(x) if isinstance(x, int) else "")
def test_random_agreement(seed, g):
    counts = all_counts(g)
    assert len(set(counts.values())) == 1, counts


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=14), st.randoms(use_true_random=False))
def test_permutation_invariance(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    relabeled = Graph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edge_list])
    for algo in MATRIX_ALGOS:
        assert triangles.count(relabeled, algo).count == triangles.count(g, algo).count


@pytest.mark.parametrize("seed", range(30))
def test_edge_deletion_removes_its_support(seed):
    g = erdos_renyi(25, 0.3, seed)
    if g.m == 0:
        pytest.skip("no edges")
    support = ktruss.compute_support(g.incidence)
    j = seed % g.m
    rest = np.delete(g.edge_list.edges, j, axis=0)
    smaller = Graph(EdgeList(g.n, rest))
    before = count_hadamard(g.adjacency).count
    assert before - count_hadamard(smaller.adjacency).count == support[j]
