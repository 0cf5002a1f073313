import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphchallenge import sparse
from graphchallenge.errors import ContractViolation
from graphchallenge.sparse import SparseMatrix

from strategies import int_matrices, k3

K3_DENSE = np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]])


def naive_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n, k = a.shape
    m = b.shape[1]
    out = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        for j in range(m):
            total = 0
            for t in range(k):
                total += int(a[i, t]) * int(b[t, j])
            out[i, j] = total
    return out


def random_sparse(rng, nrows, ncols, density=0.2) -> np.ndarray:
    mask = rng.random((nrows, ncols)) < density
    return np.where(mask, rng.integers(-4, 5, (nrows, ncols)), 0)


def test_constructor_rejects_explicit_zero():
    with pytest.raises(ContractViolation):
        SparseMatrix(1, 2, [0, 1], [0], [0])


def test_constructor_rejects_unsorted_row():
    with pytest.raises(ContractViolation):
        SparseMatrix(1, 3, [0, 2], [2, 0], [1, 1])


def test_constructor_rejects_out_of_range():
    with pytest.raises(ContractViolation):
        SparseMatrix(1, 2, [0, 1], [2], [1])


def test_from_triples_rejects_duplicates():
    with pytest.raises(ContractViolation):
        SparseMatrix.from_triples(2, 2, [0, 0], [1, 1], [1, 1])


def test_matrices_are_read_only():
    a = SparseMatrix.from_dense(K3_DENSE)
    with pytest.raises(ValueError):
        a.data[0] = 7


class TestSpgemm:
    def test_k3_squared(self):
        # hand product: each vertex has two length-2 walks home and one to each other vertex
        a = SparseMatrix.from_dense(K3_DENSE)
        assert sparse.spgemm(a, a).to_dense().tolist() == [[2, 1, 1], [1, 2, 1], [1, 1, 2]]

    def test_identity_left(self):
        a = SparseMatrix.from_dense(K3_DENSE)
        assert sparse.spgemm(SparseMatrix.identity(3), a) == a

    def test_empty_annihilates(self):
        b = SparseMatrix.from_dense(np.arange(12).reshape(3, 4))
        out = sparse.spgemm(SparseMatrix.zeros(2, 3), b)
        assert out.shape == (2, 4) and out.nnz == 0

    def test_dimension_mismatch_names_shapes(self):
        with pytest.raises(ContractViolation, match=r"\(2, 3\).*\(2, 3\)"):
            sparse.spgemm(SparseMatrix.zeros(2, 3), SparseMatrix.zeros(2, 3))

    def test_cancellation_drops_zero(self):
        a = SparseMatrix.from_dense([[1, 1]])
        b = SparseMatrix.from_dense([[1], [-1]])
        out = sparse.spgemm(a, b)
        assert out.nnz == 0
        out.validate()

    @pytest.mark.parametrize("seed", range(100))
    def test_matches_triple_loop(self, seed):
        rng = np.random.default_rng(seed)
        n, k, m = (int(x) for x in rng.integers(1, 41, 3))
        a = random_sparse(rng, n, k)
        b = random_sparse(rng, k, m)
        out = sparse.spgemm(SparseMatrix.from_dense(a), SparseMatrix.from_dense(b))
        out.validate()
        np.testing.assert_array_equal(out.to_dense(), naive_matmul(a, b))


class TestHadamard:
    def test_binary_idempotent(self):
        a = SparseMatrix.from_dense(K3_DENSE)
        assert sparse.hadamard(a, a) == a

    def test_zero_annihilates(self):
        a = SparseMatrix.from_dense(K3_DENSE)
        assert sparse.hadamard(a, SparseMatrix.zeros(3, 3)).nnz == 0

    def test_k3_masked_square(self):
        a = SparseMatrix.from_dense(K3_DENSE)
        c = sparse.hadamard(sparse.spgemm(a, a), a)
        assert c.to_dense().tolist() == K3_DENSE.tolist()

    def test_shape_mismatch(self):
        with pytest.raises(ContractViolation):
            sparse.hadamard(SparseMatrix.zeros(2, 3), SparseMatrix.zeros(3, 2))

    @given(st.integers(0, 6).flatmap(lambda r: st.integers(0, 6).flatmap(
        lambda c: st.tuples(int_matrices(shape=(r, c)), int_matrices(shape=(r, c))))))
    def test_commutes(self, pair):
        a, b = (SparseMatrix.from_dense(x) for x in pair)
        ab = sparse.hadamard(a, b)
        assert ab == sparse.hadamard(b, a)
        np.testing.assert_array_equal(ab.to_dense(), pair[0] * pair[1])


class TestReductions:
    def test_sum_all(self):
        a = SparseMatrix.from_dense(K3_DENSE)
        assert sparse.sum_all(SparseMatrix.zeros(4, 4)) == 0
        assert sparse.sum_all(a) == 6
        assert sparse.sum_all(sparse.hadamard(sparse.spgemm(a, a), a)) == 6

    def test_incidence_reductions(self):
        e = k3().incidence
        assert sparse.col_reduce(e).tolist() == [2, 2, 2]
        assert sparse.row_reduce(e).tolist() == [2, 2, 2]

    def test_col_reduce_empty(self):
        out = sparse.col_reduce(SparseMatrix.zeros(0, 5))
        assert out.tolist() == [0] * 5 and out.dtype == np.int64

    @given(int_matrices())
    def test_reductions_match_numpy(self, dense):
        a = SparseMatrix.from_dense(dense)
        np.testing.assert_array_equal(sparse.row_reduce(a), dense.sum(axis=1))
        np.testing.assert_array_equal(sparse.col_reduce(a), dense.sum(axis=0))


class TestFilterEq:
    def test_k3_wedge_closure(self):
        # E A for K3: each edge row is A[u] + A[v] = [1, 1, 2] up to column order
        g = k3()
        r = sparse.spgemm(g.incidence, g.adjacency)
        assert r.to_dense().tolist() == [[1, 1, 2], [1, 2, 1], [2, 1, 1]]
        hits = sparse.filter_eq(r, 2)
        assert hits.nnz == 3
        assert sparse.row_reduce(hits).tolist() == [1, 1, 1]

    def test_absent_value(self):
        a = SparseMatrix.from_dense(K3_DENSE)
        assert sparse.filter_eq(a, 5).nnz == 0

    def test_binary_identity(self):
        a = SparseMatrix.from_dense(K3_DENSE)
        assert sparse.filter_eq(a, 1) == a

    def test_zero_target_rejected(self):
        with pytest.raises(ContractViolation):
            sparse.filter_eq(SparseMatrix.zeros(2, 2), 0)


class TestStructural:
    def test_triangular_split_k3(self):
        lower, upper = sparse.triangular_split(k3().adjacency)
        assert sorted((r, c) for r, c, _ in lower.entries()) == [(1, 0), (2, 0), (2, 1)]
        assert sorted((r, c) for r, c, _ in upper.entries()) == [(0, 1), (0, 2), (1, 2)]

    def test_triangular_split_drops_diagonal(self):
        lower, upper = sparse.triangular_split(SparseMatrix.identity(3))
        assert lower.nnz == upper.nnz == 0

    def test_subtract_self(self):
        a = SparseMatrix.from_dense(K3_DENSE)
        assert sparse.subtract(a, a).nnz == 0

    def test_select_all_rows(self):
        e = k3().incidence
        assert sparse.select_rows(e, range(e.nrows)) == e

    def test_select_rows_keeps_relative_order(self):
        a = SparseMatrix.from_dense(np.arange(1, 13).reshape(4, 3))
        assert sparse.select_rows(a, [3, 1]).to_dense().tolist() == [[4, 5, 6], [10, 11, 12]]

    @pytest.mark.parametrize("keep", [[0, 0], [5], [-1]])
    def test_select_rows_rejects_bad_indices(self, keep):
        with pytest.raises(ContractViolation):
            sparse.select_rows(SparseMatrix.zeros(3, 3), keep)

    def test_diag_from_vector_drops_zeros(self):
        d = sparse.diag_from_vector([3, 0, -1])
        assert d.to_dense().tolist() == [[3, 0, 0], [0, 0, 0], [0, 0, -1]]
        assert d.nnz == 2

    def test_add_shape_mismatch(self):
        with pytest.raises(ContractViolation):
            sparse.add(SparseMatrix.zeros(2, 2), SparseMatrix.zeros(2, 3))

    @given(int_matrices())
    def test_double_transpose(self, dense):
        a = SparseMatrix.from_dense(dense)
        t = sparse.transpose(a)
        t.validate()
        np.testing.assert_array_equal(t.to_dense(), dense.T)
        assert sparse.transpose(t) == a

    @given(st.integers(0, 6).flatmap(lambda r: st.integers(0, 6).flatmap(
        lambda c: st.tuples(int_matrices(shape=(r, c)), int_matrices(shape=(r, c))))))
    def test_add_subtract_inverse(self, pair):
        a, b = (SparseMatrix.from_dense(x) for x in pair)
        diff = sparse.subtract(b, a)
        diff.validate()
        assert sparse.add(a, diff) == b

    @given(int_matrices())
    def test_identity_right(self, dense):
        a = SparseMatrix.from_dense(dense)
        assert sparse.spgemm(a, SparseMatrix.identity(a.ncols)) == a

    @settings(max_examples=50)
    @given(int_matrices(max_dim=6), int_matrices(max_dim=6))
    def test_no_operation_stores_zero(self, x, y):
        a = SparseMatrix.from_dense(x)
        b = SparseMatrix.from_dense(y)
        outs = [sparse.transpose(a), sparse.filter_eq(a, 1), sparse.filter_eq(a, -2)]
        if a.shape == b.shape:
            outs += [sparse.add(a, b), sparse.subtract(a, b), sparse.hadamard(a, b)]
        if a.ncols == b.nrows:
            outs.append(sparse.spgemm(a, b))
        if a.nrows == a.ncols:
            outs.extend(sparse.triangular_split(a))
        for out in outs:
            out.validate()
            assert not np.any(out.data == 0)
