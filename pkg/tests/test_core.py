import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from klpdhg.core import (
    Dataset,
    DesignMatrix,
    PenaltyParams,
    log1pexp,
    mat_tvec,
    mat_vec,
    objective,
    operator_norm,
)
from klpdhg.exceptions import ContractError, DataError, ParameterError

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def both(A):
    A = np.asarray(A, dtype=float)
    return [DesignMatrix(A), DesignMatrix(sp.csr_matrix(A))]


class TestDesignMatrix:
    def test_dense_is_read_only(self):
        A = DesignMatrix([[1.0, 2.0]])
        with pytest.raises(ValueError):
            A.matrix[0, 0] = 5.0

    def test_source_array_not_aliased(self):
        src = np.ones((2, 2))
        A = DesignMatrix(src)
        src[0, 0] = 7.0
        assert A.matrix[0, 0] == 1.0

    def test_csr_canonicalised(self):
        # unsorted columns and a duplicate entry
        M = sp.csr_matrix((np.array([1.0, 2.0, 3.0]), np.array([2, 0, 0]), np.array([0, 3])),
                          shape=(1, 3))
        A = DesignMatrix(M)
        assert A.is_sparse
        np.testing.assert_array_equal(A.matrix.indices, [0, 2])
        np.testing.assert_array_equal(A.toarray(), [[5.0, 0.0, 1.0]])

    @pytest.mark.parametrize("bad", [[[np.nan]], [[np.inf, 1.0]]])
    def test_rejects_nonfinite(self, bad):
        with pytest.raises(DataError):
            DesignMatrix(bad)

    def test_rejects_empty_and_1d(self):
        with pytest.raises(DataError):
            DesignMatrix(np.zeros((0, 3)))
        with pytest.raises(ContractError):
            DesignMatrix([1.0, 2.0])

    def test_from_csr_checks_invariants(self):
        A = DesignMatrix.from_csr([0, 2, 3], [0, 2, 1], [1.0, 2.0, 3.0], (2, 3))
        np.testing.assert_array_equal(A.toarray(), [[1, 0, 2], [0, 3, 0]])
        with pytest.raises(ContractError):
            DesignMatrix.from_csr([0, 2, 3], [2, 0, 1], [1.0, 2.0, 3.0], (2, 3))
        with pytest.raises(ContractError):
            DesignMatrix.from_csr([0, 2, 2], [0, 1, 1], [1.0, 2.0, 3.0], (2, 3))
        with pytest.raises(ContractError):
            DesignMatrix.from_csr([0, 1, 2], [0, 3], [1.0, 2.0], (2, 3))


class TestDataset:
    def test_wraps_plain_arrays(self):
        d = Dataset([[1.0, 2.0], [3.0, 4.0]], [1, 0])
        assert isinstance(d.design, DesignMatrix)
        assert d.m == 2 and d.n == 2

    def test_rejects_nonbinary(self):
        with pytest.raises(DataError):
            Dataset([[1.0], [2.0]], [0, 2])

    def test_rejects_length_mismatch(self):
        with pytest.raises(ContractError):
            Dataset([[1.0], [2.0]], [0, 1, 1])


class TestPenaltyParams:
    def test_derived_weights(self):
        p = PenaltyParams(0.1, 0.9)
        assert p.lambda1(200) == pytest.approx(18.0)
        assert p.lambda2(200) == pytest.approx(2.0)
        assert p.lambda1(200) + p.lambda2(200) == pytest.approx(200 * 0.1)

    @pytest.mark.parametrize("lam,alpha", [(0.0, 0.5), (-1.0, 0.5), (1.0, -0.1), (1.0, 1.5)])
    def test_rejects_out_of_range(self, lam, alpha):
        with pytest.raises(ParameterError):
            PenaltyParams(lam, alpha)


class TestKernels:
    @pytest.mark.parametrize("A", both(np.eye(2)))
    def test_identity(self, A):
        np.testing.assert_array_equal(mat_vec(A, [3.0, -2.0]), [3.0, -2.0])
        np.testing.assert_array_equal(mat_tvec(A, [5.0, 7.0]), [5.0, 7.0])

    @pytest.mark.parametrize("A", both([[1.0, 2.0], [3.0, 4.0]]))
    def test_two_by_two(self, A):
        np.testing.assert_array_equal(mat_vec(A, [1.0, 1.0]), [3.0, 7.0])
        np.testing.assert_array_equal(mat_tvec(A, [1.0, 0.0]), [1.0, 2.0])

    def test_zero_vector(self):
        rng = np.random.default_rng(3)
        for A in both(rng.standard_normal((5, 4))):
            np.testing.assert_array_equal(mat_vec(A, np.zeros(4)), np.zeros(5))

    def test_transpose_matches_explicit_transpose(self):
        rng = np.random.default_rng(4)
        M = rng.standard_normal((4, 3))
        s = rng.standard_normal(4)
        oracle = DesignMatrix(M.T.copy())
        for A in both(M):
            np.testing.assert_allclose(mat_tvec(A, s), mat_vec(oracle, s), rtol=1e-14)

    def test_dimension_mismatch(self):
        A = DesignMatrix(np.ones((3, 2)))
        with pytest.raises(ContractError):
            mat_vec(A, np.ones(3))
        with pytest.raises(ContractError):
            mat_tvec(A, np.ones(2))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 2**31 - 1))
    def test_adjointness(self, m, n, seed):
        rng = np.random.default_rng(seed)
        M = rng.standard_normal((m, n)) * (rng.random((m, n)) < 0.6)
        theta = rng.standard_normal(n)
        s = rng.standard_normal(m)
        for A in both(M):
            lhs = np.dot(mat_vec(A, theta), s)
            rhs = np.dot(theta, mat_tvec(A, s))
            scale = np.abs(M).sum() * np.abs(theta).max() * np.abs(s).max() + 1e-300
            assert abs(lhs - rhs) <= 1e-12 * scale


class TestOperatorNorm:
    @pytest.mark.parametrize("A", both([[3.0, 4.0], [0.0, 1.0]]))
    def test_three_four_five(self, A):
        assert operator_norm(A) == 5.0

    @pytest.mark.parametrize("A", both(np.zeros((3, 2))))
    def test_zero(self, A):
        assert operator_norm(A) == 0.0

    def test_empty_rows_in_csr(self):
        M = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 0.0], [0.0, 2.0]])
        assert operator_norm(DesignMatrix(sp.csr_matrix(M))) == 2.0

    def test_matches_brute_force(self):
        rng = np.random.default_rng(5)
        M = rng.standard_normal((50, 20))
        brute = max(math.sqrt(sum(x * x for x in row)) for row in M.tolist())
        for A in both(M):
            assert operator_norm(A) == pytest.approx(brute, rel=1e-15)

    @settings(max_examples=100, deadline=None)
    @given(arrays(np.float64, (6, 4), elements=finite), arrays(np.float64, 6, elements=finite))
    def test_dual_norm_inequality(self, M, s):
        A = DesignMatrix(M)
        lhs = np.linalg.norm(mat_tvec(A, s))
        assert lhs <= operator_norm(A) * np.abs(s).sum() * (1 + 1e-12) + 1e-300


class TestObjective:
    def test_log1pexp_stable(self):
        assert log1pexp(1000.0) == pytest.approx(1000.0)
        assert log1pexp(-1000.0) == pytest.approx(0.0, abs=1e-300)
        assert log1pexp(0.0) == pytest.approx(math.log(2.0))

    def test_zero_iterate_gives_log2(self, small_data):
        p = PenaltyParams(0.3, 0.4)
        assert objective(small_data, np.zeros(small_data.n), p) == pytest.approx(math.log(2.0))

    def test_scalar_instance(self):
        d = Dataset([[1.0]], [0.0])
        val = objective(d, np.array([1.0]), PenaltyParams(1.0, 1.0))
        assert val == pytest.approx(math.log(1.0 + math.e) + 1.0, rel=1e-14)
        assert val == pytest.approx(2.31326169, abs=1e-8)

    def test_large_logit_no_overflow(self):
        d = Dataset([[1000.0]], [0.0])
        val = objective(d, np.array([1.0]), PenaltyParams(1e-12, 0.5))
        assert np.isfinite(val)
        assert val == pytest.approx(1000.0)

    def test_dense_csr_agree(self, medium_data):
        rng = np.random.default_rng(6)
        theta = rng.standard_normal(medium_data.n)
        p = PenaltyParams(0.05, 0.7)
        csr = Dataset(DesignMatrix(sp.csr_matrix(medium_data.design.matrix)), medium_data.y)
        a = objective(medium_data, theta, p)
        b = objective(csr, theta, p)
        assert abs(a - b) <= 1e-12 * abs(a)
